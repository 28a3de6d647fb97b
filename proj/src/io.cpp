#include "sasvi/io.hpp"

#include <fstream>
#include <iomanip>

namespace sasvi {

namespace {

Json step_json(const StepMetrics& m) {
    Json j;
    j["lambda"] = m.lambda;
    j["lambda_ratio"] = m.lambda_ratio;
    j["discarded"] = m.discarded;
    j["survivors"] = m.survivors;
    j["screen_ms"] = m.screen_ms;
    j["solve_ms"] = m.solve_ms;
    j["kkt_readds"] = m.kkt_readds;
    j["violations"] = m.violations;
    j["gap"] = m.gap;
    j["sweeps"] = m.sweeps;
    j["certified"] = m.certified;
    j["baseline_diff"] = m.baseline_diff ? Json(*m.baseline_diff) : Json(nullptr);
    j["active_count"] = m.active_count ? Json(*m.active_count) : Json(nullptr);
    return j;
}

Json lane_json(const LaneResult& lane) {
    Json j;
    j["name"] = lane.name;
    j["aborted"] = lane.aborted;
    j["diagnostic"] = lane.diagnostic;
    j["total_screen_ms"] = lane.total_screen_ms();
    j["total_solve_ms"] = lane.total_solve_ms();
    j["total_ms"] = lane.total_ms();
    j["total_violations"] = lane.total_violations();
    j["max_baseline_diff"] = lane.max_baseline_diff();
    j["steps"] = Json::array();
    for (const auto& m : lane.steps) j["steps"].push_back(step_json(m));
    return j;
}

}  // namespace

Json metadata_json(const SyntheticData& data, bool standardized) {
    Json j;
    j["n"] = data.spec.n;
    j["p"] = data.spec.p;
    j["p_bar"] = data.spec.p_bar;
    j["rho"] = data.spec.rho;
    j["sigma"] = data.spec.sigma;
    j["seed"] = data.spec.seed;
    j["prng"] = kPrngName;
    j["standardized"] = standardized;
    j["support"] = data.support;
    return j;
}

void write_solution_csv(std::ostream& out, const PrimalDualSolution& sol) {
    out << "j,beta_j\n" << std::setprecision(17);
    for (Index j = 0; j < sol.beta.size(); ++j)
        if (sol.beta[j] != 0.0) out << j << ',' << sol.beta[j] << '\n';
}

Json solution_json(const PrimalDualSolution& sol) {
    Json j;
    j["lambda"] = sol.lambda;
    j["gap"] = sol.gap;
    j["sweeps"] = sol.sweeps_used;
    j["certified"] = sol.certified;
    j["primal"] = sol.primal;
    j["dual"] = sol.dual;
    return j;
}

void write_bounds_csv(std::ostream& out, const ScreeningAnchor& anchor, std::span<const double> lambda2s) {
    out << "j,lambda2,u_plus,u_minus,case_tag\n" << std::setprecision(17);
    for (double l2 : lambda2s) {
        const BScalars b = b_vector(anchor, l2);
        for (Index j = 0; j < anchor.p(); ++j) {
            const BoundPair bp = sasvi_bounds(anchor, b, j);
            out << j << ',' << l2 << ',' << bp.u_plus << ',' << bp.u_minus << ',' << bp.case_tag << '\n';
        }
    }
}

void write_report_csv(std::ostream& out, std::span<const ScreenReport> reports) {
    out << "rule,lambda1,lambda2,j,bound,discarded\n" << std::setprecision(17);
    for (const auto& r : reports) {
        std::size_t k = 0;
        for (Index j = 0; j < r.bounds.size(); ++j) {
            const bool gone = k < r.discarded.size() && r.discarded[k] == j;
            if (gone) ++k;
            out << to_string(r.rule) << ',' << r.lambda1 << ',' << r.lambda2 << ',' << j << ',' << r.bounds[j]
                << ',' << (gone ? 1 : 0) << '\n';
        }
    }
}

void write_sure_removal_csv(std::ostream& out, std::span<const SureRemovalRow> rows) {
    out << "j,lambda_2a,lambda_2y,case,lambda_s,flipped\n" << std::setprecision(17);
    for (const auto& row : rows) {
        const auto& p = row.profile;
        out << p.j << ',' << p.lambda_2a << ',' << p.lambda_2y << ',' << to_string(p.kind)
            << (p.tie ? "-tie" : "") << ',';
        if (row.lambda_s.finite())
            out << row.lambda_s.lower();
        else
            out << "none";
        out << ',' << (p.flipped ? 1 : 0) << '\n';
    }
}

void write_rejection_csv(std::ostream& out, std::span<const RejectionRow> rows) {
    out << "rule,lambda_ratio,rejection_ratio,screen_ms,solve_ms,violations\n" << std::setprecision(12);
    for (const auto& r : rows)
        out << r.rule << ',' << r.lambda_ratio << ',' << r.rejection_ratio << ',' << r.screen_ms << ','
            << r.solve_ms << ',' << r.violations << '\n';
}

Json path_result_json(const PathResult& result) {
    Json j;
    j["n"] = result.n;
    j["p"] = result.p;
    j["lambda_max"] = result.lambda_max;
    j["margin"] = result.margin;
    j["gap_tol"] = result.gap_tol;
    j["ok"] = result.ok();
    j["lambdas"] = result.lambdas;
    j["lanes"] = Json::array();
    for (const auto& lane : result.lanes) j["lanes"].push_back(lane_json(lane));
    j["baseline"] = result.baseline ? lane_json(*result.baseline) : Json(nullptr);
    return j;
}

Json bench_json(std::span<const BenchRow> rows) {
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json j;
        j["rule"] = r.rule;
        j["total_ms_mean"] = r.total_ms_mean;
        j["total_ms_std"] = r.total_ms_std;
        j["trials"] = r.trials;
        arr.push_back(j);
    }
    return arr;
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace sasvi
