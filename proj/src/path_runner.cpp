#include "sasvi/path_runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numeric>

#include "sasvi/dual_geometry.hpp"

namespace sasvi {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<Index> complement(const std::vector<Index>& sorted, Index p) {
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(p) - sorted.size());
    std::size_t k = 0;
    for (Index j = 0; j < p; ++j) {
        if (k < sorted.size() && sorted[k] == j) {
            ++k;
            continue;
        }
        out.push_back(j);
    }
    return out;
}

Index count_nonzero(const Vector& beta) { return (beta.array() != 0.0).count(); }

LaneResult run_baseline(const ProblemInstance& inst, const PathConfig& config, const std::vector<double>& lambdas,
                        std::vector<Vector>& betas) {
    LaneResult lane;
    lane.name = "unscreened";
    const double lmax = lambda_max(inst);
    Vector prev = Vector::Zero(inst.p());
    for (double lambda : lambdas) {
        const auto t0 = Clock::now();
        const PrimalDualSolution sol = solve(inst, lambda, config.solver, &prev);
        StepMetrics m;
        m.solve_ms = ms_since(t0);
        m.lambda = lambda;
        m.lambda_ratio = lambda / lmax;
        m.survivors = inst.p();
        m.gap = sol.gap;
        m.sweeps = sol.sweeps_used;
        m.certified = sol.certified;
        m.active_count = count_nonzero(sol.beta);
        lane.steps.push_back(m);
        betas.push_back(sol.beta);
        if (config.keep_solutions) lane.solutions.push_back(sol.beta);
        if (!sol.certified) {
            lane.aborted = true;
            lane.diagnostic = "baseline solve at lambda = " + std::to_string(lambda) +
                              " not certified (gap " + std::to_string(sol.gap) + ")";
            break;
        }
        prev = sol.beta;
    }
    return lane;
}

LaneResult run_lane(const ProblemInstance& inst, const PathConfig& config, RuleKind rule,
                    const std::vector<double>& lambdas, const std::vector<Vector>* baseline) {
    LaneResult lane;
    lane.name = std::string(to_string(rule));
    lane.rule = rule;
    const double lmax = lambda_max(inst);
    const double beta_tol = 10.0 * config.solver.gap_tol;

    const auto t_first = Clock::now();
    const ScreeningAnchor first = build_anchor(inst, solve(inst, lmax, config.solver));
    double pending_screen_ms = ms_since(t_first);

    PrimalDualSolution prev;
    bool have_prev = false;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        const double lambda = lambdas[k];
        StepMetrics m;
        m.lambda = lambda;
        m.lambda_ratio = lambda / lmax;

        const auto t0 = Clock::now();
        ScreenReport report;
        try {
            const bool use_first = config.fixed_anchor || !have_prev;
            const ScreeningAnchor built = use_first ? ScreeningAnchor{} : build_anchor(inst, prev);
            const ScreeningAnchor& anchor = use_first ? first : built;
            report = lambda >= anchor.lambda1 ? screen_at_anchor(rule, anchor, config.margin)
                                              : screen(rule, anchor, lambda, config.margin);
        } catch (const Error& e) {
            lane.aborted = true;
            lane.diagnostic = "screening at lambda = " + std::to_string(lambda) + " failed: " + e.what();
            break;
        }
        std::vector<Index> survivors = report.survivors();
        m.screen_ms = ms_since(t0) + pending_screen_ms;
        pending_screen_ms = 0.0;

        const auto t1 = Clock::now();
        const Vector warm = have_prev ? prev.beta : Vector::Zero(inst.p());
        PrimalDualSolution sol = solve_on(inst, lambda, survivors, config.solver, &warm);
        if (!is_safe(rule)) {
            for (Index round = 0; round < inst.p(); ++round) {
                const std::vector<Index> dropped = complement(survivors, inst.p());
                const std::vector<Index> bad = kkt_violations(inst, sol, dropped, config.kkt_tol);
                if (bad.empty()) break;
                m.kkt_readds += static_cast<Index>(bad.size());
                survivors.insert(survivors.end(), bad.begin(), bad.end());
                std::sort(survivors.begin(), survivors.end());
                const Vector restart = sol.beta;
                sol = solve_on(inst, lambda, survivors, config.solver, &restart);
            }
        }
        m.solve_ms = ms_since(t1);

        m.discarded = static_cast<Index>(report.discarded.size());
        m.survivors = inst.p() - m.discarded;
        m.gap = sol.gap;
        m.sweeps = sol.sweeps_used;
        m.certified = sol.certified;
        if (baseline != nullptr && k < baseline->size()) {
            const Vector& ref = (*baseline)[k];
            for (Index j : report.discarded)
                if (std::abs(ref[j]) > beta_tol) ++m.violations;
            m.baseline_diff = (sol.beta - ref).lpNorm<Eigen::Infinity>();
            m.active_count = count_nonzero(ref);
        } else if (is_safe(rule)) {
            m.violations = static_cast<Index>(kkt_violations(inst, sol, report.discarded, config.kkt_tol).size());
        }
        lane.steps.push_back(m);
        if (config.keep_solutions) lane.solutions.push_back(sol.beta);

        if (!sol.certified) {
            lane.aborted = true;
            lane.diagnostic = "solve at lambda = " + std::to_string(lambda) + " not certified (gap " +
                              std::to_string(sol.gap) + ")";
            break;
        }
        prev = std::move(sol);
        have_prev = true;
    }
    return lane;
}

}  // namespace

std::vector<double> materialize_grid(const GridSpec& grid, double lambda_max) {
    if (!(lambda_max > 0.0)) throw Error("grid: lambda_max must be positive");
    std::vector<double> out;
    if (!grid.lambdas.empty()) {
        out = grid.lambdas;
        for (double l : out)
            if (!(l > 0.0) || !std::isfinite(l) || l > lambda_max * (1.0 + 1e-12))
                throw Error("grid: explicit lambdas must lie in (0, lambda_max]");
        std::sort(out.begin(), out.end(), std::greater<>());
        if (std::adjacent_find(out.begin(), out.end()) != out.end())
            throw Error("grid: explicit lambdas must be distinct");
        for (double& l : out) l = std::min(l, lambda_max);
        return out;
    }
    if (grid.count < 1) throw Error("grid: count must be at least 1");
    if (!(grid.lo_ratio > 0.0) || !(grid.hi_ratio <= 1.0) || !(grid.lo_ratio <= grid.hi_ratio))
        throw Error("grid: ratios must satisfy 0 < lo <= hi <= 1");
    if (grid.count == 1) return {grid.hi_ratio * lambda_max};
    if (grid.lo_ratio == grid.hi_ratio) throw Error("grid: lo == hi needs count = 1");
    const double step = (grid.hi_ratio - grid.lo_ratio) / (grid.count - 1);
    for (int k = 0; k < grid.count; ++k) {
        const double ratio = k + 1 == grid.count ? grid.lo_ratio : grid.hi_ratio - k * step;
        out.push_back(ratio * lambda_max);
    }
    return out;
}

void PathConfig::validate() const {
    if (rules.empty()) throw Error("path: no rules configured");
    if (!(margin >= 0.0) || margin >= 1.0) throw Error("path: margin must lie in [0, 1)");
    if (!(kkt_tol >= 0.0)) throw Error("path: kkt_tol must be nonnegative");
    if (threads < 1) throw Error("path: threads must be at least 1");
    solver.validate();
}

double LaneResult::total_screen_ms() const {
    return std::accumulate(steps.begin(), steps.end(), 0.0,
                           [](double s, const StepMetrics& m) { return s + m.screen_ms; });
}

double LaneResult::total_solve_ms() const {
    return std::accumulate(steps.begin(), steps.end(), 0.0,
                           [](double s, const StepMetrics& m) { return s + m.solve_ms; });
}

Index LaneResult::total_violations() const {
    Index total = 0;
    for (const auto& m : steps) total += m.violations;
    return total;
}

double LaneResult::max_baseline_diff() const {
    double worst = 0.0;
    for (const auto& m : steps)
        if (m.baseline_diff) worst = std::max(worst, *m.baseline_diff);
    return worst;
}

bool PathResult::ok() const {
    if (baseline && baseline->aborted) return false;
    for (const auto& lane : lanes) {
        if (lane.aborted || lane.steps.size() != lambdas.size()) return false;
        for (const auto& m : lane.steps) {
            if (!m.certified) return false;
            if (lane.rule && is_safe(*lane.rule) && m.violations != 0) return false;
            if (m.baseline_diff && *m.baseline_diff > 10.0 * gap_tol) return false;
        }
    }
    return true;
}

const LaneResult* PathResult::lane(RuleKind rule) const {
    for (const auto& l : lanes)
        if (l.rule == rule) return &l;
    return nullptr;
}

PathResult run_path(const ProblemInstance& inst, const PathConfig& config) {
    config.validate();
    require_nondegenerate(inst);
    PathResult result;
    result.n = inst.n();
    result.p = inst.p();
    result.lambda_max = lambda_max(inst);
    result.margin = config.margin;
    result.gap_tol = config.solver.gap_tol;
    result.lambdas = materialize_grid(config.grid, result.lambda_max);

    std::vector<Vector> baseline_betas;
    if (config.baseline_unscreened)
        result.baseline = run_baseline(inst, config, result.lambdas, baseline_betas);
    const std::vector<Vector>* baseline = config.baseline_unscreened ? &baseline_betas : nullptr;

    result.lanes.resize(config.rules.size());
    const std::size_t width = static_cast<std::size_t>(config.threads);
    for (std::size_t start = 0; start < config.rules.size(); start += width) {
        const std::size_t stop = std::min(config.rules.size(), start + width);
        if (stop - start == 1) {
            result.lanes[start] = run_lane(inst, config, config.rules[start], result.lambdas, baseline);
            continue;
        }
        std::vector<std::future<LaneResult>> jobs;
        for (std::size_t i = start; i < stop; ++i)
            jobs.push_back(std::async(std::launch::async, run_lane, std::cref(inst), std::cref(config),
                                      config.rules[i], std::cref(result.lambdas), baseline));
        for (std::size_t i = start; i < stop; ++i) result.lanes[i] = jobs[i - start].get();
    }
    return result;
}

std::vector<RejectionRow> rejection_ratio_table(const PathResult& result) {
    std::vector<RejectionRow> rows;
    const double p = static_cast<double>(result.p);
    for (const auto& lane : result.lanes) {
        for (const auto& m : lane.steps) {
            rows.push_back({lane.name, m.lambda_ratio, static_cast<double>(m.discarded) / p, m.screen_ms,
                            m.solve_ms, m.violations});
        }
    }
    return rows;
}

std::vector<BenchRow> bench(const SyntheticSpec& spec, int trials, const PathConfig& config, bool standardize,
                            bool* all_ok) {
    if (trials < 1) throw Error("bench: trials must be at least 1");
    PathConfig cfg = config;
    cfg.baseline_unscreened = true;
    cfg.keep_solutions = false;
    std::vector<std::string> names;
    for (RuleKind r : cfg.rules) names.emplace_back(to_string(r));
    names.emplace_back("unscreened");
    std::vector<std::vector<double>> totals(names.size());
    bool ok = true;
    for (int t = 0; t < trials; ++t) {
        SyntheticSpec s = spec;
        s.seed = spec.seed + static_cast<std::uint64_t>(t);
        SyntheticData data = generate_synthetic(s);
        if (standardize) standardize_columns(data.X);
        const PathResult res = run_path(data.instance(), cfg);
        ok = ok && res.ok();
        for (std::size_t i = 0; i < res.lanes.size(); ++i) totals[i].push_back(res.lanes[i].total_ms());
        totals.back().push_back(res.baseline->total_ms());
    }
    std::vector<BenchRow> rows;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto& v = totals[i];
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        const double sd = v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) : 0.0;
        rows.push_back({names[i], mean, sd, trials});
    }
    if (all_ok != nullptr) *all_ok = ok;
    return rows;
}

}  // namespace sasvi
