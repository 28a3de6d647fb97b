#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sasvi/io.hpp"

namespace fs = std::filesystem;
using namespace sasvi;

namespace {

struct DataOptions {
    SyntheticSpec spec;
    bool standardize = false;
    std::string data;
    std::string x_path;
    std::string y_path;
    std::string format = "raw-f64";

    void add(CLI::App* app) {
        spec.n = 250;
        spec.p = 10000;
        spec.p_bar = 100;
        app->add_option("--n", spec.n, "samples")->capture_default_str();
        app->add_option("--p", spec.p, "features")->capture_default_str();
        app->add_option("--pbar", spec.p_bar, "nonzero true coefficients")->capture_default_str();
        app->add_option("--rho", spec.rho, "feature correlation rho^|i-j|")->capture_default_str();
        app->add_option("--sigma", spec.sigma, "noise scale")->capture_default_str();
        app->add_option("--seed", spec.seed, "generator seed")->capture_default_str();
        app->add_flag("--standardize", standardize, "scale columns to unit norm");
    }

    void add_input(CLI::App* app) {
        auto* data_opt = app->add_option("--data", data, "raw-f64 instance file (default: generate from flags)");
        auto* x_opt = app->add_option("--x", x_path, "csv design matrix");
        auto* y_opt = app->add_option("--y", y_path, "csv response");
        app->add_option("--format", format, "raw-f64 or csv")->capture_default_str();
        x_opt->needs(y_opt)->excludes(data_opt);
        y_opt->needs(x_opt);
    }

    ProblemInstance load() const {
        if (!data.empty()) return load_instance(data, parse_format(format));
        if (!x_path.empty()) return load_instance(x_path, DataFormat::csv, y_path);
        SyntheticData d = generate_synthetic(spec);
        if (standardize) standardize_columns(d.X);
        return d.instance();
    }
};

void add_path_options(CLI::App* app, PathConfig& cfg, std::string& rules) {
    app->add_option("--rules", rules, "comma-separated subset of sasvi,safe,dpp,strong")->capture_default_str();
    app->add_option("--grid", cfg.grid.count, "number of lambda values")->capture_default_str();
    app->add_option("--lo", cfg.grid.lo_ratio, "smallest lambda / lambda_max")->capture_default_str();
    app->add_option("--hi", cfg.grid.hi_ratio, "largest lambda / lambda_max")->capture_default_str();
    app->add_option("--margin", cfg.margin, "discard iff bound < 1 - margin")->capture_default_str();
    app->add_option("--gap-tol", cfg.solver.gap_tol, "relative duality gap for certification")->capture_default_str();
    app->add_flag("--baseline", cfg.baseline_unscreened, "also solve unscreened and compare");
    app->add_flag("--fixed-anchor", cfg.fixed_anchor, "screen every point from the lambda_max solution");
    app->add_option("--threads", cfg.threads, "concurrent lanes")->capture_default_str();
}

std::ostream& target(const std::string& path, std::optional<std::ofstream>& file) {
    if (path.empty() || path == "-") return std::cout;
    file.emplace(open_output(path));
    return *file;
}

ScreeningAnchor anchor_for(const ProblemInstance& inst, double ratio, const SolverConfig& solver) {
    if (ratio == 1.0) return trivial_anchor(inst);
    const PrimalDualSolution sol = solve(inst, ratio * lambda_max(inst), solver);
    if (!sol.certified) throw Error("anchor solve did not reach the gap tolerance");
    return build_anchor(inst, sol);
}

void check_ratio(double r, const char* name) {
    if (!(r > 0.0 && r <= 1.0)) throw Error(std::string(name) + " must be in (0, 1]");
}

int cmd_gen(const DataOptions& opt, const std::string& out_dir, const std::string& format) {
    SyntheticData d = generate_synthetic(opt.spec);
    if (opt.standardize) standardize_columns(d.X);
    ProblemInstance inst = d.instance();
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    if (parse_format(format) == DataFormat::csv)
        save_csv(dir / "X.csv", dir / "y.csv", inst.X(), inst.y());
    else
        save_raw(dir / "instance.bin", inst.X(), inst.y());
    Json meta = metadata_json(d, opt.standardize);
    meta["lambda_max"] = lambda_max(inst);
    open_output(dir / "instance.json") << std::setw(2) << meta << '\n';
    std::cout << "wrote " << inst.n() << " x " << inst.p() << " instance to " << dir.string() << '\n';
    return 0;
}

int cmd_screen(const DataOptions& opt, double r1, double r2, const std::string& rule_name, double margin,
               const SolverConfig& solver, bool verify, const std::string& out) {
    check_ratio(r1, "--lambda1");
    check_ratio(r2, "--lambda2");
    const RuleKind rule = parse_rule(rule_name);
    const ProblemInstance inst = opt.load();
    const ScreeningAnchor anc = anchor_for(inst, r1, solver);
    const ScreenReport rep = screen(rule, anc, r2 * anc.lambda_max, margin);

    std::optional<std::ofstream> file;
    if (!out.empty()) {
        const ScreenReport reports[] = {rep};
        write_report_csv(target(out, file), reports);
    }
    std::cout << to_string(rule) << ": discarded " << rep.discarded.size() << " of " << inst.p() << '\n';
    if (out.empty()) {
        for (Index j : rep.discarded) std::cout << j << '\n';
    }

    if (!verify) return 0;
    const PrimalDualSolution ref = solve(inst, rep.lambda2, solver);
    if (!ref.certified) {
        std::cerr << "verification solve not certified (gap " << ref.gap << ")\n";
        return 1;
    }
    Index bad = 0;
    for (Index j : rep.discarded)
        if (std::abs(ref.beta[j]) > 10.0 * solver.gap_tol) ++bad;
    std::cout << "verify: " << bad << " discarded features active at lambda2\n";
    return bad == 0 || !is_safe(rule) ? 0 : 1;
}

int cmd_sure_removal(const DataOptions& opt, double r1, double margin, const SolverConfig& solver,
                     const std::string& out) {
    check_ratio(r1, "--lambda1");
    const ProblemInstance inst = opt.load();
    const ScreeningAnchor anc = anchor_for(inst, r1, solver);
    std::vector<SureRemovalRow> rows;
    rows.reserve(static_cast<std::size_t>(inst.p()));
    for (Index j = 0; j < inst.p(); ++j) {
        SureRemovalRow row;
        row.profile = removal_profile(anc, j);
        row.lambda_s = sure_removal_lambda(anc, row.profile, margin);
        rows.push_back(row);
    }
    std::optional<std::ofstream> file;
    write_sure_removal_csv(target(out, file), rows);
    return 0;
}

int cmd_path(const DataOptions& opt, PathConfig cfg, const std::string& rules, const std::string& out_dir) {
    cfg.rules = parse_rules(rules);
    cfg.validate();
    const ProblemInstance inst = opt.load();
    const PathResult res = run_path(inst, cfg);
    const fs::path dir(out_dir);
    std::ofstream csv = open_output(dir / "rejection.csv");
    write_rejection_csv(csv, rejection_ratio_table(res));
    open_output(dir / "path.json") << std::setw(2) << path_result_json(res) << '\n';

    for (const auto& lane : res.lanes) {
        std::cout << std::left << std::setw(8) << lane.name << " total " << lane.total_ms() << " ms, violations "
                  << lane.total_violations();
        if (res.baseline) std::cout << ", max |beta - baseline| " << lane.max_baseline_diff();
        if (lane.aborted) std::cout << ", ABORTED: " << lane.diagnostic;
        std::cout << '\n';
    }
    if (res.baseline) {
        std::cout << "unscreened total " << res.baseline->total_ms() << " ms\n";
        double worst = 0.0;
        for (const auto& lane : res.lanes) worst = std::max(worst, lane.max_baseline_diff());
        std::cout << "baseline equivalence: " << (worst <= 10.0 * res.gap_tol ? "ok" : "FAILED")
                  << " (max diff " << worst << ", tol " << 10.0 * res.gap_tol << ")\n";
    }
    if (!res.ok()) {
        std::cerr << "path checks failed; outputs in " << dir.string() << " are partial (\"ok\": false)\n";
        return 1;
    }
    return 0;
}

int cmd_bench(const DataOptions& opt, PathConfig cfg, const std::string& rules, int trials, const std::string& out) {
    cfg.rules = parse_rules(rules);
    cfg.validate();
    bool all_ok = true;
    const std::vector<BenchRow> rows = bench(opt.spec, trials, cfg, opt.standardize, &all_ok);
    std::optional<std::ofstream> file;
    target(out, file) << std::setw(2) << bench_json(rows) << '\n';
    if (!all_ok) {
        std::cerr << "some bench runs failed their checks\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Safe screening for the Lasso: data generation, screening, paths and timing"};
    app.require_subcommand(1);

    DataOptions data;
    SolverConfig solver;
    PathConfig path_cfg;
    std::string rules = "sasvi,safe,dpp,strong";
    std::string out;
    std::string format = "raw-f64";
    std::string rule = "sasvi";
    double r1 = 1.0;
    double r2 = 0.5;
    double margin = kDefaultMargin;
    bool verify = false;
    int trials = 10;

    auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
    data.add(gen);
    gen->add_option("--out", out, "output directory")->required();
    gen->add_option("--format", format, "raw-f64 or csv")->capture_default_str();

    auto* scr = app.add_subcommand("screen", "screen at lambda2 from the solution at lambda1");
    data.add(scr);
    data.add_input(scr);
    scr->add_option("--lambda1", r1, "anchor lambda / lambda_max")->capture_default_str();
    scr->add_option("--lambda2", r2, "target lambda / lambda_max")->capture_default_str();
    scr->add_option("--rule", rule, "sasvi, safe, dpp or strong")->capture_default_str();
    scr->add_option("--margin", margin, "discard iff bound < 1 - margin")->capture_default_str();
    scr->add_option("--gap-tol", solver.gap_tol, "relative duality gap for certification")->capture_default_str();
    scr->add_flag("--verify", verify, "solve at lambda2 and check the discarded set");
    scr->add_option("--out", out, "report CSV (default: list discarded indices)");

    auto* sr = app.add_subcommand("sure-removal", "per-feature sure-removal parameters");
    data.add(sr);
    data.add_input(sr);
    sr->add_option("--lambda1", r1, "anchor lambda / lambda_max")->capture_default_str();
    sr->add_option("--margin", margin, "discard iff bound < 1 - margin")->capture_default_str();
    sr->add_option("--gap-tol", solver.gap_tol, "relative duality gap for certification")->capture_default_str();
    sr->add_option("--out", out, "CSV output (default: stdout)");

    auto* path = app.add_subcommand("path", "screen and solve along a lambda grid");
    data.add(path);
    data.add_input(path);
    add_path_options(path, path_cfg, rules);
    path->add_option("--out", out, "output directory")->required();

    auto* bn = app.add_subcommand("bench", "average path timings over synthetic trials");
    data.add(bn);
    add_path_options(bn, path_cfg, rules);
    bn->add_option("--trials", trials, "instances, seeds seed .. seed+trials-1")->capture_default_str();
    bn->add_option("--out", out, "JSON output (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(data, out, format);
        if (scr->parsed()) return cmd_screen(data, r1, r2, rule, margin, solver, verify, out);
        if (sr->parsed()) return cmd_sure_removal(data, r1, margin, solver, out);
        if (path->parsed()) return cmd_path(data, path_cfg, rules, out);
        if (bn->parsed()) return cmd_bench(data, path_cfg, rules, trials, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
