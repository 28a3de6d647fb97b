#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sasvi/common.hpp"
#include "sasvi/dataset.hpp"
#include "sasvi/lasso_solver.hpp"
#include "sasvi/screening_rules.hpp"

namespace sasvi {

/// Either explicit lambda values or `count` points equally spaced in
/// lambda / lambda_max between lo_ratio and hi_ratio.
struct GridSpec {
    std::vector<double> lambdas;
    int count = 100;
    double lo_ratio = 0.05;
    double hi_ratio = 1.0;
};

/// Strictly decreasing lambda values.
std::vector<double> materialize_grid(const GridSpec& grid, double lambda_max);

struct PathConfig {
    GridSpec grid;
    std::vector<RuleKind> rules{RuleKind::sasvi, RuleKind::safe, RuleKind::dpp, RuleKind::strong};
    double margin = kDefaultMargin;
    SolverConfig solver;
    bool baseline_unscreened = false;
    bool fixed_anchor = false;  // screen every point from the lambda_max anchor
    double kkt_tol = 1e-9;
    bool keep_solutions = false;
    int threads = 1;  // lanes run concurrently up to this many

    void validate() const;
};

struct StepMetrics {
    double lambda = 0.0;
    double lambda_ratio = 0.0;
    Index discarded = 0;
    Index survivors = 0;
    double screen_ms = 0.0;
    double solve_ms = 0.0;
    Index kkt_readds = 0;
    Index violations = 0;
    double gap = 0.0;
    std::int64_t sweeps = 0;
    bool certified = false;
    std::optional<double> baseline_diff;  // ||beta - beta_baseline||_inf
    std::optional<Index> active_count;    // nonzeros of the baseline solution
};

struct LaneResult {
    std::string name;  // rule name, or "unscreened" for the baseline
    std::optional<RuleKind> rule;
    std::vector<StepMetrics> steps;
    std::vector<Vector> solutions;  // filled when keep_solutions is set
    bool aborted = false;
    std::string diagnostic;

    double total_screen_ms() const;
    double total_solve_ms() const;
    double total_ms() const { return total_screen_ms() + total_solve_ms(); }
    Index total_violations() const;
    double max_baseline_diff() const;
};

struct PathResult {
    Index n = 0;
    Index p = 0;
    double lambda_max = 0.0;
    double margin = 0.0;
    double gap_tol = 0.0;
    std::vector<double> lambdas;
    std::vector<LaneResult> lanes;
    std::optional<LaneResult> baseline;

    /// True when no lane aborted, every step is certified, safe lanes have
    /// no violations and, with a baseline, every lane matches it within
    /// 10 * gap_tol.
    bool ok() const;
    const LaneResult* lane(RuleKind rule) const;
};

PathResult run_path(const ProblemInstance& inst, const PathConfig& config);

struct RejectionRow {
    std::string rule;
    double lambda_ratio = 0.0;
    double rejection_ratio = 0.0;
    double screen_ms = 0.0;
    double solve_ms = 0.0;
    Index violations = 0;
};

std::vector<RejectionRow> rejection_ratio_table(const PathResult& result);

struct BenchRow {
    std::string rule;
    double total_ms_mean = 0.0;
    double total_ms_std = 0.0;
    int trials = 0;
};

/// Runs the path on `trials` synthetic instances (seeds spec.seed,
/// spec.seed + 1, ...) with the unscreened baseline enabled and aggregates
/// total lane times. `all_ok` reports whether every run passed its checks.
std::vector<BenchRow> bench(const SyntheticSpec& spec, int trials, const PathConfig& config, bool standardize,
                            bool* all_ok = nullptr);

}  // namespace sasvi
