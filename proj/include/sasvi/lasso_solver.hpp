#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sasvi/common.hpp"
#include "sasvi/dataset.hpp"

namespace sasvi {

struct SolverConfig {
    double gap_tol = 1e-10;           // relative duality gap: gap / max(1, primal)
    std::int64_t max_sweeps = 100000;
    bool active_set_cycling = true;
    // A full sweep must also move no coordinate by more than
    // step_tol * ||y|| (measured as |delta beta_j| * ||x_j||).
    double step_tol = 1e-12;

    void validate() const;
};

/**
 * A Lasso solve at one lambda together with its dual certificate.
 *
 * theta = r / max(lambda, ||X^T r||_inf) with r = y - X beta, so theta is
 * always dual feasible for the full problem. `gap` is the relative duality
 * gap of the full problem; `certified` means gap <= gap_tol.
 */
struct PrimalDualSolution {
    double lambda = 0.0;
    Vector beta;
    Vector theta;
    Vector correlations;  // X^T r over all features
    double dual_scale = 1.0;  // theta = r / dual_scale
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    double working_gap = 0.0;  // gap of the (possibly restricted) problem that was solved
    std::int64_t sweeps_used = 0;
    bool certified = false;
};

/// ||X^T y||_inf. Zero means y is orthogonal to every column (degenerate).
double lambda_max(const ProblemInstance& inst);

/// Throws if lambda_max(inst) == 0.
void require_nondegenerate(const ProblemInstance& inst);

/// Lasso objective 0.5 ||y - X beta||^2 + lambda ||beta||_1.
double primal_objective(const ProblemInstance& inst, double lambda, const Vector& beta);

/// Builds the dual point and certificate for a given beta over all features.
PrimalDualSolution certify(const ProblemInstance& inst, double lambda, const Vector& beta,
                           double gap_tol = SolverConfig{}.gap_tol);

/**
 * Cyclic coordinate descent with soft thresholding.
 *
 * A warm start is used only when its objective does not exceed the cold
 * start's. For lambda >= lambda_max the zero vector is returned directly.
 */
PrimalDualSolution solve(const ProblemInstance& inst, double lambda, const SolverConfig& config = {},
                         const Vector* warm_start = nullptr);

/// As solve(), with coordinates outside `working_set` held at zero. The
/// returned certificate still refers to the full problem.
PrimalDualSolution solve_on(const ProblemInstance& inst, double lambda, std::span<const Index> working_set,
                            const SolverConfig& config = {}, const Vector* warm_start = nullptr);

/// Indices j in `candidates` with |<x_j, y - X beta>| > lambda (1 + tol).
std::vector<Index> kkt_violations(const ProblemInstance& inst, const PrimalDualSolution& solution,
                                  std::span<const Index> candidates, double tol);

double soft_threshold(double z, double t);

}  // namespace sasvi
