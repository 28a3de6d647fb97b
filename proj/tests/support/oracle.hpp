#pragma once

// Brute-force references for the screening geometry. Test support only.

#include <cstdint>
#include <vector>

#include "sasvi/dual_geometry.hpp"
#include "sasvi/lasso_solver.hpp"
#include "sasvi/screening_rules.hpp"

namespace sasvi::oracle {

struct OracleConfig {
    std::int64_t samples = 100000;
    std::int64_t planar_steps = 1000000;
    double tol = 1e-5;
    std::uint64_t seed = 12345;

    void validate() const;
};

struct SampleResult {
    double max = 0.0;
    std::int64_t accepted = 0;
};

/// Max of <x, theta> over uniform samples of the feasible set: the ball with diameter
/// [theta1, y/lambda2] cut by <theta1 - y/lambda1, theta - theta1> >= 0.
/// Uses only the raw vectors y and theta1 of the anchor.
SampleResult sample_feasible_max(const ScreeningAnchor& anchor, double lambda2, const Vector& x,
                                 const OracleConfig& config = {});

/// min <x, r> over {||r|| <= ||b||, <a, r + b> <= 0} restricted to span{a, x},
/// by an angular sweep of the circle plus the chord endpoints.
double planar_min(const Vector& x, const Vector& a, const Vector& b, const OracleConfig& config = {});

/// Exact feasible maxima of <x, theta> and <-x, theta> over the set above,
/// built from explicit vectors via planar_min.
struct PlanarBounds {
    double u_plus = 0.0;
    double u_minus = 0.0;
};
PlanarBounds planar_bounds(const Vector& y, const Vector& theta1, double lambda1, double lambda2, const Vector& x,
                           const OracleConfig& config = {});

/// Discarded indices whose reference coefficient exceeds 10 * gap_tol.
/// The reference must be certified at report.lambda2.
std::vector<Index> verify_safety(const ProblemInstance& inst, const ScreenReport& report,
                                 const PrimalDualSolution& reference, double gap_tol = 1e-10);

}  // namespace sasvi::oracle
