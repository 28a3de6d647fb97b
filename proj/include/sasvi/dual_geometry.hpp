#pragma once

#include <string>
#include <vector>

#include "sasvi/common.hpp"
#include "sasvi/dataset.hpp"
#include "sasvi/lasso_solver.hpp"

namespace sasvi {

/**
 * Everything needed to bound <x_j, theta2*> for any lambda2 < lambda1,
 * computed once from a certified solve at lambda1.
 *
 * With a = y / lambda1 - theta1 (the scaled prediction X beta1 / lambda1),
 * the feasible set for theta2* is the ball with diameter [theta1, y/lambda2]
 * cut by the half-space <a, theta - theta1> <= 0. All per-feature work at
 * screening time is O(1) from the cached arrays below.
 *
 * Perpendicular quantities are taken with respect to a: v_perp = v - a <v,a> / ||a||^2.
 * When a is zero they equal the unprojected quantities.
 */
struct ScreeningAnchor {
    double lambda1 = 0.0;
    double lambda_max = 0.0;

    Vector y;
    Vector theta1;
    Vector a;

    double a_norm2 = 0.0;
    double a_dot_y = 0.0;
    double y_norm2 = 0.0;
    double y_perp_norm = 0.0;
    double theta1_norm2 = 0.0;
    double theta1_dot_y = 0.0;
    bool a_is_zero = false;

    Vector xj_dot_theta1;
    Vector xj_dot_a;
    Vector xj_dot_y;
    Vector xj_norm;
    Vector xj_perp_norm;
    Vector xjperp_dot_yperp;

    // Runtime checks of the anchor geometry (dual feasibility, <a, y> >= 0,
    // a == 0 exactly at lambda_max). Violations are recorded, not thrown.
    bool geometry_ok = true;
    std::vector<std::string> diagnostics;

    Index p() const { return xj_norm.size(); }
    Index n() const { return y.size(); }
};

/// Rejects uncertified solutions and lambda1 above lambda_max.
ScreeningAnchor build_anchor(const ProblemInstance& inst, const PrimalDualSolution& solution);

/// The exact anchor at lambda_max: beta = 0, theta = y / lambda_max.
ScreeningAnchor trivial_anchor(const ProblemInstance& inst);

/// Scalars of b = y / lambda2 - theta1 = a + gamma y, gamma = 1/lambda2 - 1/lambda1.
struct BScalars {
    double lambda2 = 0.0;
    double gamma = 0.0;
    double b_norm2 = 0.0;
    double b_norm = 0.0;
    double b_dot_a = 0.0;
};

BScalars b_vector(const ScreeningAnchor& anchor, double lambda2);

inline double xj_dot_b(const ScreeningAnchor& anchor, const BScalars& b, Index j) {
    return anchor.xj_dot_a[j] + b.gamma * anchor.xj_dot_y[j];
}

/**
 * min <x, r>  s.t.  <a, r + b> <= 0,  ||r||^2 <= ||b||^2.
 *
 * Requires x != 0, b != 0 and <b, a> >= 0. Equals -||x|| ||b|| when a = 0 or
 * <b,a>/||b|| <= <x,a>/||x||; otherwise the optimum sits on the intersection
 * of the sphere and the hyperplane.
 */
double constrained_linear_min(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& a,
                              const Eigen::Ref<const Vector>& b);

/// Upper bounds on <x_j, theta2*> (u_plus) and <-x_j, theta2*> (u_minus).
struct BoundPair {
    double u_plus = 0.0;
    double u_minus = 0.0;
    int case_tag = 0;  // 1: both on the sphere/plane edge, 2/3: one ball-limited side, 4: a = 0

    double max() const { return u_plus > u_minus ? u_plus : u_minus; }
};

BoundPair sasvi_bounds(const ScreeningAnchor& anchor, Index j, double lambda2);
BoundPair sasvi_bounds(const ScreeningAnchor& anchor, const BScalars& b, Index j);

enum class Decision { keep, discard };

/// Discard iff both bounds are below 1 - margin.
Decision screen_feature(const BoundPair& bound, double margin);

}  // namespace sasvi
