#include "sasvi/dual_geometry.hpp"

#include <cmath>
#include <sstream>

namespace sasvi {

namespace {

// Below this fraction of ||x_j||^2 the identity ||x_j||^2 - <x_j,a>^2/||a||^2
// loses too many digits and the projection is recomputed from the column.
constexpr double kPerpRecomputeFraction = 1e-4;

void note(ScreeningAnchor& anchor, const std::string& message) {
    anchor.geometry_ok = false;
    anchor.diagnostics.push_back(message);
}

}  // namespace

ScreeningAnchor build_anchor(const ProblemInstance& inst, const PrimalDualSolution& solution) {
    if (!solution.certified)
        throw Error("build_anchor: solution at lambda = " + std::to_string(solution.lambda) +
                    " is not certified (gap " + std::to_string(solution.gap) + ")");
    if (solution.theta.size() != inst.n() || solution.beta.size() != inst.p())
        throw Error("build_anchor: solution does not match the instance dimensions");
    const double lmax = lambda_max(inst);
    if (lmax == 0.0) throw Error("build_anchor: degenerate instance (lambda_max = 0)");
    const double lambda1 = solution.lambda;
    if (!(lambda1 > 0.0)) throw Error("build_anchor: lambda1 must be positive");
    if (lambda1 > lmax) throw Error("build_anchor: lambda1 exceeds lambda_max");

    const Matrix& X = inst.X();
    ScreeningAnchor anchor;
    anchor.lambda1 = lambda1;
    anchor.lambda_max = lmax;
    anchor.y = inst.y();
    anchor.theta1 = solution.theta;
    anchor.y_norm2 = inst.y().squaredNorm();
    anchor.theta1_norm2 = anchor.theta1.squaredNorm();
    anchor.theta1_dot_y = anchor.theta1.dot(anchor.y);

    anchor.a = anchor.y / lambda1 - anchor.theta1;
    anchor.a_is_zero = anchor.a.norm() <= 1e-12 * inst.y_norm() / lambda1;
    if (anchor.a_is_zero) anchor.a.setZero();
    anchor.a_norm2 = anchor.a.squaredNorm();
    anchor.a_dot_y = anchor.a.dot(anchor.y);

    // X^T theta1 and X^T a follow from the certificate's correlations
    // without another pass over X.
    const bool have_corr = solution.correlations.size() == inst.p();
    anchor.xj_dot_theta1 = have_corr ? Vector(solution.correlations / solution.dual_scale)
                                     : Vector(X.transpose() * anchor.theta1);
    anchor.xj_dot_y = inst.xj_dot_y();
    anchor.xj_norm = inst.col_norms();

    const Index p = inst.p();
    if (anchor.a_is_zero) {
        anchor.xj_dot_a = Vector::Zero(p);
        anchor.xj_perp_norm = anchor.xj_norm;
        anchor.xjperp_dot_yperp = anchor.xj_dot_y;
        anchor.y_perp_norm = inst.y_norm();
    } else {
        anchor.xj_dot_a = anchor.xj_dot_y / lambda1 - anchor.xj_dot_theta1;
        const double y_coef = anchor.a_dot_y / anchor.a_norm2;
        const Vector y_perp = anchor.y - y_coef * anchor.a;
        anchor.y_perp_norm = y_perp.norm();
        anchor.xj_perp_norm.resize(p);
        anchor.xjperp_dot_yperp.resize(p);
        const Vector& norms2 = inst.col_norms2();
        for (Index j = 0; j < p; ++j) {
            const double xa = anchor.xj_dot_a[j];
            const double perp2 = norms2[j] - xa * xa / anchor.a_norm2;
            if (perp2 > kPerpRecomputeFraction * norms2[j]) {
                anchor.xj_perp_norm[j] = std::sqrt(perp2);
                anchor.xjperp_dot_yperp[j] = anchor.xj_dot_y[j] - y_coef * xa;
            } else {
                const Vector x_perp = X.col(j) - (xa / anchor.a_norm2) * anchor.a;
                anchor.xj_perp_norm[j] = x_perp.norm();
                anchor.xjperp_dot_yperp[j] = x_perp.dot(y_perp);
            }
        }
    }

    // Geometry checks.
    const double max_corr = anchor.xj_dot_theta1.cwiseAbs().maxCoeff();
    if (max_corr > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg << "dual infeasible anchor: max |<x_j, theta1>| = " << max_corr;
        note(anchor, msg.str());
    }
    if (anchor.a_dot_y < -1e-9 * anchor.y_norm2 / lambda1) note(anchor, "<a, y> is negative");
    if (anchor.a_is_zero && std::abs(lambda1 - lmax) > 1e-9 * lmax)
        note(anchor, "a vanishes although lambda1 < lambda_max");
    if (!anchor.a_is_zero && lambda1 == lmax) note(anchor, "a is nonzero at lambda1 = lambda_max");
    return anchor;
}

ScreeningAnchor trivial_anchor(const ProblemInstance& inst) {
    require_nondegenerate(inst);
    return build_anchor(inst, solve(inst, lambda_max(inst)));
}

BScalars b_vector(const ScreeningAnchor& anchor, double lambda2) {
    if (!(lambda2 > 0.0) || !(lambda2 < anchor.lambda1))
        throw Error("lambda2 must satisfy 0 < lambda2 < lambda1");
    BScalars b;
    b.lambda2 = lambda2;
    b.gamma = 1.0 / lambda2 - 1.0 / anchor.lambda1;
    b.b_dot_a = anchor.a_norm2 + b.gamma * anchor.a_dot_y;
    b.b_norm2 = anchor.a_norm2 + 2.0 * b.gamma * anchor.a_dot_y + b.gamma * b.gamma * anchor.y_norm2;
    b.b_norm = std::sqrt(b.b_norm2);
    return b;
}

double constrained_linear_min(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& a,
                              const Eigen::Ref<const Vector>& b) {
    if (x.size() != a.size() || x.size() != b.size())
        throw Error("constrained_linear_min: dimension mismatch");
    const double x_norm = x.norm();
    const double b_norm = b.norm();
    if (x_norm == 0.0) throw Error("constrained_linear_min: x must be nonzero");
    if (b_norm == 0.0) throw Error("constrained_linear_min: b must be nonzero");
    const double a_norm2 = a.squaredNorm();
    if (a_norm2 == 0.0) return -x_norm * b_norm;

    const double ba = b.dot(a);
    if (ba < -1e-12 * std::sqrt(a_norm2) * b_norm)
        throw Error("constrained_linear_min: requires <b, a> >= 0");
    const double xa = x.dot(a);
    if (ba / b_norm <= xa / x_norm) return -x_norm * b_norm;

    const Vector x_perp = x - (xa / a_norm2) * a;
    const Vector b_perp = b - (ba / a_norm2) * a;
    return -x_perp.norm() * b_perp.norm() - ba * xa / a_norm2;
}

BoundPair sasvi_bounds(const ScreeningAnchor& anchor, Index j, double lambda2) {
    if (j < 0 || j >= anchor.p()) throw Error("sasvi_bounds: feature index out of range");
    return sasvi_bounds(anchor, b_vector(anchor, lambda2), j);
}

BoundPair sasvi_bounds(const ScreeningAnchor& anchor, const BScalars& b, Index j) {
    const double x_norm = anchor.xj_norm[j];
    const double xt = anchor.xj_dot_theta1[j];
    if (x_norm == 0.0) return {0.0, 0.0, anchor.a_is_zero ? 4 : 1};

    const double xb = xj_dot_b(anchor, b, j);
    const double ball_plus = xt + 0.5 * (x_norm * b.b_norm + xb);
    const double ball_minus = -xt + 0.5 * (x_norm * b.b_norm - xb);
    if (anchor.a_is_zero) return {ball_plus, ball_minus, 4};

    const double xa = anchor.xj_dot_a[j];
    const double cross = anchor.xj_perp_norm[j] * anchor.y_perp_norm;
    const double xpy = anchor.xjperp_dot_yperp[j];
    const double edge_plus = xt + 0.5 * b.gamma * (cross + xpy);
    const double edge_minus = -xt + 0.5 * b.gamma * (cross - xpy);

    // Angle test <b,a>/(||b|| ||a||) against |<x_j,a>|/(||x_j|| ||a||); ||a|| cancels.
    const double b_side = b.b_dot_a / b.b_norm;
    const double x_side = std::abs(xa) / x_norm;
    if (b_side > x_side) return {edge_plus, edge_minus, 1};
    if (xa > 0.0) return {edge_plus, ball_minus, 2};
    if (xa < 0.0) return {ball_plus, edge_minus, 3};
    // <x_j, a> = 0 with <b, a> <= 0 cannot occur for a != 0; the ball bounds
    // are valid (if loose) either way.
    return {ball_plus, ball_minus, 4};
}

Decision screen_feature(const BoundPair& bound, double margin) {
    if (!(margin >= 0.0)) throw Error("screen_feature: margin must be nonnegative");
    const double limit = 1.0 - margin;
    return (bound.u_plus < limit && bound.u_minus < limit) ? Decision::discard : Decision::keep;
}

}  // namespace sasvi
