#pragma once

#include <random>
#include <vector>

#include "sasvi/dataset.hpp"
#include "sasvi/dual_geometry.hpp"
#include "sasvi/lasso_solver.hpp"

namespace sasvi::testing {

inline SyntheticSpec small_spec(Index n, Index p, Index p_bar, std::uint64_t seed) {
    SyntheticSpec s;
    s.n = n;
    s.p = p;
    s.p_bar = p_bar;
    s.rho = 0.5;
    s.sigma = 0.1;
    s.seed = seed;
    return s;
}

inline ProblemInstance small_instance(Index n, Index p, Index p_bar, std::uint64_t seed) {
    return generate_synthetic(small_spec(n, p, p_bar, seed)).instance();
}

/// Certified anchor at ratio * lambda_max.
inline ScreeningAnchor anchor_at(const ProblemInstance& inst, double ratio) {
    return build_anchor(inst, solve(inst, ratio * lambda_max(inst)));
}

/// Keeps only the listed features of an anchor. The dual geometry does not
/// depend on which columns are present, so bounds stay valid.
inline ScreeningAnchor subset_anchor(const ScreeningAnchor& anchor, const std::vector<Index>& keep) {
    ScreeningAnchor out = anchor;
    const auto pick = [&](const Vector& v) {
        Vector r(static_cast<Index>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i) r[static_cast<Index>(i)] = v[keep[i]];
        return r;
    };
    out.xj_dot_theta1 = pick(anchor.xj_dot_theta1);
    out.xj_dot_a = pick(anchor.xj_dot_a);
    out.xj_dot_y = pick(anchor.xj_dot_y);
    out.xj_norm = pick(anchor.xj_norm);
    out.xj_perp_norm = pick(anchor.xj_perp_norm);
    out.xjperp_dot_yperp = pick(anchor.xjperp_dot_yperp);
    return out;
}

/// Hand-made anchor for formula checks of the baseline rules: one feature
/// with the given statistics and a zero `a` direction.
inline ScreeningAnchor scalar_anchor(double lambda1, double x_norm, double xt, double xy, double y_norm) {
    ScreeningAnchor a;
    a.lambda1 = lambda1;
    a.lambda_max = lambda1;
    a.y = Vector::Zero(1);
    a.y[0] = y_norm;
    a.theta1 = a.y / lambda1;
    a.a = Vector::Zero(1);
    a.a_is_zero = true;
    a.y_norm2 = y_norm * y_norm;
    a.y_perp_norm = y_norm;
    a.theta1_norm2 = a.theta1.squaredNorm();
    a.theta1_dot_y = a.theta1.dot(a.y);
    a.xj_dot_theta1 = Vector::Constant(1, xt);
    a.xj_dot_a = Vector::Zero(1);
    a.xj_dot_y = Vector::Constant(1, xy);
    a.xj_norm = Vector::Constant(1, x_norm);
    a.xj_perp_norm = Vector::Constant(1, x_norm);
    a.xjperp_dot_yperp = Vector::Constant(1, xy);
    return a;
}

inline Vector random_vector(std::mt19937_64& rng, Index n) {
    std::normal_distribution<double> g;
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = g(rng);
    return v;
}

struct AnchoredInstance {
    ProblemInstance inst;
    PrimalDualSolution solution;
    ScreeningAnchor anchor;
};

/**
 * A synthetic instance with `extra` columns appended along a + t y (plus a
 * little noise), where a is the scaled fit at ratio * lambda_max. Such
 * columns have nontrivial breakpoints. Each is scaled to a prescribed
 * <x, theta1> in (-1, 1), so the original solution stays optimal.
 */
inline AnchoredInstance aligned_instance(Index n, Index p, std::uint64_t seed, double ratio, Index extra) {
    const ProblemInstance base = small_instance(n, p, std::max<Index>(1, p / 10), seed);
    const double l1 = ratio * lambda_max(base);
    const PrimalDualSolution sol = solve(base, l1);
    const Vector a = base.y() / l1 - sol.theta;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unif;
    Matrix X(n, p + extra);
    X.leftCols(p) = base.X();
    for (Index k = 0; k < extra; ++k) {
        const double t = std::pow(10.0, -3.0 + 3.5 * unif(rng)) / l1;
        Vector col = a + t * base.y() + 0.05 * a.norm() * random_vector(rng, n);
        const double target = (k % 2 == 0 ? 1.0 : -1.0) * (0.2 + 0.75 * unif(rng));
        col *= target / col.dot(sol.theta);
        X.col(p + k) = col;
    }
    ProblemInstance inst(X, base.y());
    Vector beta = Vector::Zero(p + extra);
    beta.head(p) = sol.beta;
    PrimalDualSolution cert = certify(inst, l1, beta);
    ScreeningAnchor anc = build_anchor(inst, cert);
    return {std::move(inst), std::move(cert), std::move(anc)};
}

}  // namespace sasvi::testing
