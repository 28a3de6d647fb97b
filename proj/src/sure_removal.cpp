#include "sasvi/sure_removal.hpp"

#include <cmath>
#include <functional>

namespace sasvi {

namespace {

constexpr int kRootIterations = 50;
constexpr double kSearchFloor = 1e-12;   // relative to lambda1
constexpr double kDescentFloor = 1e-100;  // relative to lambda1
constexpr double kDescentFactor = 1e-4;
constexpr double kCrossingRelTol = 1e-13;
constexpr int kCrossingIterations = 400;
constexpr double kTieRelTol = 1e-9;

void check_lambda(const ScreeningAnchor& anchor, double lambda) {
    if (!(lambda > 0.0) || !(lambda <= anchor.lambda1) || !std::isfinite(lambda))
        throw Error("auxiliary functions need 0 < lambda <= lambda1");
}

BScalars scalars_at(const ScreeningAnchor& anchor, double lambda) {
    if (lambda < anchor.lambda1) return b_vector(anchor, lambda);
    BScalars b;
    b.lambda2 = anchor.lambda1;
    b.b_norm2 = anchor.a_norm2;
    b.b_norm = std::sqrt(anchor.a_norm2);
    b.b_dot_a = anchor.a_norm2;
    return b;
}

double geometric_mid(double lo, double hi) { return std::sqrt(lo) * std::sqrt(hi); }

// Root of an increasing (sign = +1) or decreasing (sign = -1) function
// F(lambda) = target on [floor, lambda1], by bisection on log(lambda).
double log_bisect(const std::function<double(double)>& F, double target, double sign, double lo, double hi) {
    if (sign * (F(lo) - target) >= 0.0) return lo;
    for (int it = 0; it < kRootIterations; ++it) {
        const double mid = geometric_mid(lo, hi);
        if (sign * (F(mid) - target) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return geometric_mid(lo, hi);
}

// phi(hi) < thr <= phi(lo) with phi non-increasing in lambda on [lo, hi].
// Returns a point of (crossing, crossing * (1 + tol)] where phi < thr.
double crossing(const std::function<double(double)>& phi, double thr, double lo, double hi) {
    for (int it = 0; it < kCrossingIterations && hi > lo * (1.0 + kCrossingRelTol); ++it) {
        const double mid = geometric_mid(lo, hi);
        if (phi(mid) < thr)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

double aux_f(const ScreeningAnchor& anchor, double lambda) {
    check_lambda(anchor, lambda);
    if (anchor.a_is_zero) return 0.0;
    const BScalars b = scalars_at(anchor, lambda);
    return b.b_dot_a / b.b_norm;
}

double aux_g(const ScreeningAnchor& anchor, double lambda) {
    check_lambda(anchor, lambda);
    if (anchor.a_is_zero) return std::sqrt(anchor.y_norm2);
    const BScalars b = scalars_at(anchor, lambda);
    return (anchor.a_dot_y + b.gamma * anchor.y_norm2) / b.b_norm;
}

std::string_view to_string(RemovalCase c) { return c == RemovalCase::monotone ? "monotone" : "bump"; }

BoundPair bounds_at(const ScreeningAnchor& anchor, Index j, double lambda) {
    if (j < 0 || j >= anchor.p()) throw Error("bounds_at: feature index out of range");
    check_lambda(anchor, lambda);
    return sasvi_bounds(anchor, scalars_at(anchor, lambda), j);
}

RemovalProfile removal_profile(const ScreeningAnchor& anchor, Index j) {
    if (j < 0 || j >= anchor.p()) throw Error("removal_profile: feature index out of range");
    RemovalProfile prof;
    prof.j = j;
    const double lambda1 = anchor.lambda1;
    const double x_norm = anchor.xj_norm[j];
    if (anchor.a_is_zero || x_norm == 0.0) {
        prof.lambda_2a = 0.0;
        prof.lambda_2y = lambda1;
        return prof;
    }
    prof.flipped = anchor.xj_dot_a[j] < 0.0;
    const double sign = prof.flipped ? -1.0 : 1.0;
    const double target_a = sign * anchor.xj_dot_a[j] / x_norm;
    const double target_y = sign * anchor.xj_dot_y[j] / x_norm;
    const double y_norm = std::sqrt(anchor.y_norm2);
    const double floor = kSearchFloor * lambda1;

    if (anchor.a_dot_y / y_norm >= target_a) {
        prof.lambda_2a = 0.0;
    } else {
        const auto f = [&](double l) { return aux_f(anchor, l); };
        prof.lambda_2a = log_bisect(f, target_a, +1.0, floor, lambda1);
        prof.f_residual = std::abs(f(prof.lambda_2a) - target_a);
    }

    if (anchor.a_dot_y / std::sqrt(anchor.a_norm2) >= target_y) {
        prof.lambda_2y = lambda1;
    } else {
        const auto g = [&](double l) { return aux_g(anchor, l); };
        prof.lambda_2y = log_bisect(g, target_y, -1.0, floor, lambda1);
        prof.g_residual = std::abs(g(prof.lambda_2y) - target_y);
    }

    prof.tie = std::abs(prof.lambda_2a - prof.lambda_2y) <= kTieRelTol * lambda1;
    prof.kind = (prof.lambda_2a <= prof.lambda_2y || prof.tie) ? RemovalCase::monotone : RemovalCase::bump;
    return prof;
}

SureRemovalParameter sure_removal_lambda(const ScreeningAnchor& anchor, const RemovalProfile& prof,
                                         double margin) {
    if (!(margin >= 0.0) || margin >= 1.0) throw Error("sure_removal_lambda: margin must lie in [0, 1)");
    const Index j = prof.j;
    const double thr = 1.0 - margin;
    const double lambda1 = anchor.lambda1;
    using Kind = SureRemovalParameter::Kind;

    if (std::abs(anchor.xj_dot_theta1[j]) >= thr) return {Kind::never, 0.0};

    const auto phi = [&](double l) { return bounds_at(anchor, j, l).max(); };
    // u+ of the oriented feature (<x_j, a> >= 0).
    const auto u_oriented = [&](double l) {
        const BoundPair bp = bounds_at(anchor, j, l);
        return prof.flipped ? bp.u_minus : bp.u_plus;
    };

    // phi(hi) < thr and phi is non-increasing in lambda on (0, hi].
    const auto tail = [&](double hi) -> SureRemovalParameter {
        double upper = hi;
        double lower = std::min(hi, kSearchFloor * lambda1);
        while (true) {
            if (lower < upper && phi(lower) >= thr) return {Kind::above, crossing(phi, thr, lower, upper)};
            if (lower <= kDescentFloor * lambda1) return {Kind::everywhere, 0.0};
            upper = lower;
            lower = std::max(lower * kDescentFactor, kDescentFloor * lambda1);
        }
    };

    if (prof.kind == RemovalCase::monotone) return tail(lambda1);

    const double l2a = prof.lambda_2a;
    const double l2y = prof.lambda_2y;
    if (l2a < lambda1 && phi(l2a) >= thr) return {Kind::above, crossing(phi, thr, l2a, lambda1)};
    if (u_oriented(l2y) >= thr) return {Kind::above, crossing(u_oriented, thr, l2y, l2a)};
    return tail(l2y);
}

SureRemovalParameter sure_removal_lambda(const ScreeningAnchor& anchor, Index j, double margin) {
    return sure_removal_lambda(anchor, removal_profile(anchor, j), margin);
}

}  // namespace sasvi
