#pragma once

#include <string_view>
#include <vector>

#include "sasvi/common.hpp"
#include "sasvi/dual_geometry.hpp"

namespace sasvi {

/// f(lambda) = <b, a> / ||b|| with b = y/lambda - theta1. Increasing on (0, lambda1].
/// Identically zero when a = 0.
double aux_f(const ScreeningAnchor& anchor, double lambda);

/// g(lambda) = <b, y> / ||b||. Decreasing on (0, lambda1]; ||y|| when a = 0.
double aux_g(const ScreeningAnchor& anchor, double lambda);

enum class RemovalCase { monotone, bump };

std::string_view to_string(RemovalCase c);

/**
 * Breakpoints of the bound curves of one feature as lambda2 runs over (0, lambda1).
 *
 * With x_j oriented so that <x_j, a> >= 0 (`flipped` records a negation),
 * u+ is non-increasing in lambda2 everywhere. u- is too, except in the bump
 * case where it increases on [lambda_2y, lambda_2a].
 */
struct RemovalProfile {
    Index j = 0;
    bool flipped = false;
    double lambda_2a = 0.0;
    double lambda_2y = 0.0;
    RemovalCase kind = RemovalCase::monotone;
    bool tie = false;  // lambda_2a and lambda_2y agree to root precision; treated as monotone
    double f_residual = 0.0;
    double g_residual = 0.0;
};

RemovalProfile removal_profile(const ScreeningAnchor& anchor, Index j);

struct SureRemovalParameter {
    enum class Kind {
        never,       // not removable anywhere just below lambda1
        everywhere,  // removable for every lambda2 in (0, lambda1)
        above,       // removable for lambda2 in (value, lambda1)
    };
    Kind kind = Kind::never;
    double value = 0.0;

    bool finite() const { return kind != Kind::never; }
    /// Lower end of the removable interval: 0 for `everywhere`.
    double lower() const { return kind == Kind::above ? value : 0.0; }
};

/**
 * Smallest lambda_s with max(u+, u-) < 1 - margin on all of (lambda_s, lambda1).
 * Found by bisection on the monotone pieces delimited by the profile
 * breakpoints. The returned value errs towards lambda1.
 */
SureRemovalParameter sure_removal_lambda(const ScreeningAnchor& anchor, const RemovalProfile& profile,
                                         double margin = kDefaultMargin);
SureRemovalParameter sure_removal_lambda(const ScreeningAnchor& anchor, Index j,
                                         double margin = kDefaultMargin);

/// Bounds at any lambda in (0, lambda1]; lambda = lambda1 gives the limit.
BoundPair bounds_at(const ScreeningAnchor& anchor, Index j, double lambda);

}  // namespace sasvi
