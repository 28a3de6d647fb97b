#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sasvi/common.hpp"
#include "sasvi/dual_geometry.hpp"

namespace sasvi {

enum class RuleKind { sasvi, safe, dpp, strong };

/// Safe rules never discard a feature that is active at lambda2; the strong
/// rule can, and its output needs a KKT check.
constexpr bool is_safe(RuleKind rule) { return rule != RuleKind::strong; }

std::string_view to_string(RuleKind rule);
RuleKind parse_rule(std::string_view name);
/// Comma separated list, e.g. "sasvi,safe,dpp,strong".
std::vector<RuleKind> parse_rules(std::string_view list);

struct ScreenReport {
    RuleKind rule = RuleKind::sasvi;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double margin = 0.0;
    std::vector<Index> discarded;  // ascending
    // Rule-specific upper bound on |<x_j, theta2*>|: max(u+, u-) for Sasvi,
    // the single bound for the others.
    Vector bounds;
    bool needs_kkt_check = false;

    std::vector<Index> survivors() const;
};

ScreenReport screen_sasvi(const ScreeningAnchor& anchor, double lambda2, double margin = kDefaultMargin);
ScreenReport screen_safe(const ScreeningAnchor& anchor, double lambda2, double margin = kDefaultMargin);
ScreenReport screen_dpp(const ScreeningAnchor& anchor, double lambda2, double margin = kDefaultMargin);
ScreenReport screen_strong(const ScreeningAnchor& anchor, double lambda2, double margin = kDefaultMargin);

ScreenReport screen(RuleKind rule, const ScreeningAnchor& anchor, double lambda2,
                    double margin = kDefaultMargin);

/// Screening at lambda2 = lambda1 itself: every rule reduces to
/// |<x_j, theta1>| < 1 - margin.
ScreenReport screen_at_anchor(RuleKind rule, const ScreeningAnchor& anchor, double margin = kDefaultMargin);

}  // namespace sasvi
