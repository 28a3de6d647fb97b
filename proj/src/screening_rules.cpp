#include "sasvi/screening_rules.hpp"

#include <algorithm>
#include <cmath>

namespace sasvi {

namespace {

void check_order(const ScreeningAnchor& anchor, double lambda2) {
    if (!(lambda2 > 0.0) || !(lambda2 < anchor.lambda1))
        throw Error("screening needs 0 < lambda2 < lambda1");
}

void check_margin(double margin) {
    if (!(margin >= 0.0) || margin >= 1.0) throw Error("screening margin must lie in [0, 1)");
}

// Fills `discarded` from `bounds` with the shared threshold test.
ScreenReport finish(RuleKind rule, const ScreeningAnchor& anchor, double lambda2, double margin,
                    Vector bounds) {
    ScreenReport report;
    report.rule = rule;
    report.lambda1 = anchor.lambda1;
    report.lambda2 = lambda2;
    report.margin = margin;
    report.needs_kkt_check = !is_safe(rule);
    const double limit = 1.0 - margin;
    for (Index j = 0; j < bounds.size(); ++j)
        if (bounds[j] < limit) report.discarded.push_back(j);
    report.bounds = std::move(bounds);
    return report;
}

}  // namespace

std::string_view to_string(RuleKind rule) {
    switch (rule) {
        case RuleKind::sasvi: return "sasvi";
        case RuleKind::safe: return "safe";
        case RuleKind::dpp: return "dpp";
        case RuleKind::strong: return "strong";
    }
    return "unknown";
}

RuleKind parse_rule(std::string_view name) {
    if (name == "sasvi") return RuleKind::sasvi;
    if (name == "safe") return RuleKind::safe;
    if (name == "dpp") return RuleKind::dpp;
    if (name == "strong") return RuleKind::strong;
    throw Error("unknown screening rule '" + std::string(name) + "'");
}

std::vector<RuleKind> parse_rules(std::string_view list) {
    std::vector<RuleKind> rules;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto end = std::min(list.find(',', start), list.size());
        const auto token = list.substr(start, end - start);
        if (!token.empty()) {
            const RuleKind rule = parse_rule(token);
            if (std::find(rules.begin(), rules.end(), rule) == rules.end()) rules.push_back(rule);
        }
        start = end + 1;
    }
    if (rules.empty()) throw Error("no screening rules given");
    return rules;
}

std::vector<Index> ScreenReport::survivors() const {
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(bounds.size()) - discarded.size());
    std::size_t k = 0;
    for (Index j = 0; j < bounds.size(); ++j) {
        if (k < discarded.size() && discarded[k] == j) {
            ++k;
            continue;
        }
        out.push_back(j);
    }
    return out;
}

ScreenReport screen_sasvi(const ScreeningAnchor& anchor, double lambda2, double margin) {
    check_order(anchor, lambda2);
    check_margin(margin);
    const BScalars b = b_vector(anchor, lambda2);
    Vector bounds(anchor.p());
    for (Index j = 0; j < anchor.p(); ++j) bounds[j] = sasvi_bounds(anchor, b, j).max();
    return finish(RuleKind::sasvi, anchor, lambda2, margin, std::move(bounds));
}

// Dual scaling: theta2* lies in the ball around y/lambda2 of radius
// ||s* theta1 - y/lambda2||, where s* maximizes the dual objective along
// the segment [-theta1, theta1].
ScreenReport screen_safe(const ScreeningAnchor& anchor, double lambda2, double margin) {
    check_order(anchor, lambda2);
    check_margin(margin);
    if (anchor.theta1_norm2 == 0.0) throw Error("SAFE screening needs theta1 != 0");
    const double s = std::clamp(anchor.theta1_dot_y / (lambda2 * anchor.theta1_norm2), -1.0, 1.0);
    const double radius = (s * anchor.theta1 - anchor.y / lambda2).norm();
    Vector bounds(anchor.p());
    for (Index j = 0; j < anchor.p(); ++j)
        bounds[j] = std::abs(anchor.xj_dot_y[j]) / lambda2 + anchor.xj_norm[j] * radius;
    return finish(RuleKind::safe, anchor, lambda2, margin, std::move(bounds));
}

// Ball centred at theta1 with radius ||y/lambda2 - y/lambda1||; the largest
// |<x_j, theta>| over it is |<x_j, theta1>| + ||x_j|| * radius.
ScreenReport screen_dpp(const ScreeningAnchor& anchor, double lambda2, double margin) {
    check_order(anchor, lambda2);
    check_margin(margin);
    const double radius = std::sqrt(anchor.y_norm2) * (1.0 / lambda2 - 1.0 / anchor.lambda1);
    Vector bounds(anchor.p());
    for (Index j = 0; j < anchor.p(); ++j)
        bounds[j] = std::abs(anchor.xj_dot_theta1[j]) + anchor.xj_norm[j] * radius;
    return finish(RuleKind::dpp, anchor, lambda2, margin, std::move(bounds));
}

ScreenReport screen_strong(const ScreeningAnchor& anchor, double lambda2, double margin) {
    check_order(anchor, lambda2);
    check_margin(margin);
    const double ratio = anchor.lambda1 / lambda2;
    Vector bounds(anchor.p());
    for (Index j = 0; j < anchor.p(); ++j)
        bounds[j] = ratio * std::abs(anchor.xj_dot_theta1[j]) + (ratio - 1.0);
    return finish(RuleKind::strong, anchor, lambda2, margin, std::move(bounds));
}

ScreenReport screen(RuleKind rule, const ScreeningAnchor& anchor, double lambda2, double margin) {
    switch (rule) {
        case RuleKind::sasvi: return screen_sasvi(anchor, lambda2, margin);
        case RuleKind::safe: return screen_safe(anchor, lambda2, margin);
        case RuleKind::dpp: return screen_dpp(anchor, lambda2, margin);
        case RuleKind::strong: return screen_strong(anchor, lambda2, margin);
    }
    throw Error("unknown screening rule");
}

ScreenReport screen_at_anchor(RuleKind rule, const ScreeningAnchor& anchor, double margin) {
    check_margin(margin);
    Vector bounds = anchor.xj_dot_theta1.cwiseAbs();
    return finish(rule, anchor, anchor.lambda1, margin, std::move(bounds));
}

}  // namespace sasvi
