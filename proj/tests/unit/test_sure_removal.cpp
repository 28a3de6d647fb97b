#include <doctest.h>

#include "fixtures.hpp"
#include "sasvi/screening_rules.hpp"
#include "sasvi/sure_removal.hpp"

using namespace sasvi;
using namespace sasvi::testing;

TEST_CASE("auxiliary functions at the ends of the range") {
    const ProblemInstance inst = small_instance(20, 40, 5, 1);
    const ScreeningAnchor anc = anchor_at(inst, 0.6);
    const double a_norm = std::sqrt(anc.a_norm2);
    const double y_norm = std::sqrt(anc.y_norm2);
    CHECK(aux_f(anc, anc.lambda1) == doctest::Approx(a_norm).epsilon(1e-14));
    CHECK(aux_g(anc, anc.lambda1) == doctest::Approx(anc.a_dot_y / a_norm).epsilon(1e-14));
    const double tiny = 1e-10 * anc.lambda1;
    CHECK(aux_f(anc, tiny) == doctest::Approx(anc.a_dot_y / y_norm).epsilon(1e-6));
    CHECK(aux_g(anc, tiny) == doctest::Approx(y_norm).epsilon(1e-6));
    CHECK_THROWS_AS(aux_f(anc, 0.0), Error);
    CHECK_THROWS_AS(aux_g(anc, 1.01 * anc.lambda1), Error);
}

TEST_CASE("f increases and g decreases") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const ProblemInstance inst = small_instance(20, 40, 5, 10 + seed);
        const ScreeningAnchor anc = anchor_at(inst, 0.3 + 0.1 * static_cast<double>(seed));
        double f_prev = -1e300;
        double g_prev = 1e300;
        for (int k = 1; k <= 1000; ++k) {
            const double l = anc.lambda1 * k / 1000.0;
            const double f = aux_f(anc, l);
            const double g = aux_g(anc, l);
            CHECK(f > f_prev - 1e-12);
            CHECK(g < g_prev + 1e-12);
            f_prev = f;
            g_prev = g;
        }
        CHECK(aux_f(anc, anc.lambda1) > aux_f(anc, 0.001 * anc.lambda1));
        CHECK(aux_g(anc, anc.lambda1) < aux_g(anc, 0.001 * anc.lambda1));
    }
}

TEST_CASE("profile breakpoints follow their defining conditions") {
    const AnchoredInstance ai = aligned_instance(25, 80, 2, 0.5, 60);
    const ProblemInstance& inst = ai.inst;
    const ScreeningAnchor& anc = ai.anchor;
    const double y_norm = std::sqrt(anc.y_norm2);
    const double a_norm = std::sqrt(anc.a_norm2);
    int roots_a = 0;
    int roots_y = 0;
    for (Index j = 0; j < inst.p(); ++j) {
        const RemovalProfile prof = removal_profile(anc, j);
        const double s = prof.flipped ? -1.0 : 1.0;
        CHECK(prof.flipped == (anc.xj_dot_a[j] < 0.0));
        const double ta = s * anc.xj_dot_a[j] / anc.xj_norm[j];
        const double ty = s * anc.xj_dot_y[j] / anc.xj_norm[j];
        if (anc.a_dot_y / y_norm >= ta) {
            CHECK(prof.lambda_2a == 0.0);
        } else {
            ++roots_a;
            CHECK(std::abs(aux_f(anc, prof.lambda_2a) - ta) <= 1e-9 * (1.0 + std::abs(ta)));
        }
        if (anc.a_dot_y / a_norm >= ty) {
            CHECK(prof.lambda_2y == anc.lambda1);
        } else {
            ++roots_y;
            CHECK(std::abs(aux_g(anc, prof.lambda_2y) - ty) <= 1e-9 * (1.0 + std::abs(ty)));
        }
        CHECK(prof.lambda_2a >= 0.0);
        CHECK(prof.lambda_2a <= anc.lambda1);
        CHECK(prof.lambda_2y > 0.0);
        CHECK(prof.lambda_2y <= anc.lambda1);
        CHECK((prof.kind == RemovalCase::monotone) == (prof.lambda_2a <= prof.lambda_2y || prof.tie));
    }
    CHECK(roots_a > 0);
    CHECK(roots_y > 0);
}

TEST_CASE("a = 0 gives lambda_2y = lambda1") {
    const ProblemInstance inst = small_instance(20, 40, 5, 3);
    const ScreeningAnchor anc = trivial_anchor(inst);
    for (Index j = 0; j < inst.p(); ++j) {
        const RemovalProfile prof = removal_profile(anc, j);
        CHECK(prof.lambda_2y == anc.lambda1);
        CHECK(prof.lambda_2a == 0.0);
    }
    CHECK(aux_f(anc, 0.5 * anc.lambda1) == 0.0);
    CHECK(aux_g(anc, 0.5 * anc.lambda1) == doctest::Approx(inst.y_norm()));
}

TEST_CASE("features active at lambda1 are never removable") {
    const ProblemInstance inst = small_instance(20, 40, 5, 4);
    const PrimalDualSolution sol = solve(inst, 0.5 * lambda_max(inst));
    const ScreeningAnchor anc = build_anchor(inst, sol);
    for (Index j = 0; j < inst.p(); ++j)
        if (sol.beta[j] != 0.0) CHECK(sure_removal_lambda(anc, j).kind == SureRemovalParameter::Kind::never);
}

TEST_CASE("zero columns are removable everywhere") {
    Matrix X(3, 2);
    X << 1, 0, 2, 0, -1, 0;
    Vector y(3);
    y << 1, 0.5, 3;
    const ProblemInstance inst(X, y);
    const ScreeningAnchor anc = anchor_at(inst, 0.5);
    const SureRemovalParameter ls = sure_removal_lambda(anc, 1);
    CHECK(ls.kind == SureRemovalParameter::Kind::everywhere);
    CHECK(ls.lower() == 0.0);
}

TEST_CASE("dense grid agrees with the sure-removal parameter") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const AnchoredInstance ai = aligned_instance(20, 60, 20 + seed, 0.8 - 0.2 * static_cast<double>(seed), 30);
        const ProblemInstance& inst = ai.inst;
        const ScreeningAnchor& anc = ai.anchor;
        const double thr = 1.0 - kDefaultMargin;
        int finite = 0;
        for (Index j = 0; j < inst.p(); ++j) {
            const SureRemovalParameter ls = sure_removal_lambda(anc, j);
            if (!ls.finite()) continue;
            ++finite;
            const double cut = ls.lower() * (1.0 + 1e-9);
            bool seen_below = false;
            for (int k = 9999; k >= 1; --k) {
                const double l = anc.lambda1 * k / 10000.0;
                const double phi = bounds_at(anc, j, l).max();
                if (l > cut) {
                    CHECK(phi < thr);
                } else if (!seen_below) {
                    seen_below = true;
                    CHECK(phi >= thr);
                }
            }
        }
        CHECK(finite > 0);
    }
}

TEST_CASE("screen_sasvi discards every feature above its sure-removal parameter") {
    const AnchoredInstance ai = aligned_instance(20, 60, 30, 0.7, 30);
    const ProblemInstance& inst = ai.inst;
    const ScreeningAnchor& anc = ai.anchor;
    std::vector<SureRemovalParameter> params;
    for (Index j = 0; j < inst.p(); ++j) params.push_back(sure_removal_lambda(anc, j));
    for (int k = 1; k < 100; ++k) {
        const double l2 = anc.lambda1 * k / 100.0;
        const ScreenReport rep = screen_sasvi(anc, l2);
        for (Index j = 0; j < inst.p(); ++j) {
            const auto& ls = params[static_cast<std::size_t>(j)];
            if (ls.finite() && l2 > ls.lower() * (1.0 + 1e-9))
                CHECK(std::binary_search(rep.discarded.begin(), rep.discarded.end(), j));
        }
    }
}

TEST_CASE("u- follows the breakpoint structure") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const AnchoredInstance ai = aligned_instance(20, 60, 40 + seed, 0.5, 30);
        const ProblemInstance& inst = ai.inst;
        const ScreeningAnchor& anc = ai.anchor;
        for (Index j = 0; j < inst.p(); ++j) {
            const RemovalProfile prof = removal_profile(anc, j);
            // angle(a,x) + angle(x,y) >= angle(a,y) keeps lambda_2a at or below lambda_2y
            CHECK(prof.lambda_2a <= prof.lambda_2y * (1.0 + 1e-9));
            const auto u_minus = [&](double l) {
                const BoundPair bp = bounds_at(anc, j, l);
                return prof.flipped ? bp.u_plus : bp.u_minus;
            };
            double prev_l = anc.lambda1 * 999.0 / 1000.0;
            double prev = u_minus(prev_l);
            for (int k = 998; k >= 1; --k) {
                const double l = anc.lambda1 * k / 1000.0;
                const double u = u_minus(l);
                const bool rising = prof.kind == RemovalCase::bump && l >= prof.lambda_2y && prev_l <= prof.lambda_2a;
                if (rising)
                    CHECK(u <= prev + 1e-10);
                else if (prof.kind == RemovalCase::monotone || l > prof.lambda_2a || prev_l < prof.lambda_2y)
                    CHECK(u >= prev - 1e-10);
                prev = u;
                prev_l = l;
            }
        }
    }
}
