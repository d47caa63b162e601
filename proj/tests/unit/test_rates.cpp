#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "twoseq/error.hpp"
#include "twoseq/rates.hpp"
#include "twoseq/rng.hpp"

using Catch::Matchers::WithinAbs;
using namespace twoseq;

namespace {

const auto alg = SignalStrength::algebraic;
const SignalStrength kLog = SignalStrength::log_scale(2.0);
constexpr double kInf = std::numeric_limits<double>::infinity();

double up(double v) { return std::nextafter(v, kInf); }

/// Breakpoints of the equal-strength rate for a regime.
std::vector<double> equal_breaks(double beta, double eps) {
    switch (regime_of(beta, eps)) {
        case Regime::Sparse: return {0.0, eps / 2};
        case Regime::ModeratelyDense: return {0.0, (2 * eps - beta) / 4, (beta - eps) / 2};
        default: return {0.0, eps / 6};
    }
}

std::vector<double> table_breaks(double beta, double eps) {
    if (regime_of(beta, eps) == Regime::Sparse) return {0.0, eps / 2};
    return {(beta - 2 * eps) / 4, 0.0, (2 * eps - beta) / 4, (beta - eps) / 2};
}

struct Grid {
    double beta, eps;
};

std::vector<Grid> parameter_grid() {
    std::vector<Grid> g;
    for (double beta : {0.1, 0.25, 0.3, 0.45, 0.49})
        for (double frac : {0.05, 0.2, 0.4, 0.5, 0.6, 0.75, 0.8, 0.95, 1.0}) g.push_back({beta, beta * frac});
    return g;
}

bool shading_rule(double beta, double eps, double a, double b) {
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (regime_of(beta, eps) == Regime::Sparse) return lo <= 0.0;
    return hi <= 0.0 || lo <= (beta - 2 * eps) / 4;
}

}  // namespace

TEST_CASE("regime classification") {
    CHECK(regime_of(0.45, 0.12) == Regime::Sparse);
    CHECK(regime_of(0.45, 0.28) == Regime::ModeratelyDense);
    CHECK(regime_of(0.45, 0.4) == Regime::StronglyDense);
    CHECK(regime_of(0.4, 0.2) == Regime::ModeratelyDense);  // eps = beta/2
    CHECK(regime_of(0.4, 0.3) == Regime::ModeratelyDense);  // eps = 3 beta/4
    CHECK(regime_of(0.4, 0.4) == Regime::StronglyDense);
    CHECK_THROWS_AS(regime_of(0.45, 0.5), ConstraintViolation);
    CHECK_THROWS_AS(regime_of(0.5, 0.2), ConstraintViolation);
    CHECK_THROWS_AS(regime_of(0.3, 0.0), ConstraintViolation);
}

TEST_CASE("equal-strength rate examples") {
    auto r = rate_two_seq_equal(0.45, 0.12, -0.1);
    CHECK_THAT(r.exponent, WithinAbs(-2.56, 1e-12));
    CHECK(r.log_power == 0);
    r = rate_two_seq_equal(0.45, 0.3, 0.15);
    CHECK_THAT(r.exponent, WithinAbs(-0.8, 1e-12));
    CHECK(r.log_power == 0);
    r = rate_two_seq_equal(0.45, 0.4, 0.05);
    CHECK_THAT(r.exponent, WithinAbs(-1.2, 1e-12));
    CHECK(r.log_power == 4);
    r = rate_two_seq_equal(0.45, 0.3, 0.2);
    CHECK_THAT(r.exponent, WithinAbs(-0.5, 1e-12));
    // the three figure cells of the simulation study
    CHECK_THAT(rate_two_seq_equal(0.45, 0.02, 0.15).exponent, WithinAbs(-1.08, 1e-12));
    CHECK_THAT(rate_two_seq_equal(0.45, 0.02, 0.2).exponent, WithinAbs(-0.78, 1e-12));
    CHECK_THAT(rate_two_seq_equal(0.45, 0.44, 0.15).exponent, WithinAbs(-0.66, 1e-12));
    CHECK_THAT(rate_two_seq_equal(0.45, 0.44, 0.2).exponent, WithinAbs(-0.36, 1e-12));
}

TEST_CASE("divergent flag above (2 - eps)/6") {
    const double eps = 0.3;
    CHECK_FALSE(rate_two_seq_equal(0.45, eps, (2 - eps) / 6 - 1e-6).divergent);
    CHECK(rate_two_seq_equal(0.45, eps, (2 - eps) / 6 + 1e-6).divergent);
}

TEST_CASE("equal-strength rate is continuous at every breakpoint") {
    for (const auto& g : parameter_grid()) {
        for (double b : equal_breaks(g.beta, g.eps)) {
            CAPTURE(g.beta, g.eps, b);
            CHECK_THAT(rate_two_seq_equal(g.beta, g.eps, b).exponent,
                       WithinAbs(rate_two_seq_equal(g.beta, g.eps, up(b)).exponent, 1e-12));
        }
    }
    // named values: sparse at b=0 and moderately dense at b=(beta-eps)/2
    CHECK_THAT(rate_two_seq_equal(0.45, 0.12, 0.0).exponent, WithinAbs(2 * 0.12 - 2, 1e-12));
    CHECK_THAT(rate_two_seq_equal(0.45, 0.12, up(0.0)).exponent, WithinAbs(2 * 0.12 - 2, 1e-12));
    const double b = (0.45 - 0.3) / 2;
    CHECK_THAT(rate_two_seq_equal(0.45, 0.3, b).exponent, WithinAbs(3 * 0.45 - 0.6 - 2, 1e-12));
    CHECK_THAT(rate_two_seq_equal(0.45, 0.3, up(b)).exponent, WithinAbs(3 * 0.45 - 0.6 - 2, 1e-12));
}

TEST_CASE("boundary values take the left-listed branch") {
    CHECK(rate_two_seq_equal(0.45, 0.12, 0.0).log_power == 0);
    CHECK(rate_two_seq_equal(0.45, 0.12, 0.06).log_power == 2);
    CHECK(rate_two_seq_equal(0.45, 0.4, 0.4 / 6).log_power == 4);
}

TEST_CASE("equal-strength rate is nondecreasing in b and in eps") {
    for (double beta : {0.2, 0.35, 0.45}) {
        for (double eps = 0.01; eps <= beta; eps += 0.01) {
            double prev = -kInf;
            for (double b = -0.4; b <= 0.6; b += 0.0025) {
                const double r = rate_two_seq_equal(beta, eps, b).exponent;
                CHECK(r >= prev - 1e-12);
                prev = r;
            }
        }
        for (double b = -0.4; b <= 0.6; b += 0.01) {
            double prev = -kInf;
            for (double eps = 0.005; eps <= beta; eps += 0.005) {
                const double r = rate_two_seq_equal(beta, eps, b).exponent;
                CAPTURE(beta, b, eps);
                CHECK(r >= prev - 1e-12);
                prev = r;
            }
        }
    }
}

TEST_CASE("general rate examples") {
    auto e = rate_two_seq_general(0.45, 0.12, alg(0.2), alg(0.05));
    CHECK_THAT(e.rate.exponent, WithinAbs(-0.96, 1e-12));
    CHECK(e.rate.log_power == 2);
    CHECK_FALSE(e.q0_optimal);

    // (beta-2eps)/4 = -0.0375 < a = -0.03 <= 0 and 0 < b = 0.02 <= (2eps-beta)/4
    e = rate_two_seq_general(0.45, 0.3, alg(-0.03), alg(0.02));
    REQUIRE(e.candidates.size() == 2);
    CHECK_THAT(e.candidates[0].exponent, WithinAbs(-1.47, 1e-12));
    CHECK(e.candidates[0].log_power == 0);
    CHECK_THAT(e.candidates[1].exponent, WithinAbs(-1.52, 1e-12));
    CHECK(e.candidates[1].log_power == 2);
    CHECK_THAT(e.rate.exponent, WithinAbs(-1.47, 1e-12));
    CHECK_FALSE(e.tie);
    CHECK_FALSE(e.q0_optimal);

    // a = -0.05 lies below (beta-2eps)/4 = -0.0375: first row, trivial estimator optimal
    e = rate_two_seq_general(0.45, 0.3, alg(-0.05), alg(0.02));
    CHECK(e.a_phase == 0);
    CHECK_THAT(e.rate.exponent, WithinAbs(2 * 0.3 + 4 * -0.05 + 4 * 0.02 - 2, 1e-12));
    CHECK(e.q0_optimal);
}

TEST_CASE("any dense cell with a^b <= (beta-2eps)/4 is shaded") {
    for (double eps : {0.25, 0.3, 0.34, 0.4, 0.45}) {
        const double cut = (0.45 - 2 * eps) / 4;
        for (double b = -0.3; b <= 0.5; b += 0.01) {
            CHECK(rate_two_seq_general(0.45, eps, alg(cut - 0.001), alg(b)).q0_optimal);
            CHECK(rate_two_seq_general(0.45, eps, alg(b), alg(cut)).q0_optimal);
        }
    }
}

TEST_CASE("tables reproduce the equal-strength rate on the diagonal") {
    Rng rng(2718);
    for (int i = 0; i < 10000; ++i) {
        const double beta = 0.01 + 0.48 * rng.uniform();
        const double eps = beta * (0.01 + 0.99 * rng.uniform());
        const double b = -0.5 + 1.2 * rng.uniform();
        const auto entry = rate_two_seq_general(beta, eps, alg(b), alg(b));
        const auto equal = rate_two_seq_equal(beta, eps, b);
        CAPTURE(beta, eps, b);
        REQUIRE_THAT(entry.rate.exponent, WithinAbs(equal.exponent, 1e-12));
        REQUIRE(entry.rate.log_power == equal.log_power);
    }
    // the breakpoints themselves
    for (const auto& g : parameter_grid()) {
        for (double b : equal_breaks(g.beta, g.eps)) {
            for (double v : {b, up(b)}) {
                const auto entry = rate_two_seq_general(g.beta, g.eps, alg(v), alg(v));
                const auto equal = rate_two_seq_equal(g.beta, g.eps, v);
                CAPTURE(g.beta, g.eps, v);
                CHECK_THAT(entry.rate.exponent, WithinAbs(equal.exponent, 1e-12));
                // one ulp past a breakpoint the tables still see a tie and keep
                // the larger log power; only the exact breakpoint is comparable
                if (v == b) CHECK(entry.rate.log_power == equal.log_power);
            }
        }
    }
}

TEST_CASE("sparse table agrees with the sparse closed form") {
    // rate_two_seq_general uses the closed form for algebraic inputs; compare
    // it with the log-row/column neighbours and with shading.
    for (double a = -0.2; a <= 0.4; a += 0.013) {
        for (double b = -0.2; b <= 0.4; b += 0.017) {
            const auto entry = rate_two_seq_general(0.45, 0.12, alg(a), alg(b));
            const auto closed = rate_sparse_closed_form(0.12, a, b);
            CHECK(entry.rate.exponent == closed.exponent);
            CHECK(entry.rate.log_power == closed.log_power);
        }
    }
}

TEST_CASE("tables are symmetric under swapping a and b") {
    for (const auto& g : parameter_grid()) {
        for (double a = -0.3; a <= 0.5; a += 0.023) {
            for (double b = -0.3; b <= 0.5; b += 0.029) {
                const auto ab = rate_two_seq_general(g.beta, g.eps, alg(a), alg(b));
                const auto ba = rate_two_seq_general(g.beta, g.eps, alg(b), alg(a));
                CAPTURE(g.beta, g.eps, a, b);
                CHECK_THAT(ab.rate.exponent, WithinAbs(ba.rate.exponent, 1e-12));
                CHECK(ab.rate.log_power == ba.rate.log_power);
                CHECK(ab.q0_optimal == ba.q0_optimal);
            }
        }
        const auto la = rate_two_seq_general(g.beta, g.eps, kLog, alg(0.1));
        const auto lb = rate_two_seq_general(g.beta, g.eps, alg(0.1), kLog);
        CHECK_THAT(la.rate.exponent, WithinAbs(lb.rate.exponent, 1e-12));
        CHECK(la.rate.log_power == lb.rate.log_power);
    }
}

TEST_CASE("table exponents are continuous across row and column breakpoints") {
    for (const auto& g : parameter_grid()) {
        for (double cut : table_breaks(g.beta, g.eps)) {
            for (double other = -0.3; other <= 0.5; other += 0.01) {
                CAPTURE(g.beta, g.eps, cut, other);
                const double left = rate_two_seq_general(g.beta, g.eps, alg(cut), alg(other)).rate.exponent;
                const double right = rate_two_seq_general(g.beta, g.eps, alg(up(cut)), alg(other)).rate.exponent;
                CHECK_THAT(left, WithinAbs(right, 1e-12));
            }
        }
    }
}

TEST_CASE("log-scale rows sit at exponent zero with an extra log factor") {
    // sparse: log row against b > eps/2 is 2 eps + 4b with log^2
    auto e = rate_two_seq_general(0.45, 0.12, kLog, alg(0.2));
    CHECK_THAT(e.rate.exponent, WithinAbs(0.24 + 0.8 - 2, 1e-12));
    CHECK(e.rate.log_power == 2);
    CHECK(e.q0_optimal);
    e = rate_two_seq_general(0.45, 0.12, kLog, kLog);
    CHECK_THAT(e.rate.exponent, WithinAbs(0.24 - 2, 1e-12));
    CHECK(e.rate.log_power == 4);
    // the log coefficient does not enter the rate
    const auto c1 = rate_two_seq_general(0.45, 0.3, SignalStrength::log_scale(1), alg(0.1));
    const auto c9 = rate_two_seq_general(0.45, 0.3, SignalStrength::log_scale(9), alg(0.1));
    CHECK(c1.rate.exponent == c9.rate.exponent);
    // log exponent equals the algebraic limit a -> 0+
    for (const auto& g : parameter_grid()) {
        for (double b = -0.3; b <= 0.5; b += 0.02) {
            const auto lg = rate_two_seq_general(g.beta, g.eps, kLog, alg(b));
            const auto zp = rate_two_seq_general(g.beta, g.eps, alg(1e-13), alg(b));
            CAPTURE(g.beta, g.eps, b);
            CHECK_THAT(lg.rate.exponent, WithinAbs(zp.rate.exponent, 1e-11));
        }
    }
}

TEST_CASE("shading, the region rule and optimal_estimator agree") {
    for (const auto& g : parameter_grid()) {
        std::vector<SignalStrength> strengths{kLog};
        for (double v = -0.3; v <= 0.5; v += 0.0125) strengths.push_back(alg(v));
        for (double v : table_breaks(g.beta, g.eps)) strengths.push_back(alg(v));
        for (const auto& a : strengths) {
            for (const auto& b : strengths) {
                // at eps = beta/2 the lowest cut is 0 itself, so a log strength
                // sits on it from above; the tables decide and the rule cannot
                if (g.beta - 2 * g.eps == 0.0 && (a.is_log() || b.is_log())) continue;
                const auto entry = rate_two_seq_general(g.beta, g.eps, a, b);
                const auto best = optimal_estimator(g.beta, g.eps, a, b);
                CAPTURE(g.beta, g.eps, a.to_string(), b.to_string());
                CHECK(entry.q0_optimal ==
                      shading_rule(g.beta, g.eps, a.effective_exponent(), b.effective_exponent()));
                CHECK(entry.q0_optimal == (best.kind == EstimatorKind::Q0 || best.boundary));
                if (best.kind != EstimatorKind::Q0) {
                    CHECK(best.kind == (is_dense(entry.regime) ? EstimatorKind::Q4 : EstimatorKind::Q2));
                }
            }
        }
    }
}

TEST_CASE("optimal estimator examples") {
    auto best = optimal_estimator(0.45, 0.12, alg(0.1), alg(0.1));
    CHECK(best.kind == EstimatorKind::Q2);
    CHECK_FALSE(best.boundary);
    CHECK(optimal_estimator(0.45, 0.3, alg(0.1), alg(-0.02)).kind == EstimatorKind::Q4);
    CHECK(optimal_estimator(0.45, 0.12, alg(0.1), alg(-0.1)).kind == EstimatorKind::Q0);
    best = optimal_estimator(0.45, 0.12, kLog, alg(0.1));
    CHECK(best.kind == EstimatorKind::Q2);
    CHECK(best.boundary);
    best = optimal_estimator(0.45, 0.3, kLog, kLog);
    CHECK(best.kind == EstimatorKind::Q4);
    CHECK(best.boundary);
    best = optimal_estimator(0.45, 0.12, kLog, alg(-0.1));
    CHECK(best.kind == EstimatorKind::Q0);
    CHECK_FALSE(best.boundary);
}

TEST_CASE("one-sequence rate") {
    auto r = rate_one_seq(0.3, alg(0.1));
    CHECK_THAT(r.exponent, WithinAbs(-1.4, 1e-12));
    CHECK(r.log_power == 2);
    r = rate_one_seq(0.7, alg(0.1));
    CHECK_THAT(r.exponent, WithinAbs(-1.0, 1e-12));
    CHECK(r.log_power == 0);
    r = rate_one_seq(0.3, SignalStrength::log_scale(2));
    CHECK_THAT(r.exponent, WithinAbs(-1.4, 1e-12));
    CHECK(r.log_power == 2);
    CHECK_THROWS_AS(rate_one_seq(0.7, SignalStrength::log_scale(2)), ConstraintViolation);
    CHECK_THROWS_AS(rate_one_seq(1.0, alg(0.1)), ConstraintViolation);

    for (double beta = 0.05; beta < 1.0; beta += 0.05) {
        const std::vector<double> cuts = beta < 0.5 ? std::vector<double>{0.0, beta / 2}
                                                    : std::vector<double>{(1 - 2 * beta) / 4, (1 - beta) / 2};
        for (double c : cuts) {
            CAPTURE(beta, c);
            CHECK_THAT(rate_one_seq(beta, alg(c)).exponent,
                       WithinAbs(rate_one_seq(beta, alg(up(c))).exponent, 1e-12));
        }
        double prev = -kInf;
        for (double b = -0.5; b <= 0.8; b += 0.005) {
            const double e = rate_one_seq(beta, alg(b)).exponent;
            CHECK(e >= prev - 1e-12);
            prev = e;
        }
    }
}

TEST_CASE("l2 rates") {
    CHECK_THAT(rate_l2_two_seq(0.1, -0.05).exponent, WithinAbs(-1.8, 1e-12));
    CHECK_THAT(rate_l2_two_seq(0.2, 0.2).exponent, WithinAbs(-0.8, 1e-12));
    auto r = rate_l2_one_seq(0.4, 0.3);
    CHECK_THAT(r.exponent, WithinAbs(-1.2, 1e-12));
    CHECK(r.log_power == 2);

    // continuity
    for (double other = -0.3; other <= 0.5; other += 0.01)
        CHECK_THAT(rate_l2_two_seq(0.0, other).exponent,
                   WithinAbs(rate_l2_two_seq(up(0.0), other).exponent, 1e-12));
    for (double beta = 0.05; beta < 1.0; beta += 0.05) {
        const std::vector<double> cuts = beta < 0.5 ? std::vector<double>{beta / 2, beta}
                                                    : std::vector<double>{0.25, 0.5};
        for (double c : cuts)
            CHECK_THAT(rate_l2_one_seq(beta, c).exponent,
                       WithinAbs(rate_l2_one_seq(beta, up(c)).exponent, 1e-12));
    }
}

TEST_CASE("l2 one-sequence rate with b~ = beta/2 + b matches the sup-norm rate") {
    for (double beta = 0.02; beta < 1.0; beta += 0.02) {
        for (double b = -0.5; b <= 0.8; b += 0.01) {
            const auto sup = rate_one_seq(beta, alg(b));
            const auto l2 = rate_l2_one_seq(beta, beta / 2 + b);
            CAPTURE(beta, b);
            CHECK_THAT(l2.exponent, WithinAbs(sup.exponent, 1e-12));
            CHECK(l2.log_power == sup.log_power);
        }
    }
}
