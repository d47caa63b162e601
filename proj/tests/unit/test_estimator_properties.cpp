#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twoseq/estimators.hpp"
#include "twoseq/params.hpp"
#include "twoseq/rng.hpp"

using Catch::Matchers::WithinRel;
using namespace twoseq;

namespace {

constexpr EstimatorKind kAll[] = {EstimatorKind::Q0, EstimatorKind::Q1, EstimatorKind::Q2,
                                  EstimatorKind::Q3, EstimatorKind::Q4, EstimatorKind::Q5};

double eval(EstimatorKind kind, double tau, double sigma, const std::vector<double>& x,
            const std::vector<double>& y) {
    const EstimatorSettings s(kind, tau, sigma);
    return is_one_sequence(kind) ? estimate(s, y) : estimate(s, x, y);
}

ObservationPair make_data(std::uint64_t seed, std::size_t n = 257) {
    Rng rng(seed);
    ObservationPair obs;
    for (std::size_t i = 0; i < n; ++i) {
        // a few large coordinates so every threshold branch is exercised
        const double bump = (i % 17 == 0) ? 4.0 : 0.0;
        obs.x.push_back(bump + 1.3 * rng.normal());
        obs.y.push_back((i % 13 == 0 ? 3.5 : 0.0) + 1.3 * rng.normal());
    }
    return obs;
}

}  // namespace

TEST_CASE("estimators are invariant under sign flips") {
    const std::uint64_t seed = GENERATE(1, 2, 3);
    const auto obs = make_data(seed);
    Rng rng(seed + 100);
    auto fx = obs.x, fy = obs.y;
    for (auto& v : fx) v *= rng.sign();
    for (auto& v : fy) v *= rng.sign();
    for (auto kind : kAll) {
        CAPTURE(to_string(kind));
        CHECK(eval(kind, 2.0, 1.3, obs.x, obs.y) == eval(kind, 2.0, 1.3, fx, fy));
    }
}

TEST_CASE("estimators are invariant under a joint permutation") {
    const std::uint64_t seed = GENERATE(4, 5);
    const auto obs = make_data(seed);
    std::vector<std::size_t> perm(obs.x.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), Rng(seed));
    std::vector<double> px, py;
    for (auto i : perm) {
        px.push_back(obs.x[i]);
        py.push_back(obs.y[i]);
    }
    for (auto kind : kAll) {
        CAPTURE(to_string(kind));
        CHECK_THAT(eval(kind, 3.0, 1.3, px, py),
                   WithinRel(eval(kind, 3.0, 1.3, obs.x, obs.y), 1e-12));
    }
}

TEST_CASE("pair estimators are symmetric in x and y") {
    const auto obs = make_data(6);
    for (auto kind : {EstimatorKind::Q2, EstimatorKind::Q4, EstimatorKind::Q5}) {
        CAPTURE(to_string(kind));
        CHECK(eval(kind, 2.5, 1.3, obs.x, obs.y) == eval(kind, 2.5, 1.3, obs.y, obs.x));
    }
}

TEST_CASE("scale equivariance: c^4 for pair estimators, c^2 for one-sequence") {
    const auto obs = make_data(7);
    const double c = GENERATE(0.5, 3.0);
    auto cx = obs.x, cy = obs.y;
    for (auto& v : cx) v *= c;
    for (auto& v : cy) v *= c;
    for (auto kind : {EstimatorKind::Q2, EstimatorKind::Q4, EstimatorKind::Q5}) {
        CAPTURE(to_string(kind), c);
        CHECK_THAT(eval(kind, 2.0, c * 1.3, cx, cy),
                   WithinRel(std::pow(c, 4) * eval(kind, 2.0, 1.3, obs.x, obs.y), 1e-12));
    }
    for (auto kind : {EstimatorKind::Q1, EstimatorKind::Q3}) {
        CAPTURE(to_string(kind), c);
        CHECK_THAT(eval(kind, 2.0, c * 1.3, cx, cy),
                   WithinRel(c * c * eval(kind, 2.0, 1.3, obs.x, obs.y), 1e-12));
    }
}

TEST_CASE("Q3 and Q5 are unbiased") {
    MeanPair pair;
    pair.mu.assign(100, 0.0);
    pair.theta.assign(100, 0.0);
    for (int i = 0; i < 10; ++i) {
        pair.mu[i] = 2.0;
        pair.theta[i] = 1.5;
    }
    for (int i = 10; i < 20; ++i) pair.theta[i] = -1.0;
    const double q = true_q(pair);
    double q_theta = 0.0;
    for (double t : pair.theta) q_theta += t * t;
    q_theta /= 100.0;

    const EstimatorSettings s3(EstimatorKind::Q3, 0, 1), s5(EstimatorKind::Q5, 0, 1);
    constexpr int reps = 20000;
    double m3 = 0, v3 = 0, m5 = 0, v5 = 0;
    for (int r = 0; r < reps; ++r) {
        const auto obs = sample_observations(pair, 1.0, derive_seed(55, r));
        const double e3 = estimate(s3, obs.y) - q_theta;
        const double e5 = estimate(s5, obs.x, obs.y) - q;
        m3 += e3, v3 += e3 * e3, m5 += e5, v5 += e5 * e5;
    }
    m3 /= reps, m5 /= reps;
    const double se3 = std::sqrt((v3 / reps - m3 * m3) / reps);
    const double se5 = std::sqrt((v5 / reps - m5 * m5) / reps);
    CHECK(std::abs(m3) <= 3 * se3);
    CHECK(std::abs(m5) <= 3 * se5);
}

TEST_CASE("Q2 and Q4 are exactly centred on pure-noise coordinates") {
    // On a null pair the per-coordinate debiasing makes the mean zero; check
    // the sample mean is within 3 SE.
    MeanPair pair;
    pair.mu.assign(500, 0.0);
    pair.theta.assign(500, 0.0);
    for (auto kind : {EstimatorKind::Q2, EstimatorKind::Q4}) {
        const EstimatorSettings s(kind, kind == EstimatorKind::Q2 ? 1.0 : 2.0, 1.0);
        constexpr int reps = 20000;
        double m = 0, v = 0;
        for (int r = 0; r < reps; ++r) {
            const auto obs = sample_observations(pair, 1.0, derive_seed(77, r));
            const double e = estimate(s, obs.x, obs.y);
            m += e, v += e * e;
        }
        m /= reps;
        const double se = std::sqrt((v / reps - m * m) / reps);
        CAPTURE(to_string(kind), m, se);
        CHECK(std::abs(m) <= 3 * se);
    }
}
