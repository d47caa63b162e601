#include "twoseq/detection.hpp"

#include <algorithm>
#include <cmath>

#include "twoseq/error.hpp"
#include "twoseq/rates.hpp"

namespace twoseq {

std::string to_string(DetectionRegion region) {
    switch (region) {
        case DetectionRegion::Detectable: return "detectable";
        case DetectionRegion::Undetectable: return "undetectable";
        case DetectionRegion::Boundary: return "boundary";
    }
    return "?";
}

DetectionRegion detect_region_two_seq(double beta, double epsilon, double a, double b) {
    const Regime regime = regime_of(beta, epsilon);
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (regime == Regime::Sparse) {
        if (lo > 0.0) return DetectionRegion::Detectable;
        if (lo < 0.0) return DetectionRegion::Undetectable;
        return DetectionRegion::Boundary;
    }
    const double cut = (beta - 2 * epsilon) / 4;
    if (lo > cut && hi > 0.0) return DetectionRegion::Detectable;
    if (lo < cut || hi < 0.0) return DetectionRegion::Undetectable;
    return DetectionRegion::Boundary;
}

double lambda_threshold(std::int64_t n, double epsilon, double a, double b) {
    if (n < 2) throw DegenerateSize("requires n >= 2");
    return 0.5 * std::pow(static_cast<double>(n), epsilon + 2 * a + 2 * b - 1);
}

double lambda_threshold(const ProblemParams& params) {
    if (!params.a.is_log() && !params.b.is_log())
        return lambda_threshold(params.n, params.epsilon, params.a.value, params.b.value);
    const double n = static_cast<double>(params.n);
    return 0.5 * std::pow(n, params.epsilon - 1) * params.r * params.r * params.s * params.s;
}

double lambda_threshold_floor(const ProblemParams& params) {
    const double n = static_cast<double>(params.n);
    return 0.5 * static_cast<double>(params.q) * params.r * params.r * params.s * params.s / n;
}

TestOutcome run_test_two_seq(std::span<const double> x, std::span<const double> y, double sigma,
                             const ProblemParams& params, double threshold) {
    if (x.size() != y.size()) throw LengthMismatch("x and y differ in length");
    const Regime regime = regime_of(params.beta, params.epsilon);
    const EstimatorKind kind = is_dense(regime) ? EstimatorKind::Q4 : EstimatorKind::Q2;
    const auto n = static_cast<std::int64_t>(y.size());
    const EstimatorSettings settings = EstimatorSettings::for_length(kind, n, sigma);

    TestOutcome out;
    out.estimator = kind;
    out.tau = settings.tau();
    out.statistic = estimate(settings, x, y);
    out.threshold = threshold;
    out.reject = out.statistic >= threshold;
    return out;
}

TestOutcome run_test_two_seq(std::span<const double> x, std::span<const double> y, double sigma,
                             const ProblemParams& params) {
    return run_test_two_seq(x, y, sigma, params, lambda_threshold(params));
}

double one_seq_boundary(double beta, SignalStrength::Kind scale) {
    if (!(beta > 0.0 && beta < 1.0)) throw ConstraintViolation("requires 0 < beta < 1");
    if (scale == SignalStrength::Kind::Algebraic) return beta >= 0.5 ? (1 - 2 * beta) / 4 : 0.0;
    if (beta >= 0.5) throw ConstraintViolation("log-scale boundary requires beta < 0.5");
    if (beta <= 0.25) {
        const double g = 1 - std::sqrt(beta);
        return 2 * g * g;
    }
    return 1 - 2 * beta;
}

TestOutcome run_test_one_seq(std::span<const double> y, double sigma, double beta, double b,
                             bool dense) {
    if (!(beta > 0.0 && beta < 1.0)) throw ConstraintViolation("requires 0 < beta < 1");
    if (dense && beta < 0.5) throw ConstraintViolation("dense one-sequence test requires beta >= 0.5");
    if (!dense && beta >= 0.5) throw ConstraintViolation("sparse one-sequence test requires beta < 0.5");
    const auto n = static_cast<std::int64_t>(y.size());
    if (n < 2) throw DegenerateSize("requires n >= 2");
    const double dn = static_cast<double>(n);

    TestOutcome out;
    if (dense) {
        const EstimatorSettings settings(EstimatorKind::Q3, 0.0, sigma);
        out.estimator = EstimatorKind::Q3;
        out.statistic = estimate(settings, y);
        out.threshold = 0.5 * std::pow(dn, beta + 2 * b - 1);
    } else {
        const auto settings = EstimatorSettings::for_length(EstimatorKind::Q1, n, sigma);
        out.estimator = EstimatorKind::Q1;
        out.tau = settings.tau();
        out.statistic = estimate(settings, y);
        out.threshold = std::log(dn) / dn;
    }
    out.reject = out.statistic >= out.threshold;
    return out;
}

}  // namespace twoseq
