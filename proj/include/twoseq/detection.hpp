#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "twoseq/estimators.hpp"
#include "twoseq/params.hpp"

namespace twoseq {

enum class DetectionRegion { Detectable, Undetectable, Boundary };

std::string to_string(DetectionRegion region);

struct TestOutcome {
    double statistic = 0.0;
    double threshold = 0.0;
    bool reject = false;  ///< statistic >= threshold
    EstimatorKind estimator = EstimatorKind::Q0;
    double tau = 0.0;
};

DetectionRegion detect_region_two_seq(double beta, double epsilon, double a, double b);

/// 0.5 * n^(eps + 2a + 2b - 1).
double lambda_threshold(std::int64_t n, double epsilon, double a, double b);

/// Threshold for a ProblemParams: lambda_threshold for algebraic strengths,
/// otherwise the same expression written as 0.5 * n^eps * r^2 * s^2 / n.
double lambda_threshold(const ProblemParams& params);

/// Half the worst-case functional with the integer sparsity q:
/// 0.5 * q * r^2 * s^2 / n.
double lambda_threshold_floor(const ProblemParams& params);

/// Two-sequence test: Q2 with tau = log n (sparse) or Q4 with tau = 4 log n (dense).
TestOutcome run_test_two_seq(std::span<const double> x, std::span<const double> y, double sigma,
                             const ProblemParams& params);

/// Same statistic against a caller-chosen threshold.
TestOutcome run_test_two_seq(std::span<const double> x, std::span<const double> y, double sigma,
                             const ProblemParams& params, double threshold);

/// Detection boundary rho*(beta) for a single sequence.
double one_seq_boundary(double beta, SignalStrength::Kind scale);

/// Dense (beta >= 1/2): Q3 against 0.5 n^(beta + 2b - 1).
/// Sparse (beta < 1/2): Q1 with tau = 2 log n against (log n)/n.
TestOutcome run_test_one_seq(std::span<const double> y, double sigma, double beta, double b,
                             bool dense);

}  // namespace twoseq
