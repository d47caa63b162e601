#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twoseq/estimators.hpp"
#include "twoseq/params.hpp"

namespace twoseq {

enum class SigmaMode { Known, MadEstimated };

std::string to_string(SigmaMode mode);
SigmaMode parse_sigma_mode(const std::string& text);  // known | mad

struct SimConfig {
    std::vector<std::int64_t> n_values{1000, 10000, 100000};
    std::vector<double> betas{0.45};
    std::vector<double> epsilons{0.3};
    /// Empty means "a = b" for every b (equal signal strengths).
    std::vector<SignalStrength> a_values;
    std::vector<SignalStrength> b_values{SignalStrength::algebraic(0.2)};
    double sigma = 1.0;
    std::vector<EstimatorKind> estimators{EstimatorKind::Q0, EstimatorKind::Q2, EstimatorKind::Q4};
    int replications = 200;
    PairConfig pair_config{};
    std::uint64_t master_seed = 20240101;
    SigmaMode sigma_mode = SigmaMode::Known;
    unsigned threads = 0;  ///< 0: TWOSEQ_THREADS or hardware concurrency
};

struct SimRow {
    std::int64_t n = 0;
    double beta = 0.0;
    double epsilon = 0.0;
    SignalStrength a;
    SignalStrength b;
    double sigma = 1.0;
    EstimatorKind estimator = EstimatorKind::Q0;
    int replications = 0;
    double mse = 0.0;
    double mse_stderr = 0.0;
    double mean_estimate = 0.0;
    /// Estimation target: Q(mu, theta), or (1/n) sum theta_i^2 for Q1/Q3.
    double true_q = 0.0;
    std::uint64_t seed = 0;  ///< seed of the cell the row came from

    friend bool operator==(const SimRow&, const SimRow&) = default;
};

/// Worker count actually used for a requested value (0 = automatic).
unsigned resolve_threads(unsigned requested);

/// Runs body(i, worker) for i in [0, count) on `threads` workers. Work is
/// claimed dynamically; callers must write results by index.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, unsigned)>& body);

/// One row per (cell, estimator). Each cell fixes its mean pair and redraws
/// noise per replication; all estimators share the same draws.
std::vector<SimRow> run_mse_experiment(const SimConfig& config);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least squares of log10(mse) on log10(n).
SlopeFit fit_log_slope(const std::vector<SimRow>& rows);

struct DetectionConfig {
    std::int64_t n = 100000;
    double beta = 0.45;
    double epsilon = 0.35;
    SignalStrength a = SignalStrength::algebraic(0.15);
    SignalStrength b = SignalStrength::algebraic(0.15);
    double sigma = 1.0;
    int replications = 500;
    SignPattern signs = SignPattern::AllPositive;
    std::uint64_t master_seed = 20240101;
    SigmaMode sigma_mode = SigmaMode::Known;
    unsigned threads = 0;
    /// Replaces both thresholds when set (e.g. +infinity never rejects).
    std::optional<double> lambda_override;
};

struct DetectionResult {
    std::int64_t n = 0;
    EstimatorKind estimator = EstimatorKind::Q0;
    /// Calibration 0.5 n^(eps+2a+2b-1).
    double lambda = 0.0;
    double type1 = 0.0;
    double type2 = 0.0;
    /// Calibration 0.5 q r^2 s^2 / n with the integer q actually planted.
    double lambda_floor = 0.0;
    double type1_floor = 0.0;
    double type2_floor = 0.0;
};

/// Type-I error under a null layout (no simultaneous signal) and type-II error
/// under the full-overlap layout, for the regime's two-sequence test.
DetectionResult run_detection_experiment(const DetectionConfig& config);

}  // namespace twoseq
