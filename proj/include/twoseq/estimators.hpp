#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "twoseq/params.hpp"

namespace twoseq {

enum class EstimatorKind { Q0, Q1, Q2, Q3, Q4, Q5 };

std::string to_string(EstimatorKind kind);
/// Accepts "q2" or "Q2".
EstimatorKind parse_estimator(const std::string& text);

/// Q1 and Q3 look at y only.
bool is_one_sequence(EstimatorKind kind) noexcept;
/// Q2, Q4 and Q5 need both sequences.
bool needs_pair(EstimatorKind kind) noexcept;
/// Q1, Q2 and Q4 are thresholded.
bool uses_threshold(EstimatorKind kind) noexcept;

/// E_0 (Y^2 - sigma^2 tau)_+ for Y ~ N(0, sigma^2).
double theta0(double tau, double sigma);

/// E_{(0,0)} (X^2 - sigma^2)(Y^2 - sigma^2) 1(X^2 v Y^2 > sigma^2 tau); always <= 0.
double eta(double tau, double sigma);

/// T(theta) = E (Y^2 - sigma^2) 1(Y^2 <= sigma^2 tau) for Y ~ N(theta, sigma^2).
double truncated_moment(double theta, double tau, double sigma);

/// E (Y^2 - sigma^2 tau)_+ for Y ~ N(theta, sigma^2); equals theta0 at theta = 0.
double thresholded_mean(double theta, double tau, double sigma);

/// Q(mu, theta) = (1/n) sum mu_i^2 theta_i^2.
double true_q(const MeanPair& pair);
double true_q(std::span<const double> mu, std::span<const double> theta);

/// Threshold used by the rate theorems: 2 log n (Q1), log n (Q2), 4 log n (Q4);
/// 0 for the unthresholded kinds.
double default_tau(EstimatorKind kind, std::int64_t n);

/// Estimator choice plus its debiasing constants, fixed at construction.
class EstimatorSettings {
public:
    EstimatorSettings(EstimatorKind kind, double tau, double sigma);

    /// Settings with the default threshold for vector length n.
    static EstimatorSettings for_length(EstimatorKind kind, std::int64_t n, double sigma);

    EstimatorKind kind() const noexcept { return kind_; }
    double tau() const noexcept { return tau_; }
    double sigma() const noexcept { return sigma_; }
    double theta0() const noexcept { return theta0_; }
    double mu0() const noexcept { return theta0_; }
    double eta() const noexcept { return eta_; }

    /// The lemma bounds assume tau >= 1; smaller thresholds still evaluate
    /// but are flagged here.
    bool tau_below_one() const noexcept { return tau_below_one_; }

private:
    EstimatorKind kind_;
    double tau_;
    double sigma_;
    double theta0_ = 0.0;
    double eta_ = 0.0;
    bool tau_below_one_ = false;
};

/// One-sequence evaluation (Q0, Q1, Q3).
double estimate(const EstimatorSettings& settings, std::span<const double> y);
/// Pair evaluation (Q0, Q2, Q4, Q5).
double estimate(const EstimatorSettings& settings, std::span<const double> x,
                std::span<const double> y);

/// Exact expectation of the Q4 statistic at the given means.
double exact_mean_q4(const MeanPair& pair, double tau, double sigma);

/// Median, averaging the two central order statistics for even length.
double median(std::vector<double> values);

/// MAD noise-level estimate on the interleaved sequence (x1, y1, x2, y2, ...);
/// a longer input contributes its tail after the interleaved part.
double mad_sigma(std::span<const double> x, std::span<const double> y);
double mad_sigma(std::span<const double> values);

inline constexpr double kMadConstant = 0.6745;

}  // namespace twoseq
