#pragma once

#include <string>
#include <vector>

#include "twoseq/estimators.hpp"
#include "twoseq/params.hpp"

namespace twoseq {

/// gamma_n ~ n^exponent * (log n)^log_power.
struct RateResult {
    double exponent = 0.0;
    int log_power = 0;        ///< 0, 2 or 4
    bool divergent = false;   ///< exponent > 0: no consistent estimator exists

    static RateResult of(double exponent, int log_power) {
        return {exponent, log_power, exponent > 0.0};
    }
};

/// Order by growth: exponent first, then log power.
bool rate_less(const RateResult& lhs, const RateResult& rhs, double tol = 1e-12);

enum class Regime { Sparse, ModeratelyDense, StronglyDense };

std::string to_string(Regime regime);

/// Sparse: eps < beta/2; moderately dense: beta/2 <= eps <= 3beta/4; else strongly dense.
Regime regime_of(double beta, double epsilon);
inline bool is_dense(Regime r) noexcept { return r != Regime::Sparse; }

/// Equal signal strengths a = b.
RateResult rate_two_seq_equal(double beta, double epsilon, double b);

/// Closed form valid in the sparse regime for algebraic strengths.
RateResult rate_sparse_closed_form(double epsilon, double a, double b);

/// One cell of the unequal-strength rate tables.
struct TableEntry {
    Regime regime = Regime::Sparse;
    int a_phase = 0;  ///< 0-based row index within the regime's table
    int b_phase = 0;  ///< 0-based column index
    std::string a_label;
    std::string b_label;
    std::vector<RateResult> candidates;  ///< one entry, or two for max{..} cells
    RateResult rate;                      ///< the dominant candidate
    bool tie = false;                     ///< max{..} candidates share an exponent
    bool q0_optimal = false;              ///< the trivial estimator attains the rate
};

TableEntry rate_two_seq_general(double beta, double epsilon, SignalStrength a, SignalStrength b);

/// Row/column index of a strength within the regime's table; exposed for tests.
int table_phase(Regime regime, double beta, double epsilon, SignalStrength s);
std::string table_phase_label(Regime regime, int phase);
int table_size(Regime regime);

/// Single-sequence rate for estimating (1/n) sum theta_i^2.
RateResult rate_one_seq(double beta, SignalStrength b);

/// Rates when signal size is measured in l2 norm.
RateResult rate_l2_one_seq(double beta, double b_tilde);
RateResult rate_l2_two_seq(double a_tilde, double b_tilde);

struct OptimalChoice {
    EstimatorKind kind = EstimatorKind::Q0;
    /// True on the log-scale boundary rows, where both the trivial estimator
    /// and `kind` attain the rate.
    bool boundary = false;
};

OptimalChoice optimal_estimator(double beta, double epsilon, SignalStrength a, SignalStrength b);

}  // namespace twoseq
