#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace twoseq {

/// Magnitude calibration of a signal sequence: either n^exponent or
/// sigma * sqrt(coefficient * log n).
struct SignalStrength {
    enum class Kind { Algebraic, LogScale };

    Kind kind = Kind::Algebraic;
    double value = 0.0;  ///< exponent (Algebraic) or coefficient (LogScale)

    static SignalStrength algebraic(double exponent);
    static SignalStrength log_scale(double coefficient);

    bool is_log() const noexcept { return kind == Kind::LogScale; }

    /// Polynomial exponent used by the rate tables; LogScale sits at 0.
    double effective_exponent() const noexcept { return is_log() ? 0.0 : value; }

    double magnitude(std::int64_t n, double sigma) const;

    /// "0.15" for Algebraic, "log:2" for LogScale (17 significant digits).
    std::string to_string() const;
    static SignalStrength parse(const std::string& text);

    friend bool operator==(const SignalStrength&, const SignalStrength&) = default;
};

struct ProblemParams {
    std::int64_t n = 0;
    double beta = 0.0;
    double epsilon = 0.0;
    SignalStrength a;
    SignalStrength b;
    double sigma = 1.0;
    std::int64_t k = 0;  ///< max(1, floor(n^beta))
    std::int64_t q = 0;  ///< max(1, floor(n^epsilon))
    double r = 0.0;      ///< magnitude of mu entries
    double s = 0.0;      ///< magnitude of theta entries
};

/// Throws ConstraintViolation unless 0 < epsilon <= beta < 1/2.
void check_sparsity(double beta, double epsilon);

ProblemParams derive_params(std::int64_t n, double beta, double epsilon, SignalStrength a,
                            SignalStrength b, double sigma);

enum class Layout { FullOverlapStress, OverlapOnly, NullOnly };
enum class SignPattern { AllPositive, Rademacher };

struct PairConfig {
    Layout layout = Layout::FullOverlapStress;
    SignPattern signs = SignPattern::AllPositive;
};

std::string to_string(Layout layout);
Layout parse_layout(const std::string& text);
std::string to_string(SignPattern signs);
SignPattern parse_sign_pattern(const std::string& text);

struct MeanPair {
    std::vector<double> mu;
    std::vector<double> theta;
    std::size_t mu_support = 0;     ///< ||mu||_0
    std::size_t theta_support = 0;  ///< ||theta||_0
    std::size_t joint_support = 0;  ///< ||mu * theta||_0

    std::size_t size() const noexcept { return mu.size(); }
};

/// Recount the three supports from the vectors.
void recount_supports(MeanPair& pair);

/// Membership of the pair in the sparse parameter space described by params
/// (support counts and sup-norm bounds).
bool in_parameter_space(const MeanPair& pair, const ProblemParams& params);

/// Deterministic extreme-point configuration; see Layout for the block shapes.
MeanPair generate_pair(const ProblemParams& params, PairConfig config, std::uint64_t seed);

struct ObservationPair {
    std::vector<double> x;
    std::vector<double> y;
};

ObservationPair sample_observations(const MeanPair& pair, double sigma, std::uint64_t seed);

/// Allocation-free variant for hot loops: resizes and overwrites `out`.
void sample_observations(const MeanPair& pair, double sigma, std::uint64_t seed,
                         ObservationPair& out);

}  // namespace twoseq
