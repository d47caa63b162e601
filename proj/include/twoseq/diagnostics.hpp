#pragma once

#include <cstdint>
#include <string>

namespace twoseq {

enum class PriorKind { ShiftMixture, SignMixture, FullMixture, Perturbation };

std::string to_string(PriorKind kind);
/// shift | sign | full | perturb
PriorKind parse_prior_kind(const std::string& text);

struct AffinityResult {
    double exact = 1.0;
    bool exact_available = true;  ///< false past kMaxExactAffinitySize
    double bound = 1.0;
    PriorKind prior_kind = PriorKind::ShiftMixture;
};

inline constexpr std::int64_t kMaxExactAffinitySize = 1'000'000;

/// Chi-square affinity of a mixture prior pair. The number of overlaps M
/// between two random q-subsets of {1..k} is hypergeometric, so the exact value
/// is E[w^M]; the bound is the binomial majorant (1 - q/k + (q/k) w)^q.
/// For FullMixture pass the full vector length as k.
AffinityResult affinity_mixture(PriorKind kind, std::int64_t k, std::int64_t q, double rho,
                                double sigma);

/// exp(q delta^2 / sigma^2); exact and bound coincide.
AffinityResult affinity_perturbation(std::int64_t q, double delta, double sigma);

/// Two-point lower bound delta_q^2 / (1 + sqrt(xi))^2.
double cri_lower_bound(double delta_q, double xi);

struct TermBounds {
    double theta0_abs_bound = 0.0;
    double q1_bias_bound = 0.0;
    double q1_var_bound = 0.0;
    double q4_bias_bound = 0.0;
    double q4_var_bound = 0.0;
};

/// Per-coordinate bias and variance bounds for the thresholded estimators.
TermBounds term_bounds(double mu, double theta, double tau, double sigma);

/// FullMixture affinity used to certify an undetectable point: k = n,
/// q = floor(n^eps) and 2 rho^2 = r^2 + s^2.
AffinityResult undetectable_witness(std::int64_t n, double epsilon, double a, double b,
                                    double sigma);

}  // namespace twoseq
