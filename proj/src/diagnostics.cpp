#include "twoseq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "twoseq/error.hpp"
#include "twoseq/normal.hpp"

namespace twoseq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_choose(double n, double r) {
    return std::lgamma(n + 1) - std::lgamma(r + 1) - std::lgamma(n - r + 1);
}

// log w and w - 1 for each mixture kind, computed without cancellation.
struct Weight {
    double log_w;
    double w_minus_1;
};

Weight mixture_weight(PriorKind kind, double x) {
    switch (kind) {
        case PriorKind::ShiftMixture: return {x, std::expm1(x)};
        case PriorKind::FullMixture: return {2 * x, std::expm1(2 * x)};
        case PriorKind::SignMixture: {
            const double sh = std::sinh(0.5 * x);
            return {x + std::log1p(std::exp(-2 * x)) - std::numbers::ln2, 2 * sh * sh};
        }
        default: throw ConstraintViolation("not a mixture prior");
    }
}

}  // namespace

std::string to_string(PriorKind kind) {
    switch (kind) {
        case PriorKind::ShiftMixture: return "shift";
        case PriorKind::SignMixture: return "sign";
        case PriorKind::FullMixture: return "full";
        case PriorKind::Perturbation: return "perturb";
    }
    return "?";
}

PriorKind parse_prior_kind(const std::string& text) {
    if (text == "shift") return PriorKind::ShiftMixture;
    if (text == "sign") return PriorKind::SignMixture;
    if (text == "full") return PriorKind::FullMixture;
    if (text == "perturb") return PriorKind::Perturbation;
    throw ConstraintViolation("unknown prior kind '" + text + "' (shift|sign|full|perturb)");
}

AffinityResult affinity_mixture(PriorKind kind, std::int64_t k, std::int64_t q, double rho,
                                double sigma) {
    if (kind == PriorKind::Perturbation) throw ConstraintViolation("use affinity_perturbation");
    if (!(q >= 1 && q <= k)) throw ConstraintViolation("requires 1 <= q <= k");
    if (!(rho >= 0.0)) throw ConstraintViolation("requires rho >= 0");
    if (!(sigma > 0.0)) throw ConstraintViolation("requires sigma > 0");

    const double x = rho * rho / (sigma * sigma);
    const Weight w = mixture_weight(kind, x);
    const double dk = static_cast<double>(k), dq = static_cast<double>(q);

    AffinityResult out;
    out.prior_kind = kind;
    const double log_bound = dq * std::log1p(dq / dk * w.w_minus_1);
    out.bound = std::isfinite(log_bound) ? std::exp(log_bound) : kInf;

    if (k > kMaxExactAffinitySize) {
        out.exact_available = false;
        out.exact = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    // log-sum-exp over the hypergeometric support.
    const std::int64_t m_lo = std::max<std::int64_t>(0, 2 * q - k);
    const double log_total = log_choose(dk, dq);
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(q - m_lo + 1));
    for (std::int64_t m = m_lo; m <= q; ++m) {
        const double dm = static_cast<double>(m);
        logs.push_back(log_choose(dq, dm) + log_choose(dk - dq, dq - dm) - log_total +
                       dm * w.log_w);
    }
    const double top = *std::max_element(logs.begin(), logs.end());
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - top);
    const double log_exact = top + std::log(acc);
    out.exact = std::isfinite(log_exact) ? std::exp(log_exact) : kInf;
    return out;
}

AffinityResult affinity_perturbation(std::int64_t q, double delta, double sigma) {
    if (q < 1) throw ConstraintViolation("requires q >= 1");
    if (!(sigma > 0.0)) throw ConstraintViolation("requires sigma > 0");
    AffinityResult out;
    out.prior_kind = PriorKind::Perturbation;
    out.exact = out.bound = std::exp(static_cast<double>(q) * delta * delta / (sigma * sigma));
    return out;
}

double cri_lower_bound(double delta_q, double xi) {
    if (!(xi >= 1.0)) throw ConstraintViolation("requires xi >= 1");
    const double d = 1.0 + std::sqrt(xi);
    return delta_q * delta_q / (d * d);
}

TermBounds term_bounds(double mu, double theta, double tau, double sigma) {
    if (!(tau >= 1.0)) throw ConstraintViolation("term bounds require tau >= 1");
    if (!(sigma > 0.0)) throw ConstraintViolation("requires sigma > 0");
    const double s2 = sigma * sigma, s4 = s2 * s2, s6 = s4 * s2, s8 = s4 * s4;
    const double rt = std::sqrt(tau);
    const double m2 = mu * mu, t2 = theta * theta;

    TermBounds b;
    b.theta0_abs_bound =
        4 * s2 / (std::sqrt(2 * std::numbers::pi) * rt * std::exp(tau / 2));
    b.q1_bias_bound = std::min(2 * s2 * tau, t2);
    b.q1_var_bound = 6 * s2 * t2 + s4 * (4 * rt + 18) * std::exp(-tau / 2);

    const double cm = std::min(m2, 3 * s2 * tau), ct = std::min(t2, 3 * s2 * tau);
    b.q4_bias_bound = cm * ct + 2 * s2 * rt * normal::pdf(rt) * (cm + ct);

    if (mu == 0.0 && theta == 0.0) {
        // d = E[(X^2 - s2)^4 (Y^2 - s2)^4] = (E[(Z^2 - 1)^4] s^8)^2 with E[(Z^2-1)^4] = 60.
        const double sqrt_d = 60 * s8;
        b.q4_var_bound = 2 * sqrt_d * std::sqrt(normal::sf(rt));
    } else {
        b.q4_var_bound = 4 * s2 * m2 * m2 * t2 + 4 * s2 * m2 * t2 * t2 + 16 * s4 * m2 * t2 +
                         2 * s4 * m2 * m2 + 2 * s4 * t2 * t2 + 8 * s6 * m2 + 8 * s6 * t2 +
                         4 * s8 + 8 * s4 * m2 * t2 * tau * tau;
    }
    return b;
}

AffinityResult undetectable_witness(std::int64_t n, double epsilon, double a, double b,
                                    double sigma) {
    if (n < 2) throw DegenerateSize("requires n >= 2");
    const double dn = static_cast<double>(n);
    const auto q = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::floor(std::pow(dn, epsilon) * (1.0 + 1e-12))));
    const double r = std::pow(dn, a), s = std::pow(dn, b);
    const double rho = std::sqrt((r * r + s * s) / 2);
    return affinity_mixture(PriorKind::FullMixture, n, q, rho, sigma);
}

}  // namespace twoseq
