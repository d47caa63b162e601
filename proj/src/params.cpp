#include "twoseq/params.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "twoseq/error.hpp"
#include "twoseq/rng.hpp"

namespace twoseq {

namespace {

std::int64_t floor_power(std::int64_t n, double exponent) {
    // A hair of slack so that exact powers such as 10000^0.5 are not floored
    // to 99 by a last-bit rounding error in std::pow.
    const double v = std::pow(static_cast<double>(n), exponent);
    const auto f = static_cast<std::int64_t>(std::floor(v * (1.0 + 1e-12)));
    return f < 1 ? 1 : f;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

SignalStrength SignalStrength::algebraic(double exponent) {
    if (!std::isfinite(exponent)) throw ConstraintViolation("signal exponent must be finite");
    return {Kind::Algebraic, exponent};
}

SignalStrength SignalStrength::log_scale(double coefficient) {
    if (!(coefficient > 0.0) || !std::isfinite(coefficient))
        throw ConstraintViolation("log-scale coefficient requires c > 0");
    return {Kind::LogScale, coefficient};
}

double SignalStrength::magnitude(std::int64_t n, double sigma) const {
    const double dn = static_cast<double>(n);
    if (is_log()) return sigma * std::sqrt(value * std::log(dn));
    return std::pow(dn, value);
}

std::string SignalStrength::to_string() const {
    return is_log() ? "log:" + format_g17(value) : format_g17(value);
}

SignalStrength SignalStrength::parse(const std::string& text) {
    try {
        std::size_t used = 0;
        if (text.rfind("log:", 0) == 0) {
            const std::string body = text.substr(4);
            const double c = std::stod(body, &used);
            if (used != body.size()) throw std::invalid_argument(text);
            return log_scale(c);
        }
        const double e = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return algebraic(e);
    } catch (const std::logic_error&) {
        throw ConstraintViolation("cannot parse signal strength '" + text +
                                  "' (expected a number or log:<coef>)");
    }
}

void check_sparsity(double beta, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= beta && beta < 0.5))
        throw ConstraintViolation("requires 0 < epsilon <= beta < 0.5 (got beta=" +
                                  format_short(beta) + ", epsilon=" + format_short(epsilon) + ")");
}

ProblemParams derive_params(std::int64_t n, double beta, double epsilon, SignalStrength a,
                            SignalStrength b, double sigma) {
    if (n < 2) throw DegenerateSize("requires n >= 2");
    check_sparsity(beta, epsilon);
    if (!(sigma > 0.0)) throw ConstraintViolation("requires sigma > 0");

    ProblemParams p;
    p.n = n;
    p.beta = beta;
    p.epsilon = epsilon;
    p.a = a;
    p.b = b;
    p.sigma = sigma;
    p.k = floor_power(n, beta);
    p.q = floor_power(n, epsilon);
    p.r = a.magnitude(n, sigma);
    p.s = b.magnitude(n, sigma);
    return p;
}

std::string to_string(Layout layout) {
    switch (layout) {
        case Layout::FullOverlapStress: return "full-overlap";
        case Layout::OverlapOnly: return "overlap-only";
        case Layout::NullOnly: return "null";
    }
    return "?";
}

Layout parse_layout(const std::string& text) {
    if (text == "full-overlap") return Layout::FullOverlapStress;
    if (text == "overlap-only") return Layout::OverlapOnly;
    if (text == "null") return Layout::NullOnly;
    throw ConstraintViolation("unknown layout '" + text + "' (full-overlap|overlap-only|null)");
}

std::string to_string(SignPattern signs) {
    return signs == SignPattern::AllPositive ? "positive" : "rademacher";
}

SignPattern parse_sign_pattern(const std::string& text) {
    if (text == "positive") return SignPattern::AllPositive;
    if (text == "rademacher") return SignPattern::Rademacher;
    throw ConstraintViolation("unknown sign pattern '" + text + "' (positive|rademacher)");
}

void recount_supports(MeanPair& pair) {
    pair.mu_support = pair.theta_support = pair.joint_support = 0;
    for (std::size_t i = 0; i < pair.mu.size(); ++i) {
        const bool m = pair.mu[i] != 0.0;
        const bool t = pair.theta[i] != 0.0;
        pair.mu_support += m;
        pair.theta_support += t;
        pair.joint_support += (m && t);
    }
}

bool in_parameter_space(const MeanPair& pair, const ProblemParams& params) {
    if (pair.mu.size() != static_cast<std::size_t>(params.n) || pair.theta.size() != pair.mu.size())
        return false;
    MeanPair counted = pair;
    recount_supports(counted);
    const auto k = static_cast<std::size_t>(params.k);
    const auto q = static_cast<std::size_t>(params.q);
    if (counted.mu_support > k || counted.theta_support > k || counted.joint_support > q)
        return false;
    for (std::size_t i = 0; i < pair.mu.size(); ++i) {
        if (std::abs(pair.mu[i]) > params.r || std::abs(pair.theta[i]) > params.s) return false;
    }
    return true;
}

MeanPair generate_pair(const ProblemParams& params, PairConfig config, std::uint64_t seed) {
    const std::int64_t n = params.n, k = params.k, q = params.q;
    std::int64_t joint = 0, mu_only = 0, theta_only = 0;
    switch (config.layout) {
        case Layout::FullOverlapStress:
            if (2 * k - q > n) throw ConfigInfeasible("full-overlap layout requires 2k - q <= n");
            joint = q;
            mu_only = theta_only = k - q;
            break;
        case Layout::OverlapOnly:
            joint = q;
            break;
        case Layout::NullOnly:
            if (2 * k > n) throw ConfigInfeasible("null layout requires 2k <= n");
            mu_only = theta_only = k;
            break;
    }

    MeanPair pair;
    pair.mu.assign(static_cast<std::size_t>(n), 0.0);
    pair.theta.assign(static_cast<std::size_t>(n), 0.0);

    Rng rng(derive_seed(seed, 0x5167'4e5ULL));
    auto sign = [&] { return config.signs == SignPattern::Rademacher ? rng.sign() : 1.0; };

    // Blocks: [0, joint) both, then mu-only, then theta-only; all disjoint.
    std::size_t i = 0;
    for (std::int64_t j = 0; j < joint; ++j, ++i) {
        pair.mu[i] = sign() * params.r;
        pair.theta[i] = sign() * params.s;
    }
    for (std::int64_t j = 0; j < mu_only; ++j, ++i) pair.mu[i] = sign() * params.r;
    for (std::int64_t j = 0; j < theta_only; ++j, ++i) pair.theta[i] = sign() * params.s;

    recount_supports(pair);
    return pair;
}

void sample_observations(const MeanPair& pair, double sigma, std::uint64_t seed,
                         ObservationPair& out) {
    if (!(sigma > 0.0)) throw ConstraintViolation("requires sigma > 0");
    const std::size_t n = pair.size();
    out.x.resize(n);
    out.y.resize(n);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        out.x[i] = pair.mu[i] + sigma * rng.normal();
        out.y[i] = pair.theta[i] + sigma * rng.normal();
    }
}

ObservationPair sample_observations(const MeanPair& pair, double sigma, std::uint64_t seed) {
    ObservationPair out;
    sample_observations(pair, sigma, seed, out);
    return out;
}

}  // namespace twoseq
