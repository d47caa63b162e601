#include "twoseq/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "twoseq/error.hpp"
#include "twoseq/normal.hpp"

namespace twoseq {

namespace {

void check_positive(double tau, double sigma) {
    if (!(tau > 0.0)) throw DomainError("requires tau > 0");
    if (!(sigma > 0.0)) throw DomainError("requires sigma > 0");
}

double positive_part(double v) noexcept { return v > 0.0 ? v : 0.0; }

// P(lo <= Z <= hi), taken from whichever tail keeps both terms small.
double prob_between(double lo, double hi) noexcept {
    if (lo >= 0.0) return normal::sf(lo) - normal::sf(hi);
    if (hi <= 0.0) return normal::sf(-hi) - normal::sf(-lo);
    return 1.0 - normal::sf(-lo) - normal::sf(hi);
}

}  // namespace

std::string to_string(EstimatorKind kind) {
    static const char* names[] = {"Q0", "Q1", "Q2", "Q3", "Q4", "Q5"};
    return names[static_cast<int>(kind)];
}

EstimatorKind parse_estimator(const std::string& text) {
    if (text.size() == 2 && (text[0] == 'q' || text[0] == 'Q') && text[1] >= '0' && text[1] <= '5')
        return static_cast<EstimatorKind>(text[1] - '0');
    throw ConstraintViolation("unknown estimator '" + text + "' (q0..q5)");
}

bool is_one_sequence(EstimatorKind kind) noexcept {
    return kind == EstimatorKind::Q1 || kind == EstimatorKind::Q3;
}

bool needs_pair(EstimatorKind kind) noexcept {
    return kind == EstimatorKind::Q2 || kind == EstimatorKind::Q4 || kind == EstimatorKind::Q5;
}

bool uses_threshold(EstimatorKind kind) noexcept {
    return kind == EstimatorKind::Q1 || kind == EstimatorKind::Q2 || kind == EstimatorKind::Q4;
}

double theta0(double tau, double sigma) {
    check_positive(tau, sigma);
    const double t = std::sqrt(tau);
    return sigma * sigma * (2.0 * t * normal::pdf(t) + 2.0 * (1.0 - tau) * normal::sf(t));
}

double eta(double tau, double sigma) {
    check_positive(tau, sigma);
    const double p = normal::pdf(std::sqrt(tau));
    return -4.0 * std::pow(sigma, 4) * tau * p * p;
}

double truncated_moment(double theta, double tau, double sigma) {
    check_positive(tau, sigma);
    theta = std::abs(theta);  // even in theta; fold so both signs round identically
    const double t = std::sqrt(tau);
    const double z = theta / sigma;
    const double s2 = sigma * sigma;
    const double inside = prob_between(-t - z, t - z);
    return theta * theta * inside + normal::pdf(t + z) * (-s2 * t + sigma * theta) +
           normal::pdf(t - z) * (-s2 * t - sigma * theta);
}

double thresholded_mean(double theta, double tau, double sigma) {
    check_positive(tau, sigma);
    // E(Y^2 - s2 tau)_+ = E Y^2 - s2 tau - E(Y^2 - s2 tau)1(inside)
    //                   = theta^2 - T(theta) + s2 (1 - tau) P(outside).
    theta = std::abs(theta);
    const double t = std::sqrt(tau);
    const double z = theta / sigma;
    const double outside = normal::sf(t - z) + normal::sf(t + z);
    return theta * theta - truncated_moment(theta, tau, sigma) +
           sigma * sigma * (1.0 - tau) * outside;
}

double true_q(std::span<const double> mu, std::span<const double> theta) {
    if (mu.size() != theta.size()) throw LengthMismatch("mu and theta differ in length");
    if (mu.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) sum += mu[i] * mu[i] * theta[i] * theta[i];
    return sum / static_cast<double>(mu.size());
}

double true_q(const MeanPair& pair) { return true_q(pair.mu, pair.theta); }

double default_tau(EstimatorKind kind, std::int64_t n) {
    if (n < 2) throw DegenerateSize("default thresholds require n >= 2");
    const double ln = std::log(static_cast<double>(n));
    switch (kind) {
        case EstimatorKind::Q1: return 2.0 * ln;
        case EstimatorKind::Q2: return ln;
        case EstimatorKind::Q4: return 4.0 * ln;
        default: return 0.0;
    }
}

EstimatorSettings::EstimatorSettings(EstimatorKind kind, double tau, double sigma)
    : kind_(kind), tau_(tau), sigma_(sigma) {
    if (!(sigma > 0.0)) throw DomainError("requires sigma > 0");
    if (uses_threshold(kind)) {
        theta0_ = twoseq::theta0(tau, sigma);
        eta_ = twoseq::eta(tau, sigma);
        tau_below_one_ = tau < 1.0;
    }
}

EstimatorSettings EstimatorSettings::for_length(EstimatorKind kind, std::int64_t n, double sigma) {
    return {kind, default_tau(kind, n), sigma};
}

double estimate(const EstimatorSettings& settings, std::span<const double> y) {
    const EstimatorKind kind = settings.kind();
    if (needs_pair(kind))
        throw ArityMismatch(to_string(kind) + " needs both sequences");
    if (y.empty()) throw EmptyInput("empty observation vector");
    if (kind == EstimatorKind::Q0) return 0.0;

    const double s2 = settings.sigma() * settings.sigma();
    double sum = 0.0;
    if (kind == EstimatorKind::Q1) {
        const double cut = s2 * settings.tau();
        const double t0 = settings.theta0();
        for (double v : y) sum += positive_part(v * v - cut) - t0;
    } else {  // Q3
        for (double v : y) sum += v * v - s2;
    }
    return sum / static_cast<double>(y.size());
}

double estimate(const EstimatorSettings& settings, std::span<const double> x,
                std::span<const double> y) {
    const EstimatorKind kind = settings.kind();
    if (is_one_sequence(kind))
        throw ArityMismatch(to_string(kind) + " is a one-sequence estimator");
    if (x.size() != y.size()) throw LengthMismatch("x and y differ in length");
    if (y.empty()) throw EmptyInput("empty observation vectors");
    if (kind == EstimatorKind::Q0) return 0.0;

    const double s2 = settings.sigma() * settings.sigma();
    const double cut = s2 * settings.tau();
    const std::size_t n = y.size();
    double sum = 0.0;
    switch (kind) {
        case EstimatorKind::Q2: {
            const double t0 = settings.theta0();
            for (std::size_t i = 0; i < n; ++i)
                sum += (positive_part(x[i] * x[i] - cut) - t0) *
                       (positive_part(y[i] * y[i] - cut) - t0);
            break;
        }
        case EstimatorKind::Q4: {
            for (std::size_t i = 0; i < n; ++i) {
                const double x2 = x[i] * x[i], y2 = y[i] * y[i];
                if (std::max(x2, y2) > cut) sum += (x2 - s2) * (y2 - s2);
            }
            sum -= static_cast<double>(n) * settings.eta();
            break;
        }
        default:  // Q5
            for (std::size_t i = 0; i < n; ++i) sum += (x[i] * x[i] - s2) * (y[i] * y[i] - s2);
            break;
    }
    return sum / static_cast<double>(n);
}

double exact_mean_q4(const MeanPair& pair, double tau, double sigma) {
    if (!(tau >= 1.0)) throw DomainError("exact_mean_q4 requires tau >= 1");
    if (pair.mu.size() != pair.theta.size()) throw LengthMismatch("mu and theta differ in length");
    if (pair.mu.empty()) return 0.0;
    const double e = eta(tau, sigma);
    const double t_zero = truncated_moment(0.0, tau, sigma);
    double sum = 0.0;
    for (std::size_t i = 0; i < pair.mu.size(); ++i) {
        const double m = pair.mu[i], t = pair.theta[i];
        // Null coordinates contribute T(0)^2 + eta = 0 exactly; skip the work.
        if (m == 0.0 && t == 0.0) continue;
        const double tm = m == 0.0 ? t_zero : truncated_moment(m, tau, sigma);
        const double tt = t == 0.0 ? t_zero : truncated_moment(t, tau, sigma);
        sum += m * m * t * t - tm * tt - e;
    }
    return sum / static_cast<double>(pair.mu.size());
}

double median(std::vector<double> values) {
    if (values.empty()) throw EmptyInput("median of an empty vector");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower =
        *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double mad_sigma(std::span<const double> values) {
    if (values.empty()) throw EmptyInput("MAD of an empty vector");
    std::vector<double> m(values.begin(), values.end());
    const double centre = median(m);
    for (double& v : m) v = std::abs(v - centre);
    return median(std::move(m)) / kMadConstant;
}

double mad_sigma(std::span<const double> x, std::span<const double> y) {
    std::vector<double> m;
    m.reserve(x.size() + y.size());
    const std::size_t common = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < common; ++i) {
        m.push_back(x[i]);
        m.push_back(y[i]);
    }
    m.insert(m.end(), x.begin() + static_cast<std::ptrdiff_t>(common), x.end());
    m.insert(m.end(), y.begin() + static_cast<std::ptrdiff_t>(common), y.end());
    return mad_sigma(m);
}

}  // namespace twoseq
