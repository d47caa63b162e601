#include "twoseq/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

#include "twoseq/detection.hpp"
#include "twoseq/error.hpp"
#include "twoseq/rates.hpp"
#include "twoseq/rng.hpp"

namespace twoseq {

namespace {

constexpr std::uint64_t kPairStream = 0xFFFF'FFFF'0000'0001ULL;
constexpr std::uint64_t kNullStream = 0xFFFF'FFFF'0000'0002ULL;
constexpr std::uint64_t kAltStream = 0xFFFF'FFFF'0000'0003ULL;

double mean_square(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

struct Welford {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
    double stderr_of_mean() const {
        if (count < 2) return 0.0;
        return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
    }
};

double sigma_for(SigmaMode mode, double sigma, const ObservationPair& obs) {
    return mode == SigmaMode::Known ? sigma : mad_sigma(obs.x, obs.y);
}

}  // namespace

std::string to_string(SigmaMode mode) { return mode == SigmaMode::Known ? "known" : "mad"; }

SigmaMode parse_sigma_mode(const std::string& text) {
    if (text == "known") return SigmaMode::Known;
    if (text == "mad") return SigmaMode::MadEstimated;
    throw ConstraintViolation("unknown sigma mode '" + text + "' (known|mad)");
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TWOSEQ_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, unsigned)>& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i, 0);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count && !failed; i = next++) body(i, w);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<SimRow> run_mse_experiment(const SimConfig& config) {
    if (config.replications < 1) throw ConstraintViolation("requires replications >= 1");
    if (config.estimators.empty()) throw ConstraintViolation("no estimators requested");
    for (double beta : config.betas)
        for (double eps : config.epsilons) check_sparsity(beta, eps);

    std::vector<std::pair<SignalStrength, SignalStrength>> strengths;
    for (const auto& b : config.b_values) {
        if (config.a_values.empty()) {
            strengths.emplace_back(b, b);
        } else {
            for (const auto& a : config.a_values) strengths.emplace_back(a, b);
        }
    }

    const unsigned threads = resolve_threads(config.threads);
    const auto reps = static_cast<std::size_t>(config.replications);
    const std::size_t n_est = config.estimators.size();
    std::vector<SimRow> rows;
    std::uint64_t cell_index = 0;

    for (std::int64_t n : config.n_values) {
        for (double beta : config.betas) {
            for (double eps : config.epsilons) {
                for (const auto& [a, b] : strengths) {
                    const std::uint64_t cell_seed = derive_seed(config.master_seed, cell_index++);
                    const ProblemParams params = derive_params(n, beta, eps, a, b, config.sigma);
                    const MeanPair pair =
                        generate_pair(params, config.pair_config, derive_seed(cell_seed, kPairStream));
                    const double q_pair = true_q(pair);
                    const double q_theta = mean_square(pair.theta);

                    std::vector<EstimatorSettings> fixed;
                    for (auto kind : config.estimators)
                        fixed.push_back(EstimatorSettings::for_length(kind, n, config.sigma));

                    std::vector<double> values(n_est * reps);
                    std::vector<ObservationPair> buffers(threads);
                    parallel_for(reps, threads, [&](std::size_t rep, unsigned worker) {
                        ObservationPair& obs = buffers[worker];
                        sample_observations(pair, config.sigma, derive_seed(cell_seed, rep), obs);
                        const double sigma_hat = sigma_for(config.sigma_mode, config.sigma, obs);
                        for (std::size_t e = 0; e < n_est; ++e) {
                            const EstimatorKind kind = config.estimators[e];
                            const EstimatorSettings settings =
                                config.sigma_mode == SigmaMode::Known
                                    ? fixed[e]
                                    : EstimatorSettings::for_length(kind, n, sigma_hat);
                            values[e * reps + rep] = is_one_sequence(kind)
                                                         ? estimate(settings, obs.y)
                                                         : estimate(settings, obs.x, obs.y);
                        }
                    });

                    for (std::size_t e = 0; e < n_est; ++e) {
                        const EstimatorKind kind = config.estimators[e];
                        const double target = is_one_sequence(kind) ? q_theta : q_pair;
                        Welford err2, est;
                        for (std::size_t rep = 0; rep < reps; ++rep) {
                            const double v = values[e * reps + rep];
                            err2.add((v - target) * (v - target));
                            est.add(v);
                        }
                        SimRow row;
                        row.n = n;
                        row.beta = beta;
                        row.epsilon = eps;
                        row.a = a;
                        row.b = b;
                        row.sigma = config.sigma;
                        row.estimator = kind;
                        row.replications = config.replications;
                        row.mse = err2.mean;
                        row.mse_stderr = err2.stderr_of_mean();
                        row.mean_estimate = est.mean;
                        row.true_q = target;
                        row.seed = cell_seed;
                        rows.push_back(row);
                    }
                }
            }
        }
    }
    return rows;
}

SlopeFit fit_log_slope(const std::vector<SimRow>& rows) {
    std::map<std::int64_t, int> distinct;
    for (const auto& r : rows) ++distinct[r.n];
    if (distinct.size() < 2) throw InsufficientPoints("slope fit needs at least two distinct n");

    double sx = 0, sy = 0;
    for (const auto& r : rows) {
        if (!(r.mse > 0.0)) throw DomainError("slope fit needs mse > 0");
        sx += std::log10(static_cast<double>(r.n));
        sy += std::log10(r.mse);
    }
    const double m = static_cast<double>(rows.size());
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (const auto& r : rows) {
        const double dx = std::log10(static_cast<double>(r.n)) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log10(r.mse) - my);
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

DetectionResult run_detection_experiment(const DetectionConfig& config) {
    if (config.replications < 1) throw ConstraintViolation("requires replications >= 1");
    const ProblemParams params =
        derive_params(config.n, config.beta, config.epsilon, config.a, config.b, config.sigma);
    const MeanPair null_pair = generate_pair(params, {Layout::NullOnly, config.signs},
                                             derive_seed(config.master_seed, kNullStream));
    const MeanPair alt_pair = generate_pair(params, {Layout::FullOverlapStress, config.signs},
                                            derive_seed(config.master_seed, kAltStream));

    DetectionResult out;
    out.n = config.n;
    out.lambda = config.lambda_override.value_or(lambda_threshold(params));
    out.lambda_floor = config.lambda_override.value_or(lambda_threshold_floor(params));

    const unsigned threads = resolve_threads(config.threads);
    const auto reps = static_cast<std::size_t>(config.replications);
    std::vector<double> null_stat(reps), alt_stat(reps);
    std::vector<ObservationPair> buffers(threads);
    const std::uint64_t null_seed = derive_seed(config.master_seed, kNullStream + 1);
    const std::uint64_t alt_seed = derive_seed(config.master_seed, kAltStream + 1);

    // Statistic values only; both thresholds are applied afterwards.
    parallel_for(2 * reps, threads, [&](std::size_t i, unsigned worker) {
        const bool is_null = i < reps;
        const std::size_t rep = is_null ? i : i - reps;
        ObservationPair& obs = buffers[worker];
        sample_observations(is_null ? null_pair : alt_pair, config.sigma,
                            derive_seed(is_null ? null_seed : alt_seed, rep), obs);
        const double sigma_hat = sigma_for(config.sigma_mode, config.sigma, obs);
        const TestOutcome t = run_test_two_seq(obs.x, obs.y, sigma_hat, params, out.lambda);
        (is_null ? null_stat : alt_stat)[rep] = t.statistic;
    });
    out.estimator = is_dense(regime_of(config.beta, config.epsilon)) ? EstimatorKind::Q4 : EstimatorKind::Q2;

    std::size_t rej1 = 0, acc2 = 0, rej1f = 0, acc2f = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        rej1 += null_stat[r] >= out.lambda;
        acc2 += alt_stat[r] < out.lambda;
        rej1f += null_stat[r] >= out.lambda_floor;
        acc2f += alt_stat[r] < out.lambda_floor;
    }
    const double dr = static_cast<double>(reps);
    out.type1 = static_cast<double>(rej1) / dr;
    out.type2 = static_cast<double>(acc2) / dr;
    out.type1_floor = static_cast<double>(rej1f) / dr;
    out.type2_floor = static_cast<double>(acc2f) / dr;
    return out;
}

}  // namespace twoseq
