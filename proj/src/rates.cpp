#include "twoseq/rates.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "twoseq/error.hpp"

namespace twoseq {

bool rate_less(const RateResult& lhs, const RateResult& rhs, double tol) {
    if (lhs.exponent < rhs.exponent - tol) return true;
    if (lhs.exponent > rhs.exponent + tol) return false;
    return lhs.log_power < rhs.log_power;
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::Sparse: return "sparse";
        case Regime::ModeratelyDense: return "moderately-dense";
        case Regime::StronglyDense: return "strongly-dense";
    }
    return "?";
}

Regime regime_of(double beta, double epsilon) {
    check_sparsity(beta, epsilon);
    if (epsilon < beta / 2.0) return Regime::Sparse;
    if (epsilon <= 0.75 * beta) return Regime::ModeratelyDense;
    return Regime::StronglyDense;
}

RateResult rate_two_seq_equal(double beta, double epsilon, double b) {
    const Regime regime = regime_of(beta, epsilon);
    const double e = epsilon;
    if (b <= 0.0) return RateResult::of(2 * e + 8 * b - 2, 0);
    switch (regime) {
        case Regime::Sparse:
            if (b <= e / 2) return RateResult::of(2 * e + 4 * b - 2, 2);
            return RateResult::of(e + 6 * b - 2, 0);
        case Regime::ModeratelyDense:
            if (b <= (2 * e - beta) / 4) return RateResult::of(2 * e - 2, 4);
            if (b <= (beta - e) / 2) return RateResult::of(beta + 4 * b - 2, 0);
            return RateResult::of(e + 6 * b - 2, 0);
        case Regime::StronglyDense:
            if (b <= e / 6) return RateResult::of(2 * e - 2, 4);
            return RateResult::of(e + 6 * b - 2, 0);
    }
    return {};
}

RateResult rate_sparse_closed_form(double epsilon, double a, double b) {
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (lo <= 0.0) return RateResult::of(2 * epsilon + 4 * a + 4 * b - 2, 0);
    if (lo <= epsilon / 2) return RateResult::of(2 * epsilon + 4 * hi - 2, 2);
    return RateResult::of(epsilon + 4 * hi + 2 * lo - 2, 0);
}

// ---------------------------------------------------------------------------
// Unequal-strength tables. Every rate in them is linear in
// (beta, eps, a, b, a v b, a ^ b) with constant -2, times a power of log n;
// a log-scale strength enters with exponent 0.

namespace {

struct Term {
    double c_beta, c_eps, c_a, c_b, c_max, c_min;
    int log_power;

    RateResult eval(double beta, double eps, double a, double b) const {
        return RateResult::of(c_beta * beta + c_eps * eps + c_a * a + c_b * b +
                                  c_max * std::max(a, b) + c_min * std::min(a, b) - 2.0,
                              log_power);
    }
};

//                       beta eps  a  b  max min  log
constexpr Term k2e4a4b{0, 2, 4, 4, 0, 0, 0};  // 2eps + 4a + 4b
constexpr Term k2e4aL{0, 2, 4, 0, 0, 0, 2};   // 2eps + 4a, log^2
constexpr Term k2e4bL{0, 2, 0, 4, 0, 0, 2};   // 2eps + 4b, log^2
constexpr Term k2eL4{0, 2, 0, 0, 0, 0, 4};    // 2eps, log^4
constexpr Term k2e4maxL{0, 2, 0, 0, 4, 0, 2}; // 2eps + 4(a v b), log^2
constexpr Term kEMaxMin{0, 1, 0, 0, 4, 2, 0}; // eps + 4(a v b) + 2(a ^ b)
constexpr Term kB4a{1, 0, 4, 0, 0, 0, 0};     // beta + 4a
constexpr Term kB4b{1, 0, 0, 4, 0, 0, 0};     // beta + 4b
constexpr Term kB4max{1, 0, 0, 0, 4, 0, 0};   // beta + 4(a v b)
constexpr Term kE2a4b{0, 1, 2, 4, 0, 0, 0};   // eps + 2a + 4b
constexpr Term kE4a2b{0, 1, 4, 2, 0, 0, 0};   // eps + 4a + 2b

struct Cell {
    std::array<Term, 2> terms;
    int count;
    bool shaded;
};

constexpr Cell one(Term t, bool shaded) { return {{t, t}, 1, shaded}; }
constexpr Cell two(Term t, Term u, bool shaded) { return {{t, u}, 2, shaded}; }

using Table = std::array<std::array<Cell, 6>, 6>;

// Sparse: phases a<=0 | log | 0<a<=eps/2 | a>eps/2 (only 4x4 used).
constexpr Table kSparse = {{
    {one(k2e4a4b, true), one(k2e4aL, true), one(k2e4a4b, true), one(k2e4a4b, true)},
    {one(k2e4bL, true), one(k2eL4, true), one(k2e4bL, true), one(k2e4bL, true)},
    {one(k2e4a4b, true), one(k2e4aL, true), one(k2e4maxL, false), one(k2e4bL, false)},
    {one(k2e4a4b, true), one(k2e4aL, true), one(k2e4aL, false), one(kEMaxMin, false)},
}};

// Moderately dense: a<=(beta-2eps)/4 | ((beta-2eps)/4, 0] | log |
// (0, (2eps-beta)/4] | ((2eps-beta)/4, (beta-eps)/2] | > (beta-eps)/2.
constexpr Table kModerate = {{
    {one(k2e4a4b, true), one(k2e4a4b, true), one(k2e4aL, true), one(k2e4a4b, true),
     one(k2e4a4b, true), one(k2e4a4b, true)},
    {one(k2e4a4b, true), one(k2e4a4b, true), one(k2e4aL, true), two(kB4b, k2e4aL, false),
     one(kB4b, false), one(kB4b, false)},
    {one(k2e4bL, true), one(k2e4bL, true), one(k2eL4, true), one(k2eL4, false), one(kB4b, false),
     one(kB4b, false)},
    {one(k2e4a4b, true), two(kB4a, k2e4bL, false), one(k2eL4, false), one(k2eL4, false),
     one(kB4b, false), one(kB4b, false)},
    {one(k2e4a4b, true), one(kB4a, false), one(kB4a, false), one(kB4a, false), one(kB4max, false),
     one(kB4b, false)},
    {one(k2e4a4b, true), one(kB4a, false), one(kB4a, false), one(kB4a, false), one(kB4a, false),
     one(kEMaxMin, false)},
}};

// Strongly dense: a<=(beta-2eps)/4 | ((beta-2eps)/4, 0] | log |
// (0, (beta-eps)/2] | ((beta-eps)/2, (2eps-beta)/4] | > (2eps-beta)/4.
constexpr Table kStrong = {{
    {one(k2e4a4b, true), one(k2e4a4b, true), one(k2e4aL, true), one(k2e4a4b, true),
     one(k2e4a4b, true), one(k2e4a4b, true)},
    {one(k2e4a4b, true), one(k2e4a4b, true), one(k2e4aL, true), two(kB4b, k2e4aL, false),
     two(kB4b, k2e4aL, false), one(kB4b, false)},
    {one(k2e4bL, true), one(k2e4bL, true), one(k2eL4, true), one(k2eL4, false), one(k2eL4, false),
     one(kB4b, false)},
    {one(k2e4a4b, true), two(kB4a, k2e4bL, false), one(k2eL4, false), one(k2eL4, false),
     one(k2eL4, false), one(kB4b, false)},
    {one(k2e4a4b, true), two(kB4a, k2e4bL, false), one(k2eL4, false), one(k2eL4, false),
     two(k2eL4, kEMaxMin, false), one(kE2a4b, false)},
    {one(k2e4a4b, true), one(kB4a, false), one(kB4a, false), one(kB4a, false), one(kE4a2b, false),
     one(kEMaxMin, false)},
}};

const Table& table_for(Regime regime) {
    switch (regime) {
        case Regime::Sparse: return kSparse;
        case Regime::ModeratelyDense: return kModerate;
        default: return kStrong;
    }
}

}  // namespace

int table_size(Regime regime) { return regime == Regime::Sparse ? 4 : 6; }

int table_phase(Regime regime, double beta, double epsilon, SignalStrength s) {
    if (regime == Regime::Sparse) {
        if (s.is_log()) return 1;
        if (s.value <= 0.0) return 0;
        return s.value <= epsilon / 2 ? 2 : 3;
    }
    if (s.is_log()) return 2;
    const double v = s.value;
    const double low = (beta - 2 * epsilon) / 4;
    if (v <= low) return 0;
    if (v <= 0.0) return 1;
    // The two interior cut points swap order between the dense regimes.
    const double first = regime == Regime::ModeratelyDense ? (2 * epsilon - beta) / 4 : (beta - epsilon) / 2;
    const double second = regime == Regime::ModeratelyDense ? (beta - epsilon) / 2 : (2 * epsilon - beta) / 4;
    if (v <= first) return 3;
    if (v <= second) return 4;
    return 5;
}

std::string table_phase_label(Regime regime, int phase) {
    static const char* sparse[] = {"<=0", "log", "(0,eps/2]", ">eps/2"};
    static const char* moderate[] = {"<=(beta-2eps)/4", "((beta-2eps)/4,0]", "log",
                                     "(0,(2eps-beta)/4]", "((2eps-beta)/4,(beta-eps)/2]",
                                     ">(beta-eps)/2"};
    static const char* strong[] = {"<=(beta-2eps)/4", "((beta-2eps)/4,0]", "log",
                                   "(0,(beta-eps)/2]", "((beta-eps)/2,(2eps-beta)/4]",
                                   ">(2eps-beta)/4"};
    if (phase < 0 || phase >= table_size(regime)) return "?";
    switch (regime) {
        case Regime::Sparse: return sparse[phase];
        case Regime::ModeratelyDense: return moderate[phase];
        default: return strong[phase];
    }
}

TableEntry rate_two_seq_general(double beta, double epsilon, SignalStrength a, SignalStrength b) {
    TableEntry entry;
    entry.regime = regime_of(beta, epsilon);
    entry.a_phase = table_phase(entry.regime, beta, epsilon, a);
    entry.b_phase = table_phase(entry.regime, beta, epsilon, b);
    entry.a_label = table_phase_label(entry.regime, entry.a_phase);
    entry.b_label = table_phase_label(entry.regime, entry.b_phase);

    const Cell& cell = table_for(entry.regime)[entry.a_phase][entry.b_phase];
    entry.q0_optimal = cell.shaded;
    const double ea = a.effective_exponent(), eb = b.effective_exponent();

    if (entry.regime == Regime::Sparse && !a.is_log() && !b.is_log()) {
        entry.candidates = {rate_sparse_closed_form(epsilon, ea, eb)};
    } else {
        for (int i = 0; i < cell.count; ++i)
            entry.candidates.push_back(cell.terms[i].eval(beta, epsilon, ea, eb));
    }

    entry.rate = entry.candidates.front();
    if (entry.candidates.size() == 2) {
        const RateResult& other = entry.candidates[1];
        entry.tie = std::abs(other.exponent - entry.rate.exponent) <= 1e-12;
        if (rate_less(entry.rate, other)) entry.rate = other;
    }
    return entry;
}

RateResult rate_one_seq(double beta, SignalStrength b) {
    if (!(beta > 0.0 && beta < 1.0)) throw ConstraintViolation("requires 0 < beta < 1");
    if (b.is_log()) {
        if (beta >= 0.5)
            throw ConstraintViolation("log-scale one-sequence rate requires beta < 0.5");
        return RateResult::of(2 * beta - 2, 2);
    }
    const double v = b.value;
    if (beta < 0.5) {
        if (v <= 0.0) return RateResult::of(2 * beta + 4 * v - 2, 0);
        if (v <= beta / 2) return RateResult::of(2 * beta - 2, 2);
        return RateResult::of(beta + 2 * v - 2, 0);
    }
    if (v <= (1 - 2 * beta) / 4) return RateResult::of(2 * beta + 4 * v - 2, 0);
    if (v <= (1 - beta) / 2) return RateResult::of(-1.0, 0);
    return RateResult::of(beta + 2 * v - 2, 0);
}

RateResult rate_l2_one_seq(double beta, double b_tilde) {
    if (!(beta > 0.0 && beta < 1.0)) throw ConstraintViolation("requires 0 < beta < 1");
    if (beta < 0.5) {
        if (b_tilde <= beta / 2) return RateResult::of(4 * b_tilde - 2, 0);
        if (b_tilde <= beta) return RateResult::of(2 * beta - 2, 2);
        return RateResult::of(2 * b_tilde - 2, 0);
    }
    if (b_tilde <= 0.25) return RateResult::of(4 * b_tilde - 2, 0);
    if (b_tilde <= 0.5) return RateResult::of(-1.0, 0);
    return RateResult::of(2 * b_tilde - 2, 0);
}

RateResult rate_l2_two_seq(double a_tilde, double b_tilde) {
    const double lo = std::min(a_tilde, b_tilde), hi = std::max(a_tilde, b_tilde);
    if (lo <= 0.0) return RateResult::of(4 * a_tilde + 4 * b_tilde - 2, 0);
    return RateResult::of(4 * hi + 2 * lo - 2, 0);
}

namespace {

EstimatorKind optimal_algebraic(Regime regime, double beta, double epsilon, double a, double b) {
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (regime == Regime::Sparse) return lo > 0.0 ? EstimatorKind::Q2 : EstimatorKind::Q0;
    return (hi > 0.0 && lo > (beta - 2 * epsilon) / 4) ? EstimatorKind::Q4 : EstimatorKind::Q0;
}

}  // namespace

OptimalChoice optimal_estimator(double beta, double epsilon, SignalStrength a, SignalStrength b) {
    const Regime regime = regime_of(beta, epsilon);
    const double ea = a.effective_exponent(), eb = b.effective_exponent();
    const EstimatorKind at_zero = optimal_algebraic(regime, beta, epsilon, ea, eb);
    if (at_zero != EstimatorKind::Q0 || (!a.is_log() && !b.is_log())) return {at_zero, false};

    // A log-scale strength sits between "exponent 0" and "any positive
    // exponent". If nudging it upward turns on the non-trivial estimator, the
    // cell is on the boundary and both estimators attain the rate.
    constexpr double nudge = 1e-9;
    const EstimatorKind above = optimal_algebraic(regime, beta, epsilon, a.is_log() ? nudge : ea,
                                                  b.is_log() ? nudge : eb);
    if (above != EstimatorKind::Q0) return {above, true};
    return {EstimatorKind::Q0, false};
}

}  // namespace twoseq
