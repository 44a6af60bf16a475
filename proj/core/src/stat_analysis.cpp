#include "pcscrypt/stat_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>

namespace pcscrypt::stats {

namespace {

__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

constexpr std::size_t kRunTestMinLength = 5000;
constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 25;

void require(bool ok, const std::string& what) {
    if (!ok) throw InsufficientDataError(what);
}

std::uint64_t tuple_space(std::uint32_t radix, unsigned n) {
    if (n == 0) throw ParameterError("tuple size must be positive");
    u128 k = 1;
    for (unsigned i = 0; i < n; ++i) {
        k *= radix;
        if (k > std::numeric_limits<std::uint64_t>::max()) {
            throw ParameterError("radix^" + std::to_string(n) + " exceeds 64 bits");
        }
    }
    return static_cast<std::uint64_t>(k);
}

void check_digits(std::span<const Digit> seq, std::uint32_t radix) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] >= radix) {
            throw MalformedInputError("symbol " + std::to_string(seq[i]) + " at offset " + std::to_string(i) +
                                      " is not below radix " + std::to_string(radix));
        }
    }
}

ChiSquareResult failed(std::string test, std::size_t samples) {
    ChiSquareResult r;
    r.test = std::move(test);
    r.statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    r.samples = samples;
    return r;
}

}  // namespace

std::vector<double> ChiSquareResult::pass_at() const {
    std::vector<double> out;
    for (double alpha : {0.05, 0.01}) {
        if (passes(alpha)) out.push_back(alpha);
    }
    return out;
}

double chi_square_sf(double statistic, std::size_t df) {
    if (df == 0) throw ParameterError("chi-square needs at least one degree of freedom");
    if (statistic <= 0.0) return 1.0;
    if (std::isinf(statistic)) return 0.0;
    return boost::math::gamma_q(static_cast<double>(df) / 2.0, statistic / 2.0);
}

double chi_square_quantile(double p, std::size_t df) {
    if (df == 0) throw ParameterError("chi-square needs at least one degree of freedom");
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("quantile probability must lie in (0, 1)");
    return 2.0 * boost::math::gamma_p_inv(static_cast<double>(df) / 2.0, p);
}

ChiSquareResult chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected,
                           std::string test) {
    if (observed.size() != expected.size()) throw ParameterError("observed and expected differ in size");
    if (observed.size() < 2) throw ParameterError("chi-square needs at least two categories");
    ChiSquareResult r;
    r.test = std::move(test);
    long double x = 0.0L;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0)) throw ParameterError("expected count must be positive");
        const long double d = static_cast<long double>(observed[i]) - expected[i];
        x += d * d / expected[i];
        total += observed[i];
    }
    r.statistic = static_cast<double>(x);
    r.degrees_of_freedom = observed.size() - 1;
    r.p_value = chi_square_sf(r.statistic, r.degrees_of_freedom);
    r.samples = total;
    r.categories = observed.size();
    return r;
}

ChiSquareResult chi_square_merged(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                                  std::uint64_t total, std::string test) {
    if (observed.size() != probabilities.size()) throw ParameterError("observed and probabilities differ in size");
    require(total > 0, test + ": no observations");
    std::vector<std::uint64_t> obs;
    std::vector<double> exp;
    std::uint64_t acc_obs = 0;
    double acc_exp = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        acc_obs += observed[i];
        acc_exp += probabilities[i] * static_cast<double>(total);
        if (acc_exp >= kMinExpected) {
            obs.push_back(acc_obs);
            exp.push_back(acc_exp);
            acc_obs = 0;
            acc_exp = 0.0;
        }
    }
    if (acc_obs != 0 || acc_exp > 0.0) {
        require(!obs.empty(), test + ": too few observations for any category to reach 5 expected");
        obs.back() += acc_obs;
        exp.back() += acc_exp;
    }
    require(obs.size() >= 2, test + ": too few observations to form two categories");
    return chi_square(obs, exp, std::move(test));
}

std::vector<std::uint64_t> histogram(std::span<const Digit> seq, std::uint32_t radix) {
    check_digits(seq, radix);
    std::vector<std::uint64_t> counts(radix);
    for (const auto d : seq) ++counts[d];
    return counts;
}

ChiSquareResult frequency_test(std::span<const Digit> seq, std::uint32_t radix) {
    require(seq.size() >= 5ull * radix, "frequency test needs at least " + std::to_string(5ull * radix) +
                                            " symbols, got " + std::to_string(seq.size()));
    const auto counts = histogram(seq, radix);
    const std::vector<double> expected(radix, static_cast<double>(seq.size()) / radix);
    return chi_square(counts, expected, "frequency");
}

ChiSquareResult serial_test(std::span<const Digit> seq, unsigned n, std::uint32_t radix) {
    check_digits(seq, radix);
    const std::uint64_t k = tuple_space(radix, n);
    const std::uint64_t t = seq.size() / n;
    const std::string name = "serial" + std::to_string(n);

    auto code_at = [&](std::uint64_t i) {
        std::uint64_t c = 0;
        for (unsigned j = 0; j < n; ++j) c = c * radix + seq[i * n + j];
        return c;
    };

    if (t >= 5 * k) {
        std::vector<std::uint64_t> counts(k);
        for (std::uint64_t i = 0; i < t; ++i) ++counts[code_at(i)];
        const std::vector<double> expected(k, static_cast<double>(t) / static_cast<double>(k));
        return chi_square(counts, expected, name);
    }
    require(n >= 3, name + " test needs at least " + std::to_string(5 * k) + " tuples, got " + std::to_string(t));

    std::uint64_t groups = std::min<std::uint64_t>(k, t / 5);
    while (groups >= 2 && static_cast<u128>(t) * (k / groups) < static_cast<u128>(5) * k) --groups;
    require(groups >= 2, name + " test has too few tuples for a sparse grouping");

    std::vector<std::uint64_t> counts(groups);
    for (std::uint64_t i = 0; i < t; ++i) {
        const u128 c = code_at(i);
        ++counts[static_cast<std::size_t>(((c + 1) * groups - 1) / k)];
    }
    std::vector<double> expected(groups);
    for (std::uint64_t g = 0; g < groups; ++g) {
        const auto lo = static_cast<std::uint64_t>(static_cast<u128>(g) * k / groups);
        const auto hi = static_cast<std::uint64_t>(static_cast<u128>(g + 1) * k / groups);
        expected[g] = static_cast<double>(t) * static_cast<double>(hi - lo) / static_cast<double>(k);
    }
    auto r = chi_square(counts, expected, name);
    r.test = name + "-sparse";
    return r;
}

std::vector<double> poker_probabilities(std::uint32_t radix, unsigned hand) {
    // Stirling numbers of the second kind, S(hand, r).
    std::vector<std::vector<double>> s(hand + 1, std::vector<double>(hand + 1, 0.0));
    s[0][0] = 1.0;
    for (unsigned i = 1; i <= hand; ++i) {
        for (unsigned r = 1; r <= i; ++r) s[i][r] = r * s[i - 1][r] + s[i - 1][r - 1];
    }
    std::vector<double> p(hand);
    const double d = radix;
    for (unsigned r = 1; r <= hand; ++r) {
        double falling = 1.0;
        for (unsigned j = 0; j < r; ++j) falling *= (d - j) / d;
        p[r - 1] = falling * s[hand][r] / std::pow(d, static_cast<double>(hand - r));
    }
    return p;
}

ChiSquareResult poker_test(std::span<const Digit> seq, std::uint32_t radix) {
    check_digits(seq, radix);
    constexpr unsigned kHand = 5;
    const std::size_t hands = seq.size() / kHand;
    require(hands > 0, "poker test needs at least one hand of 5 symbols");
    std::vector<std::uint64_t> counts(kHand);
    for (std::size_t h = 0; h < hands; ++h) {
        const Digit* v = seq.data() + h * kHand;
        unsigned distinct = 0;
        for (unsigned i = 0; i < kHand; ++i) {
            if (std::find(v, v + i, v[i]) == v + i) ++distinct;
        }
        ++counts[distinct - 1];
    }
    return chi_square_merged(counts, poker_probabilities(radix, kHand), hands, "poker");
}

std::vector<double> run_tail_probabilities(std::uint32_t radix, unsigned max_len) {
    std::vector<double> p(max_len);
    double t = 1.0;
    for (unsigned r = 1; r <= max_len; ++r) {
        p[r - 1] = t;
        t *= (static_cast<double>(radix) - r) / (static_cast<double>(radix) * (r + 1));
        if (t < 0.0) t = 0.0;
    }
    return p;
}

namespace {

ChiSquareResult run_direction(std::span<const Digit> seq, std::uint32_t radix, bool up) {
    const unsigned max_len = std::min<std::uint32_t>(radix, 20);
    std::vector<std::uint64_t> counts(max_len);
    std::uint64_t total = 0;
    const std::size_t n = seq.size();
    std::size_t i = 0;
    while (i + 1 < n) {
        std::size_t len = 1;
        while (i + len < n && (up ? seq[i + len] > seq[i + len - 1] : seq[i + len] < seq[i + len - 1])) ++len;
        if (i + len >= n) break;
        ++counts[std::min<std::size_t>(len, max_len) - 1];
        ++total;
        i += len + 1;
    }
    const std::string name = up ? "runs-up" : "runs-down";
    if (total == 0) return failed(name, 0);

    const auto tail = run_tail_probabilities(radix, max_len);
    std::vector<double> p(max_len);
    for (unsigned r = 0; r + 1 < max_len; ++r) p[r] = tail[r] - tail[r + 1];
    p[max_len - 1] = tail[max_len - 1];
    try {
        return chi_square_merged(counts, p, total, name);
    } catch (const InsufficientDataError&) {
        return failed(name, total);
    }
}

}  // namespace

RunTestResult run_test(std::span<const Digit> seq, std::uint32_t radix) {
    require(seq.size() >= kRunTestMinLength, "run test needs at least " + std::to_string(kRunTestMinLength) +
                                                 " symbols, got " + std::to_string(seq.size()));
    check_digits(seq, radix);
    return {run_direction(seq, radix, true), run_direction(seq, radix, false)};
}

double CorrelationResult::fraction_in_bounds() const noexcept {
    if (coefficients.empty()) return 0.0;
    return 1.0 - static_cast<double>(out_of_bounds.size()) / static_cast<double>(coefficients.size());
}

namespace {

struct WindowSums {
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
};

WindowSums window_sums(const Digit* v, std::size_t w) {
    WindowSums s;
    for (std::size_t i = 0; i < w; ++i) {
        s.sum += v[i];
        s.sum_sq += static_cast<std::uint64_t>(v[i]) * v[i];
    }
    return s;
}

std::uint64_t dot(const Digit* a, const Digit* b, std::size_t w) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < w; ++i) acc += static_cast<std::uint32_t>(a[i]) * b[i];
    return acc;
}

double coefficient(std::size_t w, const WindowSums& u, const WindowSums& v, std::uint64_t uv) {
    const auto n = static_cast<i128>(w);
    const i128 num = n * static_cast<i128>(uv) - static_cast<i128>(u.sum) * static_cast<i128>(v.sum);
    const i128 du = n * static_cast<i128>(u.sum_sq) - static_cast<i128>(u.sum) * static_cast<i128>(u.sum);
    const i128 dv = n * static_cast<i128>(v.sum_sq) - static_cast<i128>(v.sum) * static_cast<i128>(v.sum);
    if (du <= 0 || dv <= 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(static_cast<long double>(num) /
                               std::sqrt(static_cast<long double>(du) * static_cast<long double>(dv)));
}

}  // namespace

double correlation_at(std::span<const Digit> seq, std::size_t window, std::size_t shift) {
    require(window >= 4, "correlation window must hold at least 4 symbols");
    require(seq.size() >= window + shift, "correlation needs window + shift symbols");
    const Digit* u = seq.data();
    const Digit* v = seq.data() + shift;
    return coefficient(window, window_sums(u, window), window_sums(v, window), dot(u, v, window));
}

CorrelationResult serial_correlation(std::span<const Digit> seq, std::size_t window, std::size_t max_shift,
                                     unsigned threads) {
    require(window >= 4, "correlation window must hold at least 4 symbols");
    require(seq.size() >= window + max_shift, "serial correlation needs " + std::to_string(window + max_shift) +
                                                  " symbols, got " + std::to_string(seq.size()));
    CorrelationResult r;
    r.window = window;
    const double w = static_cast<double>(window);
    r.mean = -1.0 / (w - 1.0);
    r.sigma = std::sqrt(w * (w - 3.0) / (w + 1.0)) / (w - 1.0);
    r.lower = r.mean - 2.0 * r.sigma;
    r.upper = r.mean + 2.0 * r.sigma;
    r.coefficients.resize(max_shift);

    const Digit* base = seq.data();
    const WindowSums u = window_sums(base, window);
    auto work = [&](std::size_t first, std::size_t last) {
        WindowSums v = window_sums(base + first, window);
        for (std::size_t s = first; s < last; ++s) {
            r.coefficients[s - 1] = coefficient(window, u, v, dot(base, base + s, window));
            const std::uint64_t out = base[s];
            const std::uint64_t in = base[s + window];
            v.sum = v.sum - out + in;
            v.sum_sq = v.sum_sq - out * out + in * in;
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, max_shift / 1024));
    if (workers == 1) {
        work(1, max_shift + 1);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (max_shift + workers - 1) / workers;
        for (std::size_t k = 0; k < workers; ++k) {
            const std::size_t first = 1 + k * chunk;
            const std::size_t last = std::min(max_shift + 1, first + chunk);
            if (first < last) pool.emplace_back(work, first, last);
        }
    }

    for (std::size_t s = 1; s <= max_shift; ++s) {
        const double c = r.coefficients[s - 1];
        if (!(c >= r.lower && c <= r.upper)) r.out_of_bounds.push_back(s);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Entropy

struct EntropyAccumulator::Counts {
    std::vector<std::uint32_t> dense;
    std::unordered_map<std::uint64_t, std::uint64_t> sparse;
};

EntropyAccumulator::EntropyAccumulator(unsigned n, std::uint32_t radix)
    : n_(n), radix_(radix), counts_(std::make_unique<Counts>()) {
    if (radix < 2) throw ParameterError("radix must be at least 2");
    const std::uint64_t k = tuple_space(radix, n);
    if (k <= kDenseLimit) counts_->dense.assign(k, 0);
}

EntropyAccumulator::~EntropyAccumulator() = default;
EntropyAccumulator::EntropyAccumulator(EntropyAccumulator&&) noexcept = default;
EntropyAccumulator& EntropyAccumulator::operator=(EntropyAccumulator&&) noexcept = default;

void EntropyAccumulator::push(Digit d) {
    if (d >= radix_) {
        throw MalformedInputError("symbol " + std::to_string(d) + " is not below radix " + std::to_string(radix_));
    }
    code_ = code_ * radix_ + d;
    if (++filled_ < n_) return;
    if (!counts_->dense.empty()) {
        auto& c = counts_->dense[code_];
        if (c == std::numeric_limits<std::uint32_t>::max()) throw RangeError("entropy tuple count overflow");
        ++c;
    } else {
        ++counts_->sparse[code_];
    }
    ++tuples_;
    code_ = 0;
    filled_ = 0;
}

void EntropyAccumulator::push(std::span<const Digit> seq) {
    for (const auto d : seq) push(d);
}

EntropyResult EntropyAccumulator::result() const {
    EntropyResult r;
    r.n = n_;
    r.sample_count = tuples_;
    if (tuples_ == 0) return r;
    long double acc = 0.0L;
    auto add = [&](std::uint64_t c) {
        if (c != 0) acc += static_cast<long double>(c) * std::log2(static_cast<long double>(c));
    };
    for (const auto c : counts_->dense) add(c);
    for (const auto& [code, c] : counts_->sparse) add(c);
    const auto t = static_cast<long double>(tuples_);
    const long double h = std::log2(t) - acc / t;
    r.se_bits_per_symbol = static_cast<double>(std::max(0.0L, h) / n_);
    return r;
}

EntropyResult shannon_entropy(std::span<const Digit> seq, unsigned n, std::uint32_t radix) {
    EntropyAccumulator acc(n, radix);
    acc.push(seq);
    return acc.result();
}

}  // namespace pcscrypt::stats
