#pragma once

// Randomness battery for radix-R symbol sequences (Knuth, TAOCP vol. 2,
// 3.3.2) and n-tuple Shannon entropy.
//
// Conventions:
//  - tuples are non-overlapping: seq[0..n), seq[n..2n), ... ; a trailing
//    partial tuple is ignored;
//  - chi-square p-values are the upper tail Q(df/2, X/2) of the regularized
//    incomplete gamma function;
//  - categories whose expected count is below 5 are merged with their
//    neighbours before the statistic is formed (poker, run, sparse serial).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pcscrypt/error.hpp"

namespace pcscrypt::stats {

using Digit = std::uint16_t;

inline constexpr std::uint32_t kDefaultRadix = 267;
inline constexpr double kMinExpected = 5.0;

struct ChiSquareResult {
    std::string test;
    double statistic = 0.0;
    std::size_t degrees_of_freedom = 0;
    double p_value = 1.0;
    /// Observations (symbols, tuples, hands or runs) behind the statistic.
    std::size_t samples = 0;
    /// Categories after merging.
    std::size_t categories = 0;

    [[nodiscard]] bool passes(double alpha) const noexcept { return p_value >= alpha; }
    /// Subset of {0.05, 0.01} at which the test passes.
    [[nodiscard]] std::vector<double> pass_at() const;
};

/// Upper-tail probability of the chi-square distribution.
[[nodiscard]] double chi_square_sf(double statistic, std::size_t df);
/// x such that chi_square_sf(x, df) = 1 - p.
[[nodiscard]] double chi_square_quantile(double p, std::size_t df);

/// Pearson statistic of `observed` against `expected` counts, df = k - 1.
/// Throws ParameterError on size mismatch or non-positive expectation.
[[nodiscard]] ChiSquareResult chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected,
                                         std::string test = "chi-square");

/// Merges adjacent categories, walking upward, until each has an expected
/// count of at least kMinExpected; a short remainder joins the last group.
/// `probabilities` are per category and scaled by `total`.
[[nodiscard]] ChiSquareResult chi_square_merged(std::span<const std::uint64_t> observed,
                                                std::span<const double> probabilities, std::uint64_t total,
                                                std::string test);

[[nodiscard]] std::vector<std::uint64_t> histogram(std::span<const Digit> seq, std::uint32_t radix = kDefaultRadix);

/// Chi-square over `radix` categories, df = radix - 1. Needs 5*radix symbols.
[[nodiscard]] ChiSquareResult frequency_test(std::span<const Digit> seq, std::uint32_t radix = kDefaultRadix);

/// Non-overlapping n-tuples. With at least 5*radix^n tuples every tuple is
/// its own category; otherwise, for n >= 3 only, tuple codes are grouped
/// into contiguous equal-width ranges with at least 5 expected each.
[[nodiscard]] ChiSquareResult serial_test(std::span<const Digit> seq, unsigned n,
                                          std::uint32_t radix = kDefaultRadix);

/// Probability that a hand of `hand` symbols holds exactly r distinct values,
/// r = 1..hand (index r - 1).
[[nodiscard]] std::vector<double> poker_probabilities(std::uint32_t radix, unsigned hand = 5);

/// Knuth's partition test on hands of 5: category r = distinct values.
[[nodiscard]] ChiSquareResult poker_test(std::span<const Digit> seq, std::uint32_t radix = kDefaultRadix);

/// P(run length >= r) = C(radix, r) / radix^r, r = 1..max_len (index r - 1).
[[nodiscard]] std::vector<double> run_tail_probabilities(std::uint32_t radix, unsigned max_len);

struct RunTestResult {
    ChiSquareResult up;
    ChiSquareResult down;

    [[nodiscard]] bool passes(double alpha) const noexcept { return up.passes(alpha) && down.passes(alpha); }
};

/// Runs up and runs down with the element after each run discarded, so runs
/// are independent. Equal neighbours end a run. The trailing unterminated
/// run is dropped. Needs 5000 symbols.
[[nodiscard]] RunTestResult run_test(std::span<const Digit> seq, std::uint32_t radix = kDefaultRadix);

struct CorrelationResult {
    std::size_t window = 0;
    double mean = 0.0;   ///< -1/(w-1)
    double sigma = 0.0;  ///< sqrt(w(w-3)/(w+1))/(w-1)
    double lower = 0.0;  ///< mean - 2 sigma
    double upper = 0.0;  ///< mean + 2 sigma
    /// coefficients[s - 1] is the coefficient at shift s.
    std::vector<double> coefficients;
    std::vector<std::size_t> out_of_bounds;

    [[nodiscard]] double fraction_in_bounds() const noexcept;
};

/// Correlation coefficient between seq[0..w) and seq[s..s+w).
[[nodiscard]] double correlation_at(std::span<const Digit> seq, std::size_t window, std::size_t shift);

/// Coefficients for shifts 1..max_shift. Needs window + max_shift symbols.
/// Shifts are split across `threads` workers (0 = hardware concurrency).
[[nodiscard]] CorrelationResult serial_correlation(std::span<const Digit> seq, std::size_t window,
                                                   std::size_t max_shift, unsigned threads = 0);

struct EntropyResult {
    unsigned n = 1;
    std::size_t sample_count = 0;  ///< tuples
    double se_bits_per_symbol = 0.0;
};

/// Streaming n-tuple counter. Dense counts up to 2^26 categories, hashed
/// above that.
class EntropyAccumulator {
public:
    EntropyAccumulator(unsigned n, std::uint32_t radix = kDefaultRadix);
    ~EntropyAccumulator();
    EntropyAccumulator(EntropyAccumulator&&) noexcept;
    EntropyAccumulator& operator=(EntropyAccumulator&&) noexcept;

    /// Throws MalformedInputError for a digit >= radix.
    void push(Digit d);
    void push(std::span<const Digit> seq);

    [[nodiscard]] EntropyResult result() const;
    [[nodiscard]] std::size_t tuples() const noexcept { return tuples_; }

private:
    struct Counts;
    unsigned n_;
    std::uint32_t radix_;
    std::uint64_t code_ = 0;
    unsigned filled_ = 0;
    std::size_t tuples_ = 0;
    std::unique_ptr<Counts> counts_;
};

/// SE = -(1/n) sum P log2 P over non-overlapping n-tuples. Zero for an
/// empty input. Throws ParameterError for n = 0 or radix^n beyond 64 bits.
[[nodiscard]] EntropyResult shannon_entropy(std::span<const Digit> seq, unsigned n,
                                            std::uint32_t radix = kDefaultRadix);

}  // namespace pcscrypt::stats
