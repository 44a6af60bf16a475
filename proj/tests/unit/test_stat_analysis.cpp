#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "pcscrypt/stat_analysis.hpp"

using namespace pcscrypt;
using namespace pcscrypt::stats;

namespace {

std::vector<Digit> uniform_digits(std::size_t n, std::uint64_t seed, std::uint32_t radix = 267) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned> d(0, radix - 1);
    std::vector<Digit> v(n);
    for (auto& x : v) x = static_cast<Digit>(d(rng));
    return v;
}

}  // namespace

TEST(ChiSquare, Quantiles) {
    struct Q {
        std::size_t df;
        double q95, q99, sf_at_df;
    };
    const Q table[] = {
        {1, 3.841458820694124, 6.6348966010212145, 0.31731050786291115},
        {2, 5.991464547107979, 9.21034037197618, 0.36787944117144245},
        {10, 18.307038053275146, 23.209251158954356, 0.44049328506521257},
        {100, 124.34211340400407, 135.80672317102676, 0.48119168452795674},
        {266, 305.0413101313109, 322.5790232661725, 0.4884686321483689},
        {71288, 71910.21913257072, 72169.35138195334, 0.49929563841625524},
    };
    for (const auto& q : table) {
        EXPECT_NEAR(chi_square_quantile(0.95, q.df), q.q95, 1e-9 * q.q95) << q.df;
        EXPECT_NEAR(chi_square_quantile(0.99, q.df), q.q99, 1e-9 * q.q99) << q.df;
        EXPECT_NEAR(chi_square_sf(static_cast<double>(q.df), q.df), q.sf_at_df, 1e-10) << q.df;
        EXPECT_NEAR(chi_square_sf(q.q95, q.df), 0.05, 1e-10);
    }
    EXPECT_DOUBLE_EQ(chi_square_sf(0.0, 5), 1.0);
}

TEST(ChiSquare, PearsonStatistic) {
    const std::uint64_t obs[] = {10, 20, 30};
    const double exp[] = {20, 20, 20};
    const auto r = chi_square(obs, exp);
    EXPECT_DOUBLE_EQ(r.statistic, 10.0);
    EXPECT_EQ(r.degrees_of_freedom, 2u);
    EXPECT_NEAR(r.p_value, std::exp(-5.0), 1e-12);
    EXPECT_EQ(r.samples, 60u);

    const double bad_size[] = {1, 2};
    EXPECT_THROW((void)chi_square(obs, bad_size), ParameterError);
    const double zero[] = {0, 30, 30};
    EXPECT_THROW((void)chi_square(obs, zero), ParameterError);
}

TEST(ChiSquare, MergingReachesMinimumExpectation) {
    const std::uint64_t obs[] = {1, 2, 3, 94};
    const double p[] = {0.01, 0.02, 0.03, 0.94};
    const auto r = chi_square_merged(obs, p, 100, "m");
    EXPECT_EQ(r.categories, 2u);
    EXPECT_EQ(r.degrees_of_freedom, 1u);
    EXPECT_NEAR(r.statistic, 0.0, 1e-12);
    const std::uint64_t none[] = {0, 0};
    const double half[] = {0.5, 0.5};
    EXPECT_THROW((void)chi_square_merged(none, half, 0, "m"), InsufficientDataError);
}

TEST(ChiSquare, PassLevels) {
    ChiSquareResult r;
    r.p_value = 0.03;
    EXPECT_EQ(r.pass_at(), std::vector<double>{0.01});
    r.p_value = 0.5;
    EXPECT_EQ(r.pass_at(), (std::vector<double>{0.05, 0.01}));
    r.p_value = 0.001;
    EXPECT_TRUE(r.pass_at().empty());
}

TEST(Frequency, UniformAndDegenerate) {
    const auto u = uniform_digits(300000, 1);
    const auto r = frequency_test(u);
    EXPECT_EQ(r.degrees_of_freedom, 266u);
    EXPECT_GT(r.p_value, 0.001);
    std::vector<Digit> constant(300000, 7);
    EXPECT_LT(frequency_test(constant).p_value, 1e-12);
    EXPECT_THROW((void)frequency_test(std::vector<Digit>(100, 1)), InsufficientDataError);
    const auto h = histogram(std::vector<Digit>{0, 0, 266});
    EXPECT_EQ(h[0], 2u);
    EXPECT_EQ(h[266], 1u);
}

TEST(Serial, PairsOnSmallRadix) {
    const auto u = uniform_digits(200000, 2, 10);
    const auto r = serial_test(u, 2, 10);
    EXPECT_EQ(r.degrees_of_freedom, 99u);
    EXPECT_EQ(r.samples, 100000u);
    EXPECT_GT(r.p_value, 0.001);
    std::vector<Digit> alternating(200000);
    for (std::size_t i = 0; i < alternating.size(); ++i) alternating[i] = static_cast<Digit>(i % 10);
    EXPECT_LT(serial_test(alternating, 2, 10).p_value, 1e-12);
}

TEST(Serial, SparseTriplesOnlyForLargeN) {
    const auto u = uniform_digits(300000, 3);
    EXPECT_THROW((void)serial_test(u, 2), InsufficientDataError);
    const auto r = serial_test(u, 3);
    EXPECT_EQ(r.test, "serial3-sparse");
    EXPECT_GT(r.p_value, 0.001);
}

TEST(Poker, ProbabilitiesAtRadix267) {
    const auto p = poker_probabilities(267);
    ASSERT_EQ(p.size(), 5u);
    EXPECT_NEAR(p[0], 1.9676821891563737e-10, 1e-22);
    EXPECT_NEAR(p[1], 7.851051934733932e-07, 1e-18);
    EXPECT_NEAR(p[2], 0.000346754793784082, 1e-15);
    EXPECT_NEAR(p[3], 0.03661730622359906, 1e-14);
    EXPECT_NEAR(p[4], 0.9630351536806552, 1e-14);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-14);
    const auto two = poker_probabilities(2);
    EXPECT_NEAR(two[0], 2.0 / 32.0, 1e-15);
    EXPECT_NEAR(two[1], 30.0 / 32.0, 1e-15);
    EXPECT_EQ(two[2], 0.0);
}

TEST(Poker, UniformAndDegenerate) {
    const auto r = poker_test(uniform_digits(500000, 4));
    EXPECT_GT(r.p_value, 0.001);
    std::vector<Digit> rep(500000);
    for (std::size_t i = 0; i < rep.size(); ++i) rep[i] = static_cast<Digit>((i / 5) % 267);
    EXPECT_LT(poker_test(rep).p_value, 1e-12);
}

TEST(Runs, TailProbabilities) {
    const double expect[] = {1.0, 0.49812734082397003, 0.1647986832938228, 0.04073675317375395,
                             0.008025292947338792, 0.001312501093759528, 0.00018328666959402718};
    const auto p = run_tail_probabilities(267, 7);
    ASSERT_EQ(p.size(), 7u);
    for (int i = 0; i < 7; ++i) EXPECT_NEAR(p[i], expect[i], 1e-15 * (1 + expect[i])) << i;
}

TEST(Runs, UniformAndDegenerate) {
    const auto r = run_test(uniform_digits(100000, 5));
    EXPECT_GT(r.up.p_value, 0.001);
    EXPECT_GT(r.down.p_value, 0.001);
    std::vector<Digit> ramp(100000);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<Digit>(i % 267);
    EXPECT_FALSE(run_test(ramp).passes(0.01));
    EXPECT_THROW((void)run_test(std::vector<Digit>(100, 1)), InsufficientDataError);
    EXPECT_FALSE(run_test(std::vector<Digit>(6000, 1)).passes(0.01));
}

TEST(Correlation, BoundsForWindow25000) {
    const auto u = uniform_digits(25000 + 200, 6);
    const auto r = serial_correlation(u, 25000, 200, 2);
    EXPECT_NEAR(r.mean, -4.0001600064e-05, 1e-15);
    EXPECT_NEAR(r.sigma, 0.0063243023280034425, 1e-15);
    EXPECT_NEAR(r.lower, r.mean - 2 * r.sigma, 1e-15);
    ASSERT_EQ(r.coefficients.size(), 200u);
    EXPECT_GT(r.fraction_in_bounds(), 0.9);
}

TEST(Correlation, KnownShapes) {
    std::vector<Digit> period(2000);
    for (std::size_t i = 0; i < period.size(); ++i) period[i] = static_cast<Digit>((i % 4) * 50);
    EXPECT_NEAR(correlation_at(period, 1000, 4), 1.0, 1e-12);
    EXPECT_NEAR(correlation_at(period, 1000, 2), -0.6, 1e-12);
    std::vector<Digit> flat(2000, 3);
    EXPECT_TRUE(std::isnan(correlation_at(flat, 1000, 1)));
    const auto r = serial_correlation(flat, 1000, 10, 1);
    EXPECT_EQ(r.out_of_bounds.size(), 10u);
}

TEST(Correlation, ThreadCountDoesNotChangeResult) {
    const auto u = uniform_digits(3000, 7);
    const auto a = serial_correlation(u, 2000, 500, 1);
    const auto b = serial_correlation(u, 2000, 500, 3);
    EXPECT_EQ(a.coefficients, b.coefficients);
}

TEST(Entropy, TrivialCases) {
    std::vector<Digit> alt(10000);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = static_cast<Digit>(i % 2 ? 80 : 261);
    EXPECT_NEAR(shannon_entropy(alt, 1).se_bits_per_symbol, 1.0, 1e-12);
    EXPECT_NEAR(shannon_entropy(alt, 2).se_bits_per_symbol, 0.0, 1e-12);
    EXPECT_NEAR(shannon_entropy(std::vector<Digit>(100, 3), 1).se_bits_per_symbol, 0.0, 1e-12);
    EXPECT_EQ(shannon_entropy({}, 1).sample_count, 0u);
    const auto r = shannon_entropy(alt, 3);
    EXPECT_EQ(r.sample_count, 3333u);
    EXPECT_THROW((void)shannon_entropy(alt, 0), ParameterError);
}

TEST(Entropy, UniformApproachesLog2Radix) {
    const auto u = uniform_digits(3000000, 8);
    const double se1 = shannon_entropy(u, 1).se_bits_per_symbol;
    EXPECT_LT(se1, 8.060695931687555);
    EXPECT_GT(se1, 8.05);
}

TEST(Entropy, AccumulatorMatchesBatch) {
    const auto u = uniform_digits(90001, 9);
    for (unsigned n : {1u, 2u, 3u, 4u}) {
        EntropyAccumulator acc(n);
        for (std::size_t i = 0; i < u.size(); i += 1000) {
            acc.push(std::span(u).subspan(i, std::min<std::size_t>(1000, u.size() - i)));
        }
        const auto a = acc.result();
        const auto b = shannon_entropy(u, n);
        EXPECT_EQ(a.sample_count, b.sample_count);
        EXPECT_DOUBLE_EQ(a.se_bits_per_symbol, b.se_bits_per_symbol) << n;
    }
    EntropyAccumulator acc(1);
    EXPECT_THROW(acc.push(Digit{267}), MalformedInputError);
}
