#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "alertzone/encoding/baselines.hpp"
#include "alertzone/encoding/optimizers.hpp"
#include "oracles.hpp"

using namespace alertzone;

namespace {

Grid random_grid(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(n);
    for (auto& x : p) x = u(rng);
    return Grid::lattice(n, p);
}

void expect_valid(const GridEncoding& e, std::size_t n) {
    const int k = codeword_width_for(n);
    ASSERT_EQ(e.width(), k);
    ASSERT_EQ(e.cell_count(), n);
    ASSERT_EQ(e.dummy_count(), (std::size_t{1} << k) - n);
    for (std::size_t c = 0; c < n; ++c) ASSERT_EQ(e.cell_at(e.codeword(c).bits), c);
}

}  // namespace

TEST(RankMatching, MaximisesPairingSumExhaustive) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t len = 1 + trial % 7;
        std::vector<double> a(len), b(len);
        for (auto& x : a) x = u(rng);
        for (auto& x : b) x = u(rng);
        const auto match = rank_matching(a, b);
        double sum = 0.0;
        for (std::size_t i = 0; i < len; ++i) sum += a[i] * b[static_cast<std::size_t>(match[i])];
        ASSERT_NEAR(sum, oracle::best_pairing_sum(a, b), 1e-12);
    }
}

TEST(GrayOptimizer, TwoCells) {
    const GridEncoding e = gray_optimizer(Grid::lattice(2, {0.9, 0.1}));
    EXPECT_EQ(e.codeword(0).to_string(), "0");
    EXPECT_EQ(e.codeword(1).to_string(), "1");
}

TEST(GrayOptimizer, StageOptimalAtWidthThree) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Grid g = random_grid(8, seed);
        const GridEncoding e = gray_optimizer(g);
        EXPECT_EQ(e.codeword(most_probable_cell(g)).bits, 0U);
        for (const auto& s : oracle::stage_optimality(g, e, 0)) {
            ASSERT_GE(s.achieved, s.best - 1e-12) << "seed " << seed << " stage " << s.stage;
        }
    }
}

TEST(GrayOptimizer, StageOptimalWithDummiesAndOtherSeedIndex) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Grid g = random_grid(6, seed + 100);
        GoOptions options;
        options.seed_index = 5;
        const GridEncoding e = gray_optimizer(g, options);
        for (const auto& s : oracle::stage_optimality(g, e, 5)) ASSERT_GE(s.achieved, s.best - 1e-12);
    }
}

TEST(GrayOptimizer, OperationCountClosedForm) {
    for (std::size_t n : {4U, 8U, 16U, 32U}) {
        OpCounter counter;
        gray_optimizer(random_grid(n, n), {}, &counter);
        const auto expected = static_cast<std::uint64_t>(
            std::llround(std::pow(static_cast<double>(n), std::log2(3.0)) - 2.0 * static_cast<double>(n) + 1.0));
        EXPECT_EQ(counter.multiplications, expected) << "n=" << n;
    }
    OpCounter sixteen;
    gray_optimizer(random_grid(16, 1), {}, &sixteen);
    EXPECT_EQ(sixteen.multiplications, 50U);
}

TEST(GrayOptimizer, Errors) {
    const Grid g = random_grid(8, 1);
    GoOptions bad_depth;
    bad_depth.depth = 4;
    EXPECT_THROW(gray_optimizer(g, bad_depth), std::invalid_argument);
    GoOptions bad_cell;
    bad_cell.seed_cell = 8;
    EXPECT_THROW(gray_optimizer(g, bad_cell), std::out_of_range);
    GoOptions bad_index;
    bad_index.seed_index = 8;
    EXPECT_THROW(gray_optimizer(g, bad_index), std::out_of_range);

    PartialEncoding state(g);
    state.assign(0, 3);
    EXPECT_THROW(state.assign(1, 3), std::invalid_argument);
    EXPECT_THROW(state.gray_pass(4, 1), std::invalid_argument);
}

TEST(GrayOptimizer, PartialDepthFillsTheRestFromTheSeed) {
    const Grid g = random_grid(32, 9);
    GoOptions options;
    options.depth = 2;
    options.rng_seed = 17;
    const GridEncoding a = gray_optimizer(g, options);
    expect_valid(a, 32);
    EXPECT_EQ(a, gray_optimizer(g, options));
    options.rng_seed = 18;
    EXPECT_NE(a, gray_optimizer(g, options));
    // the two placed rings agree with full-depth GO
    const GridEncoding full = gray_optimizer(g);
    for (std::size_t c = 0; c < 32; ++c) {
        if (std::popcount(full.codeword(c).bits) <= 2) { EXPECT_EQ(a.codeword(c), full.codeword(c)); }
    }
}

TEST(Msgo, FullDepthForcedSeedEqualsGo) {
    for (std::size_t n : {5U, 8U, 16U, 29U, 64U}) {
        const Grid g = random_grid(n, n + 3);
        const int k = codeword_width_for(n);
        EXPECT_EQ(msgo(g, k, 99, 0U), gray_optimizer(g)) << "n=" << n;
    }
}

TEST(Msgo, NonPowerOfTwoAndDeterminism) {
    const Grid g = random_grid(5, 2);
    for (int depth = 1; depth <= 3; ++depth) {
        const GridEncoding e = msgo(g, depth, 4);
        expect_valid(e, 5);
        EXPECT_EQ(e.dummy_count(), 3U);
        EXPECT_EQ(e, msgo(g, depth, 4));
    }
    EXPECT_THROW(msgo(g, 0, 1), std::invalid_argument);
}

TEST(Sgo, FourCellExample) {
    const Grid g = Grid::lattice(4, {0.9, 0.5, 0.4, 0.1});
    const GridEncoding e = sgo(g);
    EXPECT_EQ(e.codeword(0).to_string(), "00");
    EXPECT_EQ(e.codeword(1).to_string(), "01");
    EXPECT_EQ(e.codeword(2).to_string(), "10");
    EXPECT_EQ(e.codeword(3).to_string(), "11");

    // Exhaustive: the sum over all complete cycles of their probability is
    // maximal among all 24 encodings.
    auto objective = [&](const std::vector<std::uint32_t>& fwd) {
        double p_at[4];
        for (std::size_t c = 0; c < 4; ++c) p_at[fwd[c]] = g.cell(c).p;
        double total = 0.0;
        for (std::uint32_t care = 0; care < 3; ++care) {  // one- and two-star patterns
            for (std::uint32_t value = 0; value < 4; ++value) {
                if ((value & ~care) != 0) continue;
                double prod = 1.0;
                for (std::uint32_t x = 0; x < 4; ++x) {
                    if ((x & care) == value) prod *= p_at[x];
                }
                total += prod;
            }
        }
        return total;
    };
    std::vector<std::uint32_t> perm{0, 1, 2, 3};
    double best = 0.0;
    do best = std::max(best, objective(perm));
    while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NEAR(objective(e.forward()), best, 1e-12);
}

TEST(Sgo, UniformProbabilitiesStillBijective) {
    expect_valid(sgo(Grid::lattice(37, std::vector<double>(37, 0.5))), 37);
}

TEST(Optimizers, AlwaysValidBijections) {
    for (std::size_t n = 2; n <= 64; ++n) {
        const Grid g = random_grid(n, n * 7);
        const int k = codeword_width_for(n);
        expect_valid(gray_optimizer(g), n);
        expect_valid(msgo(g, std::max(1, k / 2), n), n);
        expect_valid(sgo(g), n);
        expect_valid(random_baseline(g, n), n);
    }
    for (std::size_t n : {100U, 1024U}) {
        const Grid g = random_grid(n, n);
        expect_valid(gray_optimizer(g), n);
        expect_valid(msgo(g, 4, 5), n);
        expect_valid(sgo(g), n);
        EXPECT_EQ(sgo(g), sgo(g));
        EXPECT_EQ(msgo(g, 4, 5), msgo(g, 4, 5));
    }
}

TEST(Optimizers, ZeroProbabilityCellsBehaveLikeDummies) {
    std::vector<double> p(12, 0.0);
    p[3] = 0.7;
    p[9] = 0.2;
    const Grid g = Grid::lattice(12, p);
    const GridEncoding e = gray_optimizer(g);
    expect_valid(e, 12);
    EXPECT_EQ(e.codeword(3).bits, 0U);
    EXPECT_EQ(std::popcount(e.codeword(9).bits), 1);
}
