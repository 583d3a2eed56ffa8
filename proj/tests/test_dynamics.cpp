#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "alertzone/dynamics/lazy_chain.hpp"
#include "alertzone/dynamics/markov.hpp"
#include "oracles.hpp"

using namespace alertzone;

namespace {

Grid two_cells() { return Grid::lattice(2, {0.2, 0.8}); }

Grid random_grid(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(n);
    for (auto& x : p) x = u(rng);
    return Grid::lattice(n, p);
}

void expect_matrix_near(const std::vector<std::vector<double>>& got, const std::vector<std::vector<double>>& want,
                        double tol) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        for (std::size_t j = 0; j < got.size(); ++j) EXPECT_NEAR(got[i][j], want[i][j], tol) << i << "," << j;
    }
}

void expect_vector_near(const std::vector<double>& got, const std::vector<double>& want, double tol) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << i;
}

void expect_stochastic(const TransitionMatrix& q) {
    for (std::uint64_t i = 0; i < q.size(); ++i) {
        double sum = 0.0;
        for (std::uint64_t j = 0; j < q.size(); ++j) sum += q.at(i, j);
        ASSERT_NEAR(sum, 1.0, 1e-12) << "row " << i;
    }
}

void expect_neighbour_sparsity(const TransitionMatrix& q) {
    const std::uint64_t full = q.size() - 1;
    for (std::uint64_t i = 0; i < q.size(); ++i) {
        for (std::uint64_t j = 0; j < q.size(); ++j) {
            if (q.at(i, j) == 0.0) continue;
            if (i == full) {
                ASSERT_EQ(j, 0U);
            } else {
                ASSERT_EQ(std::abs(std::popcount(i) - std::popcount(j)), 1) << i << "->" << j;
            }
        }
    }
}

}  // namespace

TEST(StateSpace, Basics) {
    const StateSpace s(3);
    EXPECT_EQ(s.size(), 8U);
    EXPECT_EQ(s.full(), 7U);
    EXPECT_TRUE(StateSpace::contains(5, 2));
    EXPECT_EQ(StateSpace::cardinality(6), 2);
    EXPECT_THROW(StateSpace(0), std::invalid_argument);
}

TEST(Independent, TwoCellExample) {
    const auto q = build_q_independent(two_cells());
    expect_matrix_near(q.dense(), {{0, .2, .8, 0}, {.2, 0, 0, .8}, {.8, 0, 0, .2}, {1, 0, 0, 0}}, 1e-15);
}

TEST(Independent, OneCellIsAForcedCycle) {
    expect_matrix_near(build_q_independent(Grid::lattice(1, {0.3})).dense(), {{0, 1}, {1, 0}}, 0.0);
}

TEST(Independent, ThreeCellBlockStructure) {
    const Grid g = Grid::lattice(3, {0.1, 0.3, 0.5});
    const auto q = build_q_recursive(g);
    const auto d = q.dense();
    // unnormalised W_2 in the top-left block, p3 * I off the diagonal; each
    // non-wrap row is scaled by 1 / (p1 + p2 + p3)
    const double z = 0.9;
    const std::vector<std::vector<double>> w2{{0, .1, .3, 0}, {.1, 0, 0, .3}, {.3, 0, 0, .1}, {0, .3, .1, 0}};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_NEAR(d[i][j], w2[i][j] / z, 1e-15);
            EXPECT_NEAR(d[i][j + 4], i == j ? 0.5 / z : 0.0, 1e-15);
            if (i + 4 != 7) { EXPECT_NEAR(d[i + 4][j], i == j ? 0.5 / z : 0.0, 1e-15); }
        }
    }
    EXPECT_EQ(d[7][0], 1.0);
}

TEST(Independent, RecursiveEqualsDirect) {
    for (std::size_t n = 1; n <= 8; ++n) {
        const Grid g = random_grid(n, n);
        EXPECT_EQ(build_q_recursive(g).dense(), build_q_independent(g).dense()) << n;
    }
}

TEST(Matrices, RowSumsAndSparsity) {
    for (std::size_t n = 1; n <= 8; ++n) {
        const Grid g = random_grid(n, 40 + n);
        for (const auto& q : {build_q_independent(g), build_q_spatial(g), build_q_uniform(static_cast<int>(n))}) {
            expect_stochastic(q);
            expect_neighbour_sparsity(q);
        }
        expect_stochastic(damp(build_q_spatial(g), 0.85));
    }
}

TEST(Matrices, ZeroProbabilityRowsFallBackToUniform) {
    const auto q = build_q_independent(Grid::lattice(2, {0.0, 0.0}));
    EXPECT_EQ(q.at(0, 1), 0.5);
    EXPECT_EQ(q.at(0, 2), 0.5);
}

TEST(Matrices, SizeCap) {
    EXPECT_THROW(build_q_independent(Grid::lattice(21)), std::invalid_argument);
    EXPECT_THROW(build_q_spatial(Grid::lattice(5), 4), std::invalid_argument);
    EXPECT_THROW(build_q_uniform(0), std::invalid_argument);
}

TEST(Spatial, ThreeCellRow) {
    const Grid g = Grid::lattice(3, {0.2, 0.5, 0.7});
    const auto q = build_q_spatial(g);
    const std::uint64_t state = 0b011;
    const double cx = (g.cell(0).x + g.cell(1).x) / 2;
    const double cy = (g.cell(0).y + g.cell(1).y) / 2;
    std::vector<double> w(3);
    for (std::size_t k = 0; k < 3; ++k) w[k] = g.cell(k).p / std::hypot(g.cell(k).x - cx, g.cell(k).y - cy);
    const double beta = 1.0 / (w[0] + w[1] + w[2]);
    EXPECT_NEAR(q.at(state, 0b010), w[0] * beta, 1e-15);
    EXPECT_NEAR(q.at(state, 0b001), w[1] * beta, 1e-15);
    EXPECT_NEAR(q.at(state, 0b111), w[2] * beta, 1e-15);
    int nonzero = 0;
    for (std::uint64_t j = 0; j < 8; ++j) nonzero += q.at(state, j) != 0.0;
    EXPECT_EQ(nonzero, 3);
}

TEST(Spatial, SingleCellAndEmptyRows) {
    const Grid g = Grid::lattice(3, {0.2, 0.5, 0.7});
    const auto q = build_q_spatial(g);
    // {v1}: removal weight p1, additions p_k / d(v_k, v1)
    const double w0 = 0.2;
    const double w1 = 0.5 / std::hypot(g.cell(1).x - g.cell(0).x, g.cell(1).y - g.cell(0).y);
    const double w2 = 0.7 / std::hypot(g.cell(2).x - g.cell(0).x, g.cell(2).y - g.cell(0).y);
    const double z = w0 + w1 + w2;
    EXPECT_NEAR(q.at(0b001, 0b000), w0 / z, 1e-15);
    EXPECT_NEAR(q.at(0b001, 0b011), w1 / z, 1e-15);
    EXPECT_NEAR(q.at(0b001, 0b101), w2 / z, 1e-15);
    EXPECT_NEAR(q.at(0, 0b100), 0.7 / 1.4, 1e-15);
}

TEST(Spatial, SymmetricCellsGiveUniformRow) {
    // 2x2 lattice: {v0, v3} has its centroid at the centre, equidistant
    // from all four cells
    const auto q = build_q_spatial(Grid::lattice(4, std::vector<double>(4, 0.5)));
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(q.at(0b1001, 0b1001 ^ (1U << k)), 0.25, 1e-15);
}

TEST(Spatial, CoincidentCentroidIsFloored) {
    // three cells in a row; {v0, v2} has its centroid on v1
    const Grid g(std::vector<Cell>{{0, 0.1, 0.5, 0.5}, {1, 0.5, 0.5, 0.5}, {2, 0.9, 0.5, 0.5}});
    const auto q = build_q_spatial(g);
    EXPECT_GT(q.at(0b101, 0b111), 0.999);
}

TEST(Damp, TwoCellExample) {
    const auto o = damp(build_q_independent(two_cells()), 0.85);
    expect_matrix_near(o.dense(),
                       {{.0375, .2075, .7175, .0375},
                        {.2075, .0375, .0375, .7175},
                        {.7175, .0375, .0375, .2075},
                        {.8875, .0375, .0375, .0375}},
                       1e-15);
}

TEST(Damp, OneCellAndErrors) {
    const auto q = build_q_independent(Grid::lattice(1, {0.4}));
    expect_matrix_near(damp(q, 0.85).dense(), {{.075, .925}, {.925, .075}}, 1e-15);
    expect_matrix_near(damp(q, 1.0 - 1e-12).dense(), q.dense(), 1e-11);
    EXPECT_THROW(damp(q, 0.0), std::invalid_argument);
    EXPECT_THROW(damp(q, 1.0), std::invalid_argument);
    EXPECT_THROW(damp(damp(q, 0.5), 0.5), std::invalid_argument);
    for (const auto& row : damp(build_q_spatial(random_grid(5, 2)), 0.9).dense()) {
        for (double x : row) EXPECT_GT(x, 0.0);
    }
}

TEST(Stationary, TwoCellExamples) {
    const auto q = build_q_independent(two_cells());
    expect_vector_near(stationary_exact(q).s, {0.4310, 0.0862, 0.3448, 0.1379}, 5e-5);
    const auto o = damp(q, 0.85);
    expect_vector_near(stationary_exact(o).s, {0.4111, 0.1074, 0.3171, 0.1644}, 5e-5);
    expect_vector_near(marginal_distribution(o, {.25, .25, .25, .25}, 50), {0.4111, 0.1074, 0.3171, 0.1644}, 1e-4);
}

TEST(Stationary, MatchesLinearSolveAndResidual) {
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto o = damp(build_q_spatial(random_grid(n, 70 + n)), 0.85);
        const auto s = stationary_exact(o).s;
        expect_vector_near(s, oracle::stationary_dense(o.dense()), 1e-10);
        EXPECT_LE(max_abs_diff(o.left_multiply(s), s), 1e-9);
        double total = 0.0;
        for (double x : s) {
            EXPECT_GE(x, 0.0);
            total += x;
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(Stationary, UniqueFromRandomStarts) {
    std::mt19937_64 rng(5);
    for (std::size_t n : {3U, 6U, 8U}) {
        const auto o = damp(build_q_independent(random_grid(n, n)), 0.85);
        const auto reference = stationary_exact(o).s;
        for (int start = 0; start < 10; ++start) {
            std::vector<double> t(o.size());
            double total = 0.0;
            for (auto& x : t) total += x = static_cast<double>(rng() % 1000 + 1);
            for (auto& x : t) x /= total;
            std::vector<double> prev;
            for (int it = 0; it < 2000 && (prev.empty() || max_abs_diff(prev, t) > 1e-14); ++it) {
                prev = t;
                t = o.left_multiply(t);
            }
            expect_vector_near(t, reference, 1e-8);
        }
    }
}

TEST(Stationary, PeriodicChainDoesNotConverge) {
    // 0 -> 1 -> 3 -> 0 with 2 draining into 0: period three, and the uniform
    // start is not stationary.
    const TransitionMatrix q(2, {0, 1, 2, 3, 4}, {{1, 1.0}, {3, 1.0}, {0, 1.0}, {0, 1.0}});
    EXPECT_THROW(stationary_exact(q, 1e-13, 5000), ConvergenceError);
    EXPECT_NO_THROW(stationary_exact(damp(q, 0.85)));
}

TEST(MonteCarlo, MatchesTerminatingWalkLaw) {
    const auto o = damp(build_q_independent(two_cells()), 0.85);
    const auto mc = stationary_monte_carlo(o, 200000, 0.6, 11);
    EXPECT_EQ(mc.samples, 200000U);
    EXPECT_EQ(mc.method, StationaryMethod::monte_carlo);
    expect_vector_near(mc.s, oracle::terminating_walk_law(o.dense(), 0.6, {1, 0, 0, 0}), 0.005);

    const auto spread = stationary_monte_carlo(o, 200000, 0.6, 12, WalkStart::uniform);
    expect_vector_near(spread.s, oracle::terminating_walk_law(o.dense(), 0.6, {.25, .25, .25, .25}), 0.005);
}

TEST(MonteCarlo, LongWalksApproachStationary) {
    const auto o = damp(build_q_spatial(random_grid(3, 9)), 0.85);
    const auto exact = stationary_exact(o).s;
    const auto mc = stationary_monte_carlo(o, 100000, 0.98, 3);
    // the law of the end state differs from s by at most c^m mixing terms;
    // compare against its exact value, and check it sits near s.
    expect_vector_near(mc.s, oracle::terminating_walk_law(o.dense(), 0.98, std::vector<double>{1, 0, 0, 0, 0, 0, 0, 0}),
                       0.006);
    expect_vector_near(mc.s, exact, 0.03);
}

TEST(MonteCarlo, OneWalkIsOneHotAndSeedsAreDeterministic) {
    const auto o = damp(build_q_independent(two_cells()), 0.85);
    const auto one = stationary_monte_carlo(o, 1, 0.6, 4);
    int hot = 0;
    for (double x : one.s) hot += x == 1.0;
    EXPECT_EQ(hot, 1);
    EXPECT_EQ(stationary_monte_carlo(o, 5000, 0.6, 9).s, stationary_monte_carlo(o, 5000, 0.6, 9).s);
    EXPECT_THROW(stationary_monte_carlo(o, 0, 0.6, 1), std::invalid_argument);
    EXPECT_THROW(stationary_monte_carlo(o, 10, 1.0, 1), std::invalid_argument);
}

TEST(MonteCarlo, SeedsAgreeWithinBinomialError) {
    const auto o = damp(build_q_spatial(random_grid(3, 1)), 0.85);
    const std::uint64_t r = 100000;
    const auto a = stationary_monte_carlo(o, r, 0.6, 100).s;
    const auto b = stationary_monte_carlo(o, r, 0.6, 200).s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double p = (a[i] + b[i]) / 2;
        const double se = std::sqrt(2.0 * p * (1 - p) / static_cast<double>(r));
        EXPECT_LE(std::abs(a[i] - b[i]), 3.0 * se + 1e-12) << i;
    }
}

TEST(Marginals, Examples) {
    const StateSpace space(2);
    StationaryDistribution s;
    s.s = {0.4310, 0.0862, 0.3448, 0.1379};
    expect_vector_near(cell_marginals(s, space), {0.2241, 0.4827}, 1e-12);
    s.s = {0.25, 0.25, 0.25, 0.25};
    expect_vector_near(cell_marginals(s, space), {0.5, 0.5}, 1e-15);
    s.s = {1, 0, 0, 0};
    expect_vector_near(cell_marginals(s, space), {0, 0}, 0.0);
    s.s = {1};
    EXPECT_THROW(cell_marginals(s, space), std::invalid_argument);
}

TEST(Dump, Formats) {
    StationaryDistribution s;
    s.s = {0.5, 0.25, 0.125, 0.125};
    std::ostringstream out;
    write_distribution(out, s, StateSpace(2));
    EXPECT_EQ(out.str(), "00\t0.5\n01\t0.25\n10\t0.125\n11\t0.125\n");
    std::ostringstream m;
    write_marginals(m, {0.25, 0.75});
    EXPECT_EQ(m.str(), "0\t0.25\n1\t0.75\n");
}

TEST(LazyChain, IndependentRowsMatchExactMatrix) {
    // Empirical one-step transition frequencies from a fixed state agree with
    // the exact row.
    const Grid g = random_grid(4, 13);
    for (RowModel model : {RowModel::independent, RowModel::spatial, RowModel::uniform}) {
        const LazyChain chain(g, model);
        const auto q = model == RowModel::independent ? build_q_independent(g)
                       : model == RowModel::spatial   ? build_q_spatial(g)
                                                      : build_q_uniform(4);
        for (std::uint64_t from : {0U, 1U, 6U, 15U}) {
            std::vector<double> freq(16, 0.0);
            SplitMix64 rng(from + 1);
            const int draws = 40000;
            for (int d = 0; d < draws; ++d) {
                ZoneState s(4);
                for (int j = 0; j < 4; ++j) s.set(static_cast<std::size_t>(j), StateSpace::contains(from, j));
                chain.step(s, rng);
                std::uint64_t to = 0;
                for (int j = 0; j < 4; ++j) to |= static_cast<std::uint64_t>(s.contains(static_cast<std::size_t>(j))) << j;
                freq[to] += 1.0 / draws;
            }
            for (std::uint64_t to = 0; to < 16; ++to) ASSERT_NEAR(freq[to], q.at(from, to), 0.01) << from << "->" << to;
        }
    }
}

TEST(LazyChain, MarginalsMatchExactWalkLaw) {
    const Grid g = random_grid(4, 21);
    const LazyChain chain(g, RowModel::independent, 0.85);
    ZoneState start(4);
    start.set(1, true);
    start.set(2, true);
    const auto m = monte_carlo_marginals(chain, start, 100000, 0.6, 5);
    std::vector<double> t(16, 0.0);
    t[0b0110] = 1.0;
    StationaryDistribution law;
    law.s = oracle::terminating_walk_law(damp(build_q_independent(g), 0.85).dense(), 0.6, t);
    expect_vector_near(m, cell_marginals(law, StateSpace(4)), 0.006);
}

TEST(LazyChain, ZoneStateBookkeeping) {
    ZoneState s(5);
    s.flip(3);
    s.flip(0);
    EXPECT_EQ(s.members(), 2U);
    EXPECT_EQ(s.member_ids(), (std::vector<std::uint32_t>{0, 3}));
    for (std::size_t j = 0; j < 5; ++j) s.set(j, true);
    EXPECT_TRUE(s.full());
    const LazyChain chain(Grid::lattice(5), RowModel::uniform);
    SplitMix64 rng(1);
    chain.step(s, rng);
    EXPECT_TRUE(s.empty());
    EXPECT_THROW(LazyChain(Grid::lattice(5), RowModel::uniform, 0.0), std::invalid_argument);
}
