#pragma once

// Markov model of alert-zone evolution over the power set of cells.
// A state is the membership bitmask itself: bit j set means cell j is in
// the zone. State 0 is the empty zone and 2^n - 1 the full grid.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "alertzone/core/random.hpp"
#include "alertzone/encoding/grid.hpp"

namespace alertzone {

inline constexpr int kExactModelCap = 20;
inline constexpr double kDistanceFloor = 1e-6;

struct StateSpace {
    int n = 0;

    explicit StateSpace(int cells) : n(cells) {
        if (cells < 1 || cells > 62) throw std::invalid_argument("state space supports 1..62 cells");
    }
    [[nodiscard]] std::uint64_t size() const { return std::uint64_t{1} << n; }
    [[nodiscard]] std::uint64_t full() const { return size() - 1; }
    [[nodiscard]] static bool contains(std::uint64_t state, int cell) { return ((state >> cell) & 1U) != 0; }
    [[nodiscard]] static int cardinality(std::uint64_t state) { return std::popcount(state); }
};

/// Row-stochastic matrix in compressed sparse rows. With damping alpha set,
/// every entry reads alpha * q_ij + (1 - alpha) / N without materialising
/// the dense form.
class TransitionMatrix {
public:
    struct Entry {
        std::uint64_t col;
        double value;
    };

    TransitionMatrix(int n, std::vector<std::size_t> row_start, std::vector<Entry> entries,
                     std::optional<double> alpha = std::nullopt)
        : n_(n), row_start_(std::move(row_start)), entries_(std::move(entries)), alpha_(alpha) {
        if (row_start_.size() != size() + 1) throw std::invalid_argument("row index does not match state count");
    }

    [[nodiscard]] int cells() const { return n_; }
    [[nodiscard]] std::uint64_t size() const { return std::uint64_t{1} << n_; }
    [[nodiscard]] std::optional<double> damping() const { return alpha_; }

    /// Non-zero entries of the undamped part of row i, ascending by column.
    [[nodiscard]] std::span<const Entry> sparse_row(std::uint64_t i) const {
        return {entries_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
    }

    [[nodiscard]] double at(std::uint64_t i, std::uint64_t j) const {
        double q = 0.0;
        for (const Entry& e : sparse_row(i)) {
            if (e.col == j) q = e.value;
        }
        if (!alpha_) return q;
        return *alpha_ * q + (1.0 - *alpha_) / static_cast<double>(size());
    }

    [[nodiscard]] std::vector<std::vector<double>> dense() const {
        if (n_ > 12) throw std::invalid_argument("dense view limited to 12 cells");
        std::vector<std::vector<double>> out(size(), std::vector<double>(size(), 0.0));
        for (std::uint64_t i = 0; i < size(); ++i) {
            for (std::uint64_t j = 0; j < size(); ++j) out[i][j] = at(i, j);
        }
        return out;
    }

    /// Row vector times matrix.
    [[nodiscard]] std::vector<double> left_multiply(const std::vector<double>& s) const {
        if (s.size() != size()) throw std::invalid_argument("vector length does not match state count");
        std::vector<double> out(size(), 0.0);
        double mass = 0.0;
        for (std::uint64_t i = 0; i < size(); ++i) {
            if (s[i] == 0.0) continue;
            mass += s[i];
            for (const Entry& e : sparse_row(i)) out[e.col] += s[i] * e.value;
        }
        if (alpha_) {
            const double spread = (1.0 - *alpha_) * mass / static_cast<double>(size());
            for (double& x : out) x = *alpha_ * x + spread;
        }
        return out;
    }

    /// Draws the successor of state i.
    template <class Rng>
    [[nodiscard]] std::uint64_t sample_next(std::uint64_t i, Rng& rng) const {
        if (alpha_ && uniform01(rng) >= *alpha_) return uniform_below(rng, size());
        const auto row = sparse_row(i);
        double u = uniform01(rng);
        for (const Entry& e : row) {
            if (u < e.value) return e.col;
            u -= e.value;
        }
        return row.back().col;  // rounding slack
    }

private:
    int n_;
    std::vector<std::size_t> row_start_;
    std::vector<Entry> entries_;
    std::optional<double> alpha_;
};

namespace detail {

inline void require_exact_size(const Grid& grid, int cap) {
    if (grid.size() > static_cast<std::size_t>(cap)) {
        throw std::invalid_argument("grid of " + std::to_string(grid.size()) + " cells exceeds the exact-model cap of " +
                                    std::to_string(cap));
    }
}

/// Assembles a matrix from per-row raw neighbour weights (indexed by the
/// flipped cell), normalising each row. A row whose weights sum to zero
/// becomes uniform over its neighbours. The full state always wraps to 0.
template <class RowWeights>
TransitionMatrix assemble(int n, RowWeights&& weights_of) {
    const std::uint64_t states = std::uint64_t{1} << n;
    const std::uint64_t full = states - 1;
    std::vector<std::size_t> row_start;
    row_start.reserve(states + 1);
    std::vector<TransitionMatrix::Entry> entries;
    entries.reserve(states * static_cast<std::uint64_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n));
    for (std::uint64_t i = 0; i < states; ++i) {
        row_start.push_back(entries.size());
        if (i == full) {
            entries.push_back({0, 1.0});
            continue;
        }
        weights_of(i, w);
        double total = 0.0;
        for (double x : w) total += x;
        const std::size_t first = entries.size();
        for (int j = 0; j < n; ++j) {
            const double x = total > 0.0 ? w[static_cast<std::size_t>(j)] / total : 1.0 / n;
            if (x > 0.0) entries.push_back({i ^ (std::uint64_t{1} << j), x});
        }
        std::sort(entries.begin() + static_cast<std::ptrdiff_t>(first), entries.end(),
                  [](const auto& a, const auto& b) { return a.col < b.col; });
    }
    row_start.push_back(entries.size());
    return TransitionMatrix(n, std::move(row_start), std::move(entries));
}

inline double distance(double x0, double y0, double x1, double y1) { return std::hypot(x0 - x1, y0 - y1); }

}  // namespace detail

/// Spatially independent model: leaving state i by flipping cell j has raw
/// weight p(v_j); rows are normalised to sum to one.
inline TransitionMatrix build_q_independent(const Grid& grid, int cap = kExactModelCap) {
    detail::require_exact_size(grid, cap);
    const auto p = grid.probabilities();
    return detail::assemble(static_cast<int>(grid.size()), [&](std::uint64_t, std::vector<double>& w) {
        std::copy(p.begin(), p.end(), w.begin());
    });
}

/// Same matrix built by the block recursion W_1 = [[0,p1],[p1,0]],
/// W_m = [[W_{m-1}, p_m I], [p_m I, W_{m-1}]], then the last row replaced
/// by the wrap to state 0 and rows normalised. Dense, so kept to small n.
inline TransitionMatrix build_q_recursive(const Grid& grid) {
    detail::require_exact_size(grid, 12);
    const auto p = grid.probabilities();
    std::vector<std::vector<double>> w{{0.0, p[0]}, {p[0], 0.0}};
    for (std::size_t m = 1; m < p.size(); ++m) {
        const std::size_t half = w.size();
        std::vector<std::vector<double>> next(2 * half, std::vector<double>(2 * half, 0.0));
        for (std::size_t r = 0; r < half; ++r) {
            for (std::size_t c = 0; c < half; ++c) {
                next[r][c] = w[r][c];
                next[r + half][c + half] = w[r][c];
            }
            next[r][r + half] = p[m];
            next[r + half][r] = p[m];
        }
        w = std::move(next);
    }
    const int n = static_cast<int>(p.size());
    return detail::assemble(n, [&](std::uint64_t i, std::vector<double>& out) {
        for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = w[i][i ^ (std::uint64_t{1} << j)];
    });
}

/// Raw spatial weights of the row leaving `state`, by flipped cell.
/// Membership is read through `in`, so the same rule serves bitmask and
/// wide states.
template <class Contains>
void spatial_row_weights(const Grid& grid, Contains&& in, std::size_t members, std::vector<double>& w) {
    const std::size_t n = grid.size();
    if (members == 0) {
        for (std::size_t j = 0; j < n; ++j) w[j] = grid.cell(j).p;
        return;
    }
    double cx = 0.0;
    double cy = 0.0;
    std::size_t only = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (in(j)) {
            cx += grid.cell(j).x;
            cy += grid.cell(j).y;
            only = j;
        }
    }
    cx /= static_cast<double>(members);
    cy /= static_cast<double>(members);
    for (std::size_t j = 0; j < n; ++j) {
        const Cell& c = grid.cell(j);
        if (members == 1 && j == only) {
            w[j] = c.p;  // removing the sole member
        } else {
            w[j] = c.p / std::max(detail::distance(c.x, c.y, cx, cy), kDistanceFloor);
        }
    }
}

/// Spatially dependent model: flipping cell k has raw weight
/// p(v_k) / d(v_k, centroid of the current zone).
inline TransitionMatrix build_q_spatial(const Grid& grid, int cap = kExactModelCap) {
    detail::require_exact_size(grid, cap);
    return detail::assemble(static_cast<int>(grid.size()), [&](std::uint64_t state, std::vector<double>& w) {
        spatial_row_weights(
            grid, [state](std::size_t j) { return StateSpace::contains(state, static_cast<int>(j)); },
            static_cast<std::size_t>(std::popcount(state)), w);
    });
}

/// Every state (except the full one) moves to each of its n neighbours
/// with probability 1/n.
inline TransitionMatrix build_q_uniform(int n) {
    if (n < 1 || n > kExactModelCap) throw std::invalid_argument("uniform model size out of range");
    return detail::assemble(n, [](std::uint64_t, std::vector<double>& w) { std::fill(w.begin(), w.end(), 1.0); });
}

/// alpha * Q + (1 - alpha) * J / N.
inline TransitionMatrix damp(const TransitionMatrix& q, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("damping factor must lie in (0, 1)");
    if (q.damping()) throw std::invalid_argument("matrix is already damped");
    std::vector<std::size_t> row_start;
    std::vector<TransitionMatrix::Entry> entries;
    for (std::uint64_t i = 0; i < q.size(); ++i) {
        row_start.push_back(entries.size());
        for (const auto& e : q.sparse_row(i)) entries.push_back(e);
    }
    row_start.push_back(entries.size());
    return TransitionMatrix(q.cells(), std::move(row_start), std::move(entries), alpha);
}

enum class StationaryMethod { power_iteration, monte_carlo };

struct StationaryDistribution {
    std::vector<double> s;
    StationaryMethod method = StationaryMethod::power_iteration;
    std::uint64_t samples = 0;     // walks, for Monte Carlo
    std::uint64_t iterations = 0;  // for power iteration
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

/// t * Q^m.
inline std::vector<double> marginal_distribution(const TransitionMatrix& q, std::vector<double> t, std::uint64_t m) {
    for (std::uint64_t step = 0; step < m; ++step) t = q.left_multiply(t);
    return t;
}

/// Power iteration from the uniform vector until ||sQ - s||_inf falls
/// below tolerance. Throws ConvergenceError when the iteration cap is hit,
/// which is what a periodic undamped chain does.
inline StationaryDistribution stationary_exact(const TransitionMatrix& q, double tolerance = 1e-13,
                                               std::uint64_t max_iterations = 1000000) {
    if (q.cells() > kExactModelCap) throw std::invalid_argument("exact stationary solve exceeds the state cap");
    StationaryDistribution out;
    out.s.assign(q.size(), 1.0 / static_cast<double>(q.size()));
    for (std::uint64_t it = 1; it <= max_iterations; ++it) {
        std::vector<double> next = q.left_multiply(out.s);
        double total = 0.0;
        for (double x : next) total += x;
        for (double& x : next) x /= total;
        const double residual = max_abs_diff(next, out.s);
        out.s = std::move(next);
        if (residual <= tolerance) {
            out.iterations = it;
            return out;
        }
    }
    throw ConvergenceError("power iteration did not converge; the chain may be periodic (damp it)");
}

enum class WalkStart { empty, uniform };

/// R random walks, each from the start state; every step ends the walk with
/// probability 1 - c, otherwise moves along the current row. The estimate
/// is the fraction of walks ending in each state. Walk r draws from its own
/// stream derived from (rng_seed, r).
inline StationaryDistribution stationary_monte_carlo(const TransitionMatrix& q, std::uint64_t walks, double c,
                                                     std::uint64_t rng_seed, WalkStart start = WalkStart::empty) {
    if (walks < 1) throw std::invalid_argument("need at least one walk");
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("continuation probability must lie in (0, 1)");
    std::vector<std::uint64_t> ends(q.size(), 0);
    for (std::uint64_t r = 0; r < walks; ++r) {
        SplitMix64 rng(derive_seed(rng_seed, {r}));
        std::uint64_t state = start == WalkStart::empty ? 0 : uniform_below(rng, q.size());
        while (uniform01(rng) < c) state = q.sample_next(state, rng);
        ++ends[state];
    }
    StationaryDistribution out;
    out.method = StationaryMethod::monte_carlo;
    out.samples = walks;
    out.s.resize(q.size());
    for (std::size_t i = 0; i < ends.size(); ++i) out.s[i] = static_cast<double>(ends[i]) / static_cast<double>(walks);
    return out;
}

/// m(v_j) = sum of s_i over states i containing cell j.
inline std::vector<double> cell_marginals(const StationaryDistribution& dist, const StateSpace& space) {
    if (dist.s.size() != space.size()) throw std::invalid_argument("distribution length does not match state space");
    std::vector<double> m(static_cast<std::size_t>(space.n), 0.0);
    for (std::uint64_t i = 0; i < dist.s.size(); ++i) {
        for (std::uint64_t rest = i; rest != 0; rest &= rest - 1) {
            m[static_cast<std::size_t>(std::countr_zero(rest))] += dist.s[i];
        }
    }
    for (double& x : m) x = std::clamp(x, 0.0, 1.0);
    return m;
}

/// `state_bitmask<TAB>probability`, bitmask written msb-first over n cells.
inline void write_distribution(std::ostream& out, const StationaryDistribution& dist, const StateSpace& space) {
    const auto precision = out.precision(12);
    for (std::uint64_t i = 0; i < dist.s.size(); ++i) {
        std::string bits(static_cast<std::size_t>(space.n), '0');
        for (int j = 0; j < space.n; ++j) {
            if (StateSpace::contains(i, j)) bits[static_cast<std::size_t>(space.n - 1 - j)] = '1';
        }
        out << bits << '\t' << dist.s[i] << '\n';
    }
    out.precision(precision);
}

/// `cell_id<TAB>probability`.
inline void write_marginals(std::ostream& out, const std::vector<double>& m) {
    const auto precision = out.precision(12);
    for (std::size_t j = 0; j < m.size(); ++j) out << j << '\t' << m[j] << '\n';
    out.precision(precision);
}

}  // namespace alertzone
