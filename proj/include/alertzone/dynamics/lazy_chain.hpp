#pragma once

// Transition rows generated on demand for grids too large to enumerate.
// A zone is a membership vector; only walks are supported, not exact solves.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "alertzone/core/random.hpp"
#include "alertzone/dynamics/markov.hpp"
#include "alertzone/encoding/grid.hpp"

namespace alertzone {

enum class RowModel { uniform, independent, spatial };

class ZoneState {
public:
    explicit ZoneState(std::size_t n) : in_(n, 0) {}

    [[nodiscard]] std::size_t cells() const { return in_.size(); }
    [[nodiscard]] std::size_t members() const { return count_; }
    [[nodiscard]] bool contains(std::size_t j) const { return in_[j] != 0; }
    [[nodiscard]] bool full() const { return count_ == in_.size(); }
    [[nodiscard]] bool empty() const { return count_ == 0; }

    void flip(std::size_t j) {
        if (in_[j]) --count_;
        else ++count_;
        in_[j] ^= 1;
    }
    void clear() {
        std::fill(in_.begin(), in_.end(), 0);
        count_ = 0;
    }
    void set(std::size_t j, bool value) {
        if (contains(j) != value) flip(j);
    }

    [[nodiscard]] std::vector<std::uint32_t> member_ids() const {
        std::vector<std::uint32_t> out;
        out.reserve(count_);
        for (std::size_t j = 0; j < in_.size(); ++j) {
            if (in_[j]) out.push_back(static_cast<std::uint32_t>(j));
        }
        return out;
    }

    friend bool operator==(const ZoneState&, const ZoneState&) = default;

private:
    std::vector<std::uint8_t> in_;
    std::size_t count_ = 0;
};

class LazyChain {
public:
    /// alpha = 1 means undamped.
    LazyChain(Grid grid, RowModel model, double alpha = 1.0) : grid_(std::move(grid)), model_(model), alpha_(alpha) {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("damping factor must lie in (0, 1]");
        cumulative_.resize(grid_.size());
        double total = 0.0;
        for (std::size_t j = 0; j < grid_.size(); ++j) {
            total += grid_.cell(j).p;
            cumulative_[j] = total;
        }
        weights_.resize(grid_.size());
    }

    [[nodiscard]] const Grid& grid() const { return grid_; }
    [[nodiscard]] std::size_t cells() const { return grid_.size(); }

    template <class Rng>
    void step(ZoneState& s, Rng& rng) const {
        if (alpha_ < 1.0 && uniform01(rng) >= alpha_) {
            for (std::size_t j = 0; j < s.cells(); ++j) s.set(j, (rng() >> 63) != 0);
            return;
        }
        if (s.full()) {
            s.clear();
            return;
        }
        s.flip(pick(s, rng));
    }

private:
    template <class Rng>
    std::size_t pick(const ZoneState& s, Rng& rng) const {
        const std::size_t n = s.cells();
        switch (model_) {
            case RowModel::uniform:
                return uniform_below(rng, n);
            case RowModel::independent: {
                const double total = cumulative_.back();
                if (total <= 0.0) return uniform_below(rng, n);
                const double u = uniform01(rng) * total;
                const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
                return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), n - 1);
            }
            case RowModel::spatial: {
                spatial_row_weights(grid_, [&s](std::size_t j) { return s.contains(j); }, s.members(), weights_);
                const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
                if (total <= 0.0) return uniform_below(rng, n);
                double u = uniform01(rng) * total;
                for (std::size_t j = 0; j < n; ++j) {
                    if (u < weights_[j]) return j;
                    u -= weights_[j];
                }
                return n - 1;
            }
        }
        throw std::logic_error("unknown row model");
    }

    Grid grid_;
    RowModel model_;
    double alpha_;
    std::vector<double> cumulative_;
    mutable std::vector<double> weights_;
};

/// Steps the chain `steps` times in place.
template <class Rng>
void evolve(const LazyChain& chain, ZoneState& s, std::uint64_t steps, Rng& rng) {
    for (std::uint64_t t = 0; t < steps; ++t) chain.step(s, rng);
}

/// Each cell joins independently with its own probability.
template <class Rng>
ZoneState draw_zone(const Grid& grid, Rng& rng) {
    ZoneState s(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) s.set(j, uniform01(rng) < grid.cell(j).p);
    return s;
}

/// Monte Carlo cell marginals: R terminating walks from `start`, each
/// continuing with probability c per step; m(v) is the fraction of walks
/// ending in a zone that contains v.
inline std::vector<double> monte_carlo_marginals(const LazyChain& chain, const ZoneState& start, std::uint64_t walks,
                                                 double c, std::uint64_t rng_seed) {
    if (walks < 1) throw std::invalid_argument("need at least one walk");
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("continuation probability must lie in (0, 1)");
    if (start.cells() != chain.cells()) throw std::invalid_argument("start state does not match the grid");
    std::vector<std::uint64_t> hits(chain.cells(), 0);
    ZoneState s(chain.cells());
    for (std::uint64_t r = 0; r < walks; ++r) {
        SplitMix64 rng(derive_seed(rng_seed, {r}));
        s = start;
        while (uniform01(rng) < c) chain.step(s, rng);
        for (std::size_t j = 0; j < s.cells(); ++j) hits[j] += s.contains(j);
    }
    std::vector<double> m(chain.cells());
    for (std::size_t j = 0; j < m.size(); ++j) m[j] = static_cast<double>(hits[j]) / static_cast<double>(walks);
    return m;
}

}  // namespace alertzone
