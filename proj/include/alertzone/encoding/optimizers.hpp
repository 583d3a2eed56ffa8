#pragma once

// Gray optimizers. All three share PartialEncoding, a partially filled
// cell<->codeword assignment over 2^k "virtual cells": the n real cells
// followed by 2^k - n zero-probability dummies. Real cells always precede
// dummies when the highest-probability unassigned cells are taken.
//
// Tie-breaking: equal probabilities by ascending cell id, equal cycle
// weights by ascending codeword.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "alertzone/core/random.hpp"
#include "alertzone/encoding/encoding.hpp"
#include "alertzone/encoding/grid.hpp"
#include "alertzone/gray/codeword.hpp"
#include "alertzone/gray/gray.hpp"

namespace alertzone {

/// Counts probability-product operations: combining m cycle factors costs
/// m - 1 multiplications.
struct OpCounter {
    std::uint64_t multiplications = 0;
};

/// Indices of values in descending order; equal values keep input order.
template <class T>
std::vector<std::size_t> descending_order(const std::vector<T>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return order;
}

/// Rank-to-rank matching of two weight lists: the r-th largest of `left`
/// is paired with the r-th largest of `right`. Returns, for each index of
/// left, the matched index of right (or -1 once right runs out).
template <class T>
std::vector<std::int64_t> rank_matching(const std::vector<T>& left, const std::vector<T>& right) {
    const auto lo = descending_order(left);
    const auto ro = descending_order(right);
    std::vector<std::int64_t> match(left.size(), -1);
    for (std::size_t r = 0; r < lo.size() && r < ro.size(); ++r) match[lo[r]] = static_cast<std::int64_t>(ro[r]);
    return match;
}

class PartialEncoding {
public:
    explicit PartialEncoding(const Grid& grid) : PartialEncoding(grid, codeword_width_for(grid.size())) {}

    PartialEncoding(const Grid& grid, int k) : n_(grid.size()), k_(k) {
        if (k < 1 || k > kMaxCodewordWidth || (std::size_t{1} << k) < n_) {
            throw std::invalid_argument("codeword width cannot hold the grid");
        }
        const std::size_t space = space_size();
        logp_.resize(space, LogProb::zero());
        for (std::size_t c = 0; c < n_; ++c) logp_[c] = LogProb::from_prob(grid.cell(c).p);
        order_.resize(space);
        std::iota(order_.begin(), order_.end(), 0U);
        std::stable_sort(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(n_),
                         [&](std::uint32_t a, std::uint32_t b) { return grid.cell(a).p > grid.cell(b).p; });
        cell_at_.assign(space, kNone);
        index_of_.assign(space, kNone);
        free_indices_.resize(space);
        std::iota(free_indices_.begin(), free_indices_.end(), 0U);
        free_pos_.resize(space);
        std::iota(free_pos_.begin(), free_pos_.end(), 0U);
    }

    [[nodiscard]] int width() const { return k_; }
    [[nodiscard]] std::size_t space_size() const { return std::size_t{1} << k_; }
    [[nodiscard]] std::size_t cell_count() const { return n_; }
    [[nodiscard]] bool index_assigned(std::uint32_t index) const { return cell_at_.at(index) != kNone; }
    [[nodiscard]] bool cell_assigned(std::uint32_t cell) const { return index_of_.at(cell) != kNone; }
    [[nodiscard]] std::size_t unassigned_index_count() const { return free_indices_.size(); }
    [[nodiscard]] bool complete() const { return free_indices_.empty(); }

    /// Cell (real or dummy) at index, if any.
    [[nodiscard]] std::optional<std::uint32_t> cell_at(std::uint32_t index) const {
        const std::int64_t c = cell_at_.at(index);
        if (c == kNone) return std::nullopt;
        return static_cast<std::uint32_t>(c);
    }

    /// Log probability of whatever sits at index; unassigned counts as zero.
    [[nodiscard]] LogProb log_prob_at(std::uint32_t index) const {
        const std::int64_t c = cell_at_[index];
        return c == kNone ? LogProb::zero() : logp_[static_cast<std::size_t>(c)];
    }

    void assign(std::uint32_t cell, std::uint32_t index) {
        if (cell >= space_size() || index >= space_size()) throw std::out_of_range("cell or index outside the space");
        if (cell_at_[index] != kNone) throw std::invalid_argument("index " + std::to_string(index) + " already assigned");
        if (index_of_[cell] != kNone) throw std::invalid_argument("cell " + std::to_string(cell) + " already assigned");
        cell_at_[index] = cell;
        index_of_[cell] = index;
        const std::uint32_t pos = free_pos_[index];
        const std::uint32_t last = free_indices_.back();
        free_indices_[pos] = last;
        free_pos_[last] = pos;
        free_indices_.pop_back();
    }

    /// Up to m highest-probability unassigned cells, best first.
    [[nodiscard]] std::vector<std::uint32_t> top_unassigned(std::size_t m) {
        while (cursor_ < order_.size() && index_of_[order_[cursor_]] != kNone) ++cursor_;
        std::vector<std::uint32_t> out;
        out.reserve(m);
        for (std::size_t i = cursor_; i < order_.size() && out.size() < m; ++i) {
            if (index_of_[order_[i]] == kNone) out.push_back(order_[i]);
        }
        return out;
    }

    template <class Rng>
    [[nodiscard]] std::uint32_t random_unassigned_index(Rng& rng) const {
        if (free_indices_.empty()) throw std::logic_error("no unassigned index left");
        return free_indices_[uniform_below(rng, free_indices_.size())];
    }

    /// One Gray-optimizer pass around an assigned seed index: for each
    /// distance ring i = 1..depth, the highest-probability unassigned cells
    /// are matched rank-to-rank against the unassigned ring indices sorted
    /// by the probability of their complete i-bit BRG cycle through the
    /// seed, excluding the ring node itself. Already-assigned ring indices
    /// are skipped.
    void gray_pass(std::uint32_t seed_index, int depth, OpCounter* counter = nullptr) {
        if (!index_assigned(seed_index)) throw std::invalid_argument("gray pass seed index is not assigned");
        if (depth < 1 || depth > k_) throw std::invalid_argument("depth out of range [1, k]");
        std::vector<std::uint32_t> candidates;
        for (int i = 1; i <= depth; ++i) {
            candidates.clear();
            const std::uint64_t limit = std::uint64_t{1} << k_;
            for (std::uint64_t mask = (std::uint64_t{1} << i) - 1; mask < limit;) {
                const std::uint32_t candidate = seed_index ^ static_cast<std::uint32_t>(mask);
                if (cell_at_[candidate] == kNone) candidates.push_back(candidate);
                const std::uint64_t low = mask & (~mask + 1);
                const std::uint64_t ripple = mask + low;
                mask = (((ripple ^ mask) >> 2) / low) | ripple;
            }
            if (candidates.empty()) continue;
            const std::vector<std::uint32_t> cells = top_unassigned(candidates.size());
            if (cells.empty()) return;
            std::sort(candidates.begin(), candidates.end());

            std::vector<LogProb> weights;
            weights.reserve(candidates.size());
            for (std::uint32_t candidate : candidates) {
                const std::uint32_t hamming_bits = candidate ^ seed_index;
                LogProb w = LogProb::one();
                std::uint64_t factors = 0;
                std::uint32_t sub = hamming_bits;
                do {
                    sub = (sub - 1) & hamming_bits;
                    w *= log_prob_at(seed_index ^ sub);
                    ++factors;
                } while (sub != 0);
                if (counter != nullptr) counter->multiplications += factors - 1;
                weights.push_back(w);
            }
            // cells are already best-first, so rank r of cells is cells[r]
            const auto order = descending_order(weights);
            for (std::size_t r = 0; r < cells.size(); ++r) assign(cells[r], candidates[order[r]]);
        }
    }

    /// Places every remaining cell on a uniformly random remaining index.
    template <class Rng>
    void fill_randomly(Rng& rng) {
        std::vector<std::uint32_t> cells = top_unassigned(free_indices_.size());
        std::vector<std::uint32_t> indices = free_indices_;
        std::sort(indices.begin(), indices.end());
        std::shuffle(indices.begin(), indices.end(), rng);
        for (std::size_t i = 0; i < cells.size(); ++i) assign(cells[i], indices[i]);
    }

    [[nodiscard]] GridEncoding finish() const {
        if (!complete()) throw std::logic_error("encoding is incomplete");
        std::vector<std::uint32_t> forward(n_);
        for (std::size_t c = 0; c < n_; ++c) forward[c] = static_cast<std::uint32_t>(index_of_[c]);
        return GridEncoding(k_, std::move(forward));
    }

private:
    static constexpr std::int64_t kNone = -1;

    std::size_t n_;
    int k_;
    std::vector<LogProb> logp_;           // by virtual cell
    std::vector<std::uint32_t> order_;    // virtual cells, best first
    std::size_t cursor_ = 0;              // order_[0, cursor_) all assigned
    std::vector<std::int64_t> cell_at_;   // by index
    std::vector<std::int64_t> index_of_;  // by virtual cell
    std::vector<std::uint32_t> free_indices_;
    std::vector<std::uint32_t> free_pos_;
};

inline std::uint32_t most_probable_cell(const Grid& grid) {
    std::uint32_t best = 0;
    for (const Cell& c : grid.cells()) {
        if (c.p > grid.cell(best).p) best = c.id;
    }
    return best;
}

struct GoOptions {
    std::optional<std::uint32_t> seed_cell;  // default: most probable cell
    std::uint32_t seed_index = 0;
    int depth = 0;               // 0 means full depth k
    std::uint64_t rng_seed = 0;  // places the cells left over when depth < k
};

/// Gray Optimizer. Seeds one cell at one index and fills distance rings
/// 1..depth around it. With depth < k the leftover cells go to random
/// indices drawn from rng_seed.
inline GridEncoding gray_optimizer(const Grid& grid, const GoOptions& options = {}, OpCounter* counter = nullptr) {
    PartialEncoding state(grid);
    const int k = state.width();
    const int depth = options.depth == 0 ? k : options.depth;
    if (depth < 1 || depth > k) throw std::invalid_argument("depth out of range [1, k]");
    const std::uint32_t seed_cell = options.seed_cell.value_or(most_probable_cell(grid));
    if (seed_cell >= grid.size()) throw std::out_of_range("seed cell does not exist");
    if (options.seed_index >= state.space_size()) throw std::out_of_range("seed index outside the k-cube");
    state.assign(seed_cell, options.seed_index);
    state.gray_pass(options.seed_index, depth, counter);
    if (!state.complete()) {
        std::mt19937_64 rng(options.rng_seed);
        state.fill_randomly(rng);
    }
    return state.finish();
}

/// Multiple Seed Gray Optimizer: clusters of depth-limited GO passes, each
/// seeded by the most probable unassigned cell at a uniformly random
/// unassigned index. first_index forces the first cluster's seed index.
inline GridEncoding msgo(const Grid& grid, int depth, std::uint64_t rng_seed,
                         std::optional<std::uint32_t> first_index = std::nullopt, OpCounter* counter = nullptr) {
    if (depth < 1) throw std::invalid_argument("MSGO depth must be at least 1");
    PartialEncoding state(grid);
    const int pass_depth = std::min(depth, state.width());
    if (first_index && *first_index >= state.space_size()) throw std::out_of_range("first index outside the k-cube");
    std::mt19937_64 rng(rng_seed);
    bool first = true;
    while (!state.complete()) {
        const std::uint32_t index = (first && first_index) ? *first_index : state.random_unassigned_index(rng);
        first = false;
        state.assign(state.top_unassigned(1).front(), index);
        state.gray_pass(index, pass_depth, counter);
    }
    return state.finish();
}

/// Scaled Gray Optimizer: depth-1 passes in breadth-first order of the
/// distance rings around the all-zero index, each ring visited in
/// descending order of the probabilities already placed on it.
inline GridEncoding sgo(const Grid& grid, OpCounter* counter = nullptr) {
    PartialEncoding state(grid);
    const int k = state.width();
    state.assign(state.top_unassigned(1).front(), 0);
    state.gray_pass(0, 1, counter);
    const Codeword origin(0, k);
    for (int i = 1; i <= k && !state.complete(); ++i) {
        std::vector<Codeword> ring = gray::distance_ring(origin, i);
        std::stable_sort(ring.begin(), ring.end(), [&](Codeword a, Codeword b) {
            return state.log_prob_at(a.bits) > state.log_prob_at(b.bits);
        });
        for (Codeword c : ring) {
            if (state.complete()) break;
            if (state.index_assigned(c.bits)) state.gray_pass(c.bits, 1, counter);
        }
    }
    return state.finish();
}

}  // namespace alertzone
