#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "alertzone/encoding/encoding.hpp"
#include "alertzone/encoding/grid.hpp"
#include "alertzone/gray/codeword.hpp"

namespace alertzone {

/// Two-bit label of a quadtree child. Row bit 0 is north, column bit 0 is
/// west, giving NW=00, NE=01, SE=11, SW=10: siblings that share an edge
/// differ in one bit. Swap this function to change the child ordering.
inline std::uint32_t hge_child_label(std::uint32_t south, std::uint32_t east) { return (south << 1) | east; }

/// Quadtree levels needed so that every cell centre falls in its own leaf
/// of the 2^L x 2^L subdivision of the unit square.
inline int hge_levels(const Grid& grid) {
    const std::size_t n = grid.size();
    int levels = 1;
    while ((std::size_t{1} << (2 * levels)) < n) ++levels;
    for (;; ++levels) {
        if (2 * levels > kMaxCodewordWidth) throw std::invalid_argument("cell centres too close for a quadtree encoding");
        const auto side = static_cast<double>(std::uint64_t{1} << levels);
        std::vector<std::uint64_t> leaves;
        leaves.reserve(n);
        for (const Cell& c : grid.cells()) {
            const auto col = static_cast<std::uint64_t>(std::min(side - 1, std::floor(c.x * side)));
            const auto row = static_cast<std::uint64_t>(std::min(side - 1, std::floor(c.y * side)));
            leaves.push_back((row << 32) | col);
        }
        std::sort(leaves.begin(), leaves.end());
        if (std::adjacent_find(leaves.begin(), leaves.end()) == leaves.end()) return levels;
    }
}

/// Hierarchical Gray encoding baseline: a quadtree over the unit square,
/// each level contributing the 2-bit Gray label of the child containing the
/// cell centre, root level most significant. Probability-oblivious. The
/// width is 2L, which exceeds ceil(log2 n) when n is far from a power of 4.
inline GridEncoding hge_baseline(const Grid& grid) {
    const int levels = hge_levels(grid);
    const auto side = static_cast<double>(std::uint64_t{1} << levels);
    std::vector<std::uint32_t> forward;
    forward.reserve(grid.size());
    for (const Cell& c : grid.cells()) {
        const auto col = static_cast<std::uint32_t>(std::min(side - 1, std::floor(c.x * side)));
        const auto row = static_cast<std::uint32_t>(std::min(side - 1, std::floor(c.y * side)));
        std::uint32_t code = 0;
        for (int level = levels - 1; level >= 0; --level) {
            code = (code << 2) | hge_child_label((row >> level) & 1U, (col >> level) & 1U);
        }
        forward.push_back(code);
    }
    return GridEncoding(2 * levels, std::move(forward));
}

/// Uniformly random bijection onto a ceil(log2 n)-bit space.
inline GridEncoding random_baseline(const Grid& grid, std::uint64_t rng_seed) {
    const int k = codeword_width_for(grid.size());
    std::vector<std::uint32_t> indices(std::size_t{1} << k);
    std::iota(indices.begin(), indices.end(), 0U);
    std::mt19937_64 rng(rng_seed);
    std::shuffle(indices.begin(), indices.end(), rng);
    indices.resize(grid.size());
    return GridEncoding(k, std::move(indices));
}

}  // namespace alertzone
