#pragma once

// Binary-reflected Gray code machinery on the k-cube: Hamming bits, BRG
// paths, complete x-bit BRG cycles, distance rings, and the bijection
// between star patterns and complete cycles.
//
// Gray order over a set of positions uses the positions sorted ascending
// as a virtual counter: counter bit j drives position positions[j].

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "alertzone/gray/codeword.hpp"

namespace alertzone::gray {

inline std::uint32_t to_gray(std::uint32_t index) { return index ^ (index >> 1); }

inline std::uint32_t from_gray(std::uint32_t code) {
    std::uint32_t index = code;
    for (std::uint32_t shift = 1; shift < 32; shift <<= 1) index ^= index >> shift;
    return index;
}

/// Ascending list of set bit positions.
inline std::vector<int> positions_of(std::uint32_t mask) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(std::popcount(mask)));
    while (mask != 0) {
        out.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return out;
}

inline std::uint32_t mask_of(const std::vector<int>& positions) {
    std::uint32_t mask = 0;
    for (int p : positions) mask |= 1U << p;
    return mask;
}

/// Gathers the bits of word at positions into a compact counter value.
inline std::uint32_t gather_bits(std::uint32_t word, const std::vector<int>& positions) {
    std::uint32_t out = 0;
    for (std::size_t j = 0; j < positions.size(); ++j) out |= ((word >> positions[j]) & 1U) << j;
    return out;
}

/// Inverse of gather_bits: spreads counter bits onto positions.
inline std::uint32_t scatter_bits(std::uint32_t counter, const std::vector<int>& positions) {
    std::uint32_t out = 0;
    for (std::size_t j = 0; j < positions.size(); ++j) out |= ((counter >> j) & 1U) << positions[j];
    return out;
}

struct HammingResult {
    int distance = 0;
    std::vector<int> positions;  // ascending, position 0 = lsb
};

inline void require_same_width(Codeword a, Codeword b) {
    if (a.width != b.width) throw std::invalid_argument("codeword width mismatch");
}

inline HammingResult hamming(Codeword a, Codeword b) {
    require_same_width(a, b);
    const std::uint32_t diff = a.bits ^ b.bits;
    return {std::popcount(diff), positions_of(diff)};
}

/// Path from a to b that toggles only the Hamming bits, visiting the
/// restricted patterns in binary-reflected Gray order. The path follows
/// the Gray sequence between the two restricted patterns without
/// wrapping, so brg_path(b, a) is the reverse of brg_path(a, b). Its
/// length can exceed the Hamming distance.
inline std::vector<Codeword> brg_path(Codeword a, Codeword b) {
    require_same_width(a, b);
    if (a == b) throw std::invalid_argument("brg_path requires distinct endpoints");
    const std::vector<int> diff = positions_of(a.bits ^ b.bits);
    const std::uint32_t fixed = a.bits & ~mask_of(diff);
    const auto from = static_cast<std::int64_t>(from_gray(gather_bits(a.bits, diff)));
    const auto to = static_cast<std::int64_t>(from_gray(gather_bits(b.bits, diff)));
    const std::int64_t step = from < to ? 1 : -1;
    std::vector<Codeword> path;
    path.reserve(static_cast<std::size_t>((to - from) * step + 1));
    for (std::int64_t i = from;; i += step) {
        path.emplace_back(fixed | scatter_bits(to_gray(static_cast<std::uint32_t>(i)), diff), a.width);
        if (i == to) break;
    }
    return path;
}

/// A complete x-bit BRG cycle: 2^x codewords that agree with the anchor
/// outside star_positions and run through every assignment of the star
/// positions in Gray order, starting at the anchor.
class BrgCycle {
public:
    [[nodiscard]] Codeword anchor() const { return anchor_; }
    [[nodiscard]] const std::vector<int>& star_positions() const { return stars_; }
    [[nodiscard]] std::uint32_t star_mask() const { return mask_of(stars_); }
    [[nodiscard]] const std::vector<Codeword>& nodes() const { return nodes_; }
    [[nodiscard]] std::size_t size() const { return nodes_.size(); }

    friend BrgCycle complete_cycle(Codeword anchor, std::vector<int> star_positions);

private:
    BrgCycle(Codeword anchor, std::vector<int> stars, std::vector<Codeword> nodes)
        : anchor_(anchor), stars_(std::move(stars)), nodes_(std::move(nodes)) {}

    Codeword anchor_;
    std::vector<int> stars_;
    std::vector<Codeword> nodes_;
};

inline BrgCycle complete_cycle(Codeword anchor, std::vector<int> star_positions) {
    if (star_positions.empty()) throw std::invalid_argument("complete cycle needs at least one star position");
    std::sort(star_positions.begin(), star_positions.end());
    if (std::adjacent_find(star_positions.begin(), star_positions.end()) != star_positions.end()) {
        throw std::invalid_argument("duplicate star position");
    }
    if (star_positions.front() < 0 || star_positions.back() >= anchor.width) {
        throw std::invalid_argument("star position outside codeword width");
    }
    const std::uint32_t count = 1U << star_positions.size();
    std::vector<Codeword> nodes;
    nodes.reserve(count);
    for (std::uint32_t t = 0; t < count; ++t) {
        nodes.emplace_back(anchor.bits ^ scatter_bits(to_gray(t), star_positions), anchor.width);
    }
    return BrgCycle(anchor, std::move(star_positions), std::move(nodes));
}

inline BrgCycle token_to_cycle(const Pattern& pattern) {
    const std::uint32_t stars = pattern.star_mask();
    if (stars == 0) throw std::invalid_argument("star-free pattern names a single node, not a cycle");
    return complete_cycle(Codeword(pattern.value, pattern.width), positions_of(stars));
}

inline Pattern cycle_to_token(const BrgCycle& cycle) {
    const Codeword anchor = cycle.anchor();
    const std::uint32_t care = Pattern::full_mask(anchor.width) & ~cycle.star_mask();
    return Pattern(care, anchor.bits, anchor.width);
}

/// All codewords at Hamming distance i from center, ascending by value.
inline std::vector<Codeword> distance_ring(Codeword center, int i) {
    const int k = center.width;
    if (i < 0 || i > k) throw std::out_of_range("distance ring radius out of range");
    std::vector<Codeword> ring;
    if (i == 0) {
        ring.push_back(center);
        return ring;
    }
    const std::uint64_t limit = std::uint64_t{1} << k;
    // Gosper's hack over k-bit masks with popcount i.
    for (std::uint64_t mask = (std::uint64_t{1} << i) - 1; mask < limit;) {
        ring.emplace_back(center.bits ^ static_cast<std::uint32_t>(mask), k);
        const std::uint64_t low = mask & (~mask + 1);
        const std::uint64_t ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
    std::sort(ring.begin(), ring.end());
    return ring;
}

/// Codewords matched by pattern, ascending by value.
inline std::vector<Codeword> expand(const Pattern& pattern) {
    std::vector<Codeword> out;
    const std::uint32_t stars = pattern.star_mask();
    std::uint32_t sub = 0;
    do {
        out.emplace_back(pattern.value | sub, pattern.width);
        sub = (sub - stars) & stars;
    } while (sub != 0);
    return out;
}

}  // namespace alertzone::gray
