#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace alertzone {

/// Largest supported codeword width. Codewords live in a 32-bit word and
/// several algorithms index arrays of size 2^k.
inline constexpr int kMaxCodewordWidth = 30;

/// Fixed-width bit vector on the k-cube. Bit position 0 is the least
/// significant bit; text form is msb-first.
struct Codeword {
    std::uint32_t bits = 0;
    int width = 0;

    Codeword() = default;
    Codeword(std::uint32_t value, int k) : bits(value), width(k) {
        if (k < 1 || k > kMaxCodewordWidth) {
            throw std::invalid_argument("codeword width out of range: " + std::to_string(k));
        }
        if (k < 32 && (value >> k) != 0) {
            throw std::invalid_argument("codeword value does not fit in width " + std::to_string(k));
        }
    }

    [[nodiscard]] bool bit(int position) const { return ((bits >> position) & 1U) != 0; }

    [[nodiscard]] Codeword flipped(std::uint32_t mask) const { return Codeword(bits ^ mask, width); }

    [[nodiscard]] std::string to_string() const {
        std::string out(static_cast<std::size_t>(width), '0');
        for (int i = 0; i < width; ++i) {
            if (bit(i)) out[static_cast<std::size_t>(width - 1 - i)] = '1';
        }
        return out;
    }

    static Codeword parse(std::string_view text) {
        if (text.empty() || text.size() > static_cast<std::size_t>(kMaxCodewordWidth)) {
            throw std::invalid_argument("codeword text has invalid length");
        }
        std::uint32_t value = 0;
        for (char ch : text) {
            if (ch != '0' && ch != '1') {
                throw std::invalid_argument("codeword symbol outside {0,1}: '" + std::string(1, ch) + "'");
            }
            value = (value << 1) | static_cast<std::uint32_t>(ch == '1');
        }
        return Codeword(value, static_cast<int>(text.size()));
    }

    friend bool operator==(const Codeword&, const Codeword&) = default;
    friend auto operator<=>(const Codeword& a, const Codeword& b) {
        if (auto c = a.width <=> b.width; c != 0) return c;
        return a.bits <=> b.bits;
    }
};

/// Search pattern over {0,1,*}. care has a bit set for every non-star
/// position; value holds the required bit there (and zero under stars).
struct Pattern {
    std::uint32_t care = 0;
    std::uint32_t value = 0;
    int width = 0;

    Pattern() = default;
    Pattern(std::uint32_t care_mask, std::uint32_t value_bits, int k)
        : care(care_mask), value(value_bits & care_mask), width(k) {
        if (k < 1 || k > kMaxCodewordWidth) {
            throw std::invalid_argument("pattern width out of range: " + std::to_string(k));
        }
        if (k < 32 && ((care_mask >> k) != 0 || (value_bits >> k) != 0)) {
            throw std::invalid_argument("pattern masks do not fit in width " + std::to_string(k));
        }
    }

    /// Star-free pattern matching exactly one codeword.
    static Pattern exact(Codeword c) { return Pattern(full_mask(c.width), c.bits, c.width); }

    static std::uint32_t full_mask(int k) { return k >= 32 ? ~0U : ((1U << k) - 1U); }

    [[nodiscard]] std::uint32_t star_mask() const { return full_mask(width) & ~care; }
    [[nodiscard]] int non_star_count() const { return std::popcount(care); }
    [[nodiscard]] int star_count() const { return width - non_star_count(); }
    [[nodiscard]] bool is_star(int position) const { return ((care >> position) & 1U) == 0; }

    [[nodiscard]] bool matches(Codeword c) const { return c.width == width && (c.bits & care) == value; }

    [[nodiscard]] std::string to_string() const {
        std::string out(static_cast<std::size_t>(width), '*');
        for (int i = 0; i < width; ++i) {
            if (!is_star(i)) out[static_cast<std::size_t>(width - 1 - i)] = ((value >> i) & 1U) ? '1' : '0';
        }
        return out;
    }

    static Pattern parse(std::string_view text) {
        if (text.empty() || text.size() > static_cast<std::size_t>(kMaxCodewordWidth)) {
            throw std::invalid_argument("pattern text has invalid length");
        }
        std::uint32_t care = 0;
        std::uint32_t value = 0;
        for (char ch : text) {
            care <<= 1;
            value <<= 1;
            if (ch == '0') {
                care |= 1U;
            } else if (ch == '1') {
                care |= 1U;
                value |= 1U;
            } else if (ch != '*') {
                throw std::invalid_argument("pattern symbol outside {0,1,*}: '" + std::string(1, ch) + "'");
            }
        }
        return Pattern(care, value, static_cast<int>(text.size()));
    }

    friend bool operator==(const Pattern&, const Pattern&) = default;
};

/// Smallest k with 2^k >= n, and at least 1.
inline int codeword_width_for(std::size_t n) {
    int k = 1;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

}  // namespace alertzone
