#pragma once

// Alert zone -> HVE token patterns via two-level boolean minimization.
//
// Cost of a pattern is its number of non-star bits. Covers are built from
// prime implicants only: any implicant grows into a prime with no more
// non-star bits, so an optimal prime cover is optimal over all implicants.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "alertzone/encoding/encoding.hpp"
#include "alertzone/encoding/grid.hpp"
#include "alertzone/gray/codeword.hpp"
#include "alertzone/gray/gray.hpp"

namespace alertzone {

/// Non-empty set of cell ids, kept sorted and unique.
class AlertZone {
public:
    AlertZone() = default;
    explicit AlertZone(std::vector<std::uint32_t> cells) : cells_(std::move(cells)) {
        std::sort(cells_.begin(), cells_.end());
        cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
        if (cells_.empty()) throw std::invalid_argument("alert zone is empty");
    }

    [[nodiscard]] const std::vector<std::uint32_t>& cells() const { return cells_; }
    [[nodiscard]] std::size_t size() const { return cells_.size(); }
    [[nodiscard]] bool contains(std::uint32_t cell) const { return std::binary_search(cells_.begin(), cells_.end(), cell); }

private:
    std::vector<std::uint32_t> cells_;
};

struct TokenSet {
    int width = 0;
    std::vector<Pattern> patterns;       // sorted by msb-first text
    std::vector<std::uint32_t> covered;  // every codeword matched by some pattern, ascending
    bool approximate = false;            // cover not proven minimum

    [[nodiscard]] std::size_t non_star_bits() const {
        std::size_t total = 0;
        for (const Pattern& p : patterns) total += static_cast<std::size_t>(p.non_star_count());
        return total;
    }
};

/// Pairings spent evaluating every token of the set against one ciphertext:
/// one for the K_0 term plus two per non-star position.
inline std::size_t pairing_cost(const TokenSet& ts) {
    std::size_t total = 0;
    for (const Pattern& p : ts.patterns) total += 2 * static_cast<std::size_t>(p.non_star_count()) + 1;
    return total;
}

/// Mutual probability of the zone's cells, as a product in the log domain.
inline LogProb zone_probability(const AlertZone& zone, const Grid& grid) {
    LogProb total = LogProb::one();
    for (std::uint32_t cell : zone.cells()) {
        if (cell >= grid.size()) throw std::out_of_range("zone cell outside the grid");
        total *= LogProb::from_prob(grid.cell(cell).p);
    }
    return total;
}

struct MinimizeOptions {
    bool allow_dummy_cover = true;
    int exact_max_width = 12;                 // above this, greedy cover only
    std::uint64_t node_budget = 200000;       // branch-and-bound nodes before giving up on a proof
};

namespace detail {

class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t bits) : words_((bits + 63) / 64, 0) {}
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    [[nodiscard]] bool test(std::size_t i) const { return ((words_[i / 64] >> (i % 64)) & 1U) != 0; }
    [[nodiscard]] std::size_t count_and_not(const Bitset& mask) const {
        std::size_t total = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) total += static_cast<std::size_t>(std::popcount(words_[w] & ~mask.words_[w]));
        return total;
    }
    void or_with(const Bitset& other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
    }
    [[nodiscard]] bool subset_of(const Bitset& other) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if ((words_[w] & ~other.words_[w]) != 0) return false;
        }
        return true;
    }
    [[nodiscard]] std::size_t count() const {
        std::size_t total = 0;
        for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
        return total;
    }
    friend bool operator==(const Bitset&, const Bitset&) = default;

private:
    std::vector<std::uint64_t> words_;
};

inline bool pattern_text_less(const Pattern& a, const Pattern& b) { return a.to_string() < b.to_string(); }

/// All prime implicants of the function ON + DC (as patterns) that cover
/// at least one ON minterm. Cubes are indexed in base 3 with digit j for
/// bit position j: 0 and 1 fix the bit, 2 is a star.
inline std::vector<Pattern> prime_implicants(int k, const std::vector<std::uint32_t>& on, const std::vector<bool>& allowed) {
    if (k > 16) throw std::invalid_argument("prime generation supports widths up to 16");
    std::vector<std::uint32_t> pow3(static_cast<std::size_t>(k) + 1, 1);
    for (int j = 1; j <= k; ++j) pow3[static_cast<std::size_t>(j)] = pow3[static_cast<std::size_t>(j) - 1] * 3;
    const std::uint32_t cubes = pow3[static_cast<std::size_t>(k)];
    std::vector<std::uint8_t> valid(cubes, 0);
    std::vector<std::uint8_t> digit(static_cast<std::size_t>(k), 0);
    std::uint32_t care = Pattern::full_mask(k);
    std::uint32_t value = 0;
    for (std::uint32_t idx = 0; idx < cubes; ++idx) {
        const std::uint32_t stars = Pattern::full_mask(k) & ~care;
        if (stars == 0) {
            valid[idx] = allowed[value] ? 1 : 0;
        } else {
            const int j = std::countr_zero(stars);
            valid[idx] = valid[idx - 2 * pow3[static_cast<std::size_t>(j)]] & valid[idx - pow3[static_cast<std::size_t>(j)]];
        }
        // odometer increment over base-3 digits, keeping care/value in sync
        for (int j = 0; j < k; ++j) {
            auto& d = digit[static_cast<std::size_t>(j)];
            const std::uint32_t bit = 1U << j;
            if (d < 2) {
                ++d;
                if (d == 1) value |= bit;
                else { value &= ~bit; care &= ~bit; }
                break;
            }
            d = 0;
            care |= bit;
        }
    }

    std::vector<bool> is_on(std::size_t{1} << k, false);
    for (std::uint32_t m : on) is_on[m] = true;
    std::vector<Pattern> primes;
    std::fill(digit.begin(), digit.end(), 0);
    care = Pattern::full_mask(k);
    value = 0;
    for (std::uint32_t idx = 0; idx < cubes; ++idx) {
        if (valid[idx] != 0) {
            bool prime = true;
            for (int j = 0; j < k && prime; ++j) {
                const std::uint8_t d = digit[static_cast<std::size_t>(j)];
                if (d != 2 && valid[idx + (2U - d) * pow3[static_cast<std::size_t>(j)]] != 0) prime = false;
            }
            if (prime) {
                const Pattern p(care, value, k);
                const std::uint32_t stars = p.star_mask();
                bool touches_on = false;
                std::uint32_t sub = 0;
                do {
                    if (is_on[p.value | sub]) { touches_on = true; break; }
                    sub = (sub - stars) & stars;
                } while (sub != 0);
                if (touches_on) primes.push_back(p);
            }
        }
        for (int j = 0; j < k; ++j) {
            auto& d = digit[static_cast<std::size_t>(j)];
            const std::uint32_t bit = 1U << j;
            if (d < 2) {
                ++d;
                if (d == 1) value |= bit;
                else { value &= ~bit; care &= ~bit; }
                break;
            }
            d = 0;
            care |= bit;
        }
    }
    return primes;
}

/// Weighted set cover of ON minterms by primes. Cost key is
/// (non-star bits, pattern count), compared lexicographically.
class CoverSolver {
public:
    CoverSolver(std::vector<Pattern> primes, const std::vector<std::uint32_t>& on)
        : primes_(std::move(primes)), minterms_(on.size()) {
        std::sort(primes_.begin(), primes_.end(), [](const Pattern& a, const Pattern& b) {
            if (a.non_star_count() != b.non_star_count()) return a.non_star_count() < b.non_star_count();
            return pattern_text_less(a, b);
        });
        cover_.assign(primes_.size(), Bitset(minterms_));
        covering_.resize(minterms_);
        for (std::size_t p = 0; p < primes_.size(); ++p) {
            for (std::size_t m = 0; m < minterms_; ++m) {
                if (primes_[p].matches(Codeword(on[m], primes_[p].width))) {
                    cover_[p].set(m);
                    covering_[m].push_back(p);
                }
            }
        }
        for (std::size_t m = 0; m < minterms_; ++m) {
            if (covering_[m].empty()) throw std::logic_error("minterm without a covering prime");
        }
    }

    struct Result {
        std::vector<Pattern> patterns;
        bool optimal = false;
    };

    Result solve(bool exact, std::uint64_t node_budget) {
        best_ = greedy();
        best_key_ = key_of(best_);
        optimal_ = false;
        if (exact) {
            nodes_ = 0;
            budget_ = node_budget;
            exhausted_ = false;
            std::vector<std::size_t> chosen;
            Bitset covered(minterms_);
            search(chosen, covered, 0);
            optimal_ = !exhausted_;
        }
        Result out;
        for (std::size_t p : best_) out.patterns.push_back(primes_[p]);
        std::sort(out.patterns.begin(), out.patterns.end(), pattern_text_less);
        out.optimal = optimal_;
        return out;
    }

private:
    using Key = std::pair<std::size_t, std::size_t>;

    [[nodiscard]] Key key_of(const std::vector<std::size_t>& chosen) const {
        std::size_t bits = 0;
        for (std::size_t p : chosen) bits += static_cast<std::size_t>(primes_[p].non_star_count());
        return {bits, chosen.size()};
    }

    [[nodiscard]] std::size_t cost(std::size_t p) const { return static_cast<std::size_t>(primes_[p].non_star_count()); }

    /// Drops patterns whose minterms are all covered by the others,
    /// most expensive first.
    void remove_redundant(std::vector<std::size_t>& chosen) const {
        std::vector<std::size_t> order = chosen;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (cost(a) != cost(b)) return cost(a) > cost(b);
            return a > b;
        });
        std::vector<std::size_t> kept = chosen;
        for (std::size_t candidate : order) {
            Bitset rest(minterms_);
            for (std::size_t p : kept) {
                if (p != candidate) rest.or_with(cover_[p]);
            }
            if (cover_[candidate].subset_of(rest)) kept.erase(std::find(kept.begin(), kept.end(), candidate));
        }
        chosen = kept;
    }

    std::vector<std::size_t> greedy() const {
        Bitset covered(minterms_);
        std::vector<std::size_t> chosen;
        std::size_t remaining = minterms_;
        while (remaining > 0) {
            std::size_t best = 0;
            std::size_t best_gain = 0;
            std::size_t best_cost = 0;
            for (std::size_t p = 0; p < primes_.size(); ++p) {
                const std::size_t gain = cover_[p].count_and_not(covered);
                if (gain == 0) continue;
                // minimise cost/gain: compare cost_p * gain_best < cost_best * gain_p
                const bool better = best_gain == 0 || cost(p) * best_gain < best_cost * gain ||
                                    (cost(p) * best_gain == best_cost * gain && gain > best_gain);
                if (better) {
                    best = p;
                    best_gain = gain;
                    best_cost = cost(p);
                }
            }
            chosen.push_back(best);
            covered.or_with(cover_[best]);
            remaining -= best_gain;
        }
        remove_redundant(chosen);
        return chosen;
    }

    /// Lower bound from minterms whose covering sets are pairwise
    /// disjoint: each needs its own pattern of at least its cheapest cost.
    [[nodiscard]] Key lower_bound(const Bitset& covered) const {
        std::vector<bool> blocked(primes_.size(), false);
        Key bound{0, 0};
        for (std::size_t m = 0; m < minterms_; ++m) {
            if (covered.test(m)) continue;
            bool independent = true;
            for (std::size_t p : covering_[m]) {
                if (blocked[p]) { independent = false; break; }
            }
            if (!independent) continue;
            std::size_t cheapest = std::numeric_limits<std::size_t>::max();
            for (std::size_t p : covering_[m]) {
                blocked[p] = true;
                cheapest = std::min(cheapest, cost(p));
            }
            bound.first += cheapest;
            bound.second += 1;
        }
        return bound;
    }

    void search(std::vector<std::size_t>& chosen, Bitset& covered, std::size_t bits) {
        if (exhausted_) return;
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return;
        }
        std::size_t branch = minterms_;
        std::size_t fewest = std::numeric_limits<std::size_t>::max();
        for (std::size_t m = 0; m < minterms_; ++m) {
            if (!covered.test(m) && covering_[m].size() < fewest) {
                fewest = covering_[m].size();
                branch = m;
            }
        }
        if (branch == minterms_) {
            const Key key{bits, chosen.size()};
            if (key < best_key_) {
                best_ = chosen;
                best_key_ = key;
            }
            return;
        }
        const Key lb = lower_bound(covered);
        if (Key{bits + lb.first, chosen.size() + lb.second} >= best_key_) return;
        for (std::size_t p : covering_[branch]) {
            Bitset next = covered;
            next.or_with(cover_[p]);
            chosen.push_back(p);
            search(chosen, next, bits + cost(p));
            chosen.pop_back();
            if (exhausted_) return;
        }
    }

    std::vector<Pattern> primes_;
    std::size_t minterms_;
    std::vector<Bitset> cover_;                       // by prime
    std::vector<std::vector<std::size_t>> covering_;  // by minterm, cheapest first
    std::vector<std::size_t> best_;
    Key best_key_{};
    bool optimal_ = false;
    std::uint64_t nodes_ = 0;
    std::uint64_t budget_ = 0;
    bool exhausted_ = false;
};

inline std::vector<std::uint32_t> expand_patterns(const std::vector<Pattern>& patterns) {
    std::vector<std::uint32_t> out;
    for (const Pattern& p : patterns) {
        for (Codeword c : gray::expand(p)) out.push_back(c.bits);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

/// Minimum-cost pattern cover of the given ON codewords, where dc marks
/// codewords that may be covered but need not be.
inline TokenSet minimize_codewords(int k, std::vector<std::uint32_t> on, const std::vector<bool>& dc,
                                   const MinimizeOptions& options = {}) {
    if (on.empty()) throw std::invalid_argument("nothing to cover");
    const std::size_t space = std::size_t{1} << k;
    if (dc.size() != space) throw std::invalid_argument("don't-care vector must span the 2^k space");
    std::sort(on.begin(), on.end());
    on.erase(std::unique(on.begin(), on.end()), on.end());
    std::vector<bool> allowed = dc;
    for (std::uint32_t m : on) {
        if (m >= space) throw std::out_of_range("minterm outside the 2^k space");
        allowed[m] = true;
    }
    detail::CoverSolver solver(detail::prime_implicants(k, on, allowed), on);
    const bool exact = k <= options.exact_max_width;
    auto result = solver.solve(exact, options.node_budget);
    TokenSet ts;
    ts.width = k;
    ts.patterns = std::move(result.patterns);
    ts.covered = detail::expand_patterns(ts.patterns);
    ts.approximate = !result.optimal;
    return ts;
}

/// Token set for an alert zone under an encoding. With allow_dummy_cover,
/// unassigned codewords act as don't-cares.
inline TokenSet minimize(const AlertZone& zone, const GridEncoding& enc, const MinimizeOptions& options = {}) {
    if (zone.size() == 0) throw std::invalid_argument("alert zone is empty");
    std::vector<std::uint32_t> on;
    on.reserve(zone.size());
    for (std::uint32_t cell : zone.cells()) {
        if (cell >= enc.cell_count()) throw std::out_of_range("zone cell " + std::to_string(cell) + " is not encoded");
        on.push_back(enc.codeword(cell).bits);
    }
    std::vector<bool> dc(enc.space_size(), false);
    if (options.allow_dummy_cover) {
        for (std::uint32_t c = 0; c < enc.space_size(); ++c) dc[c] = enc.is_dummy(c);
    }
    return minimize_codewords(enc.width(), std::move(on), dc, options);
}

/// One token per complete BRG cycle: greedily carves the zone's codewords
/// into the largest cycles lying wholly inside the zone (ties by pattern
/// text). No don't-cares; always exact but usually costlier than minimize.
inline TokenSet per_cycle_tokens(const AlertZone& zone, const GridEncoding& enc) {
    const int k = enc.width();
    std::vector<bool> left(enc.space_size(), false);
    std::size_t remaining = 0;
    for (std::uint32_t cell : zone.cells()) {
        if (cell >= enc.cell_count()) throw std::out_of_range("zone cell " + std::to_string(cell) + " is not encoded");
        left[enc.codeword(cell).bits] = true;
        ++remaining;
    }
    TokenSet ts;
    ts.width = k;
    while (remaining > 0) {
        std::vector<std::uint32_t> on;
        for (std::uint32_t c = 0; c < left.size(); ++c) {
            if (left[c]) on.push_back(c);
        }
        const std::vector<Pattern> primes = detail::prime_implicants(k, on, left);
        Pattern best = primes.front();
        for (const Pattern& p : primes) {
            if (p.star_count() > best.star_count() ||
                (p.star_count() == best.star_count() && detail::pattern_text_less(p, best))) {
                best = p;
            }
        }
        // A starred pattern is exactly the node set of its complete cycle.
        const std::vector<Codeword> nodes =
            best.star_count() > 0 ? gray::token_to_cycle(best).nodes() : std::vector<Codeword>{Codeword(best.value, k)};
        for (Codeword c : nodes) {
            left[c.bits] = false;
            --remaining;
        }
        ts.patterns.push_back(best);
    }
    std::sort(ts.patterns.begin(), ts.patterns.end(), detail::pattern_text_less);
    ts.covered = detail::expand_patterns(ts.patterns);
    ts.approximate = true;
    return ts;
}

/// Token-set text: `# cost=<pairings> non_star=<bits> zone_size=<n>
/// encoder=<name> approximate=<0|1>` then one msb-first pattern per line.
inline void write_token_set(std::ostream& out, const TokenSet& ts, std::size_t zone_size, const std::string& encoder) {
    out << "# cost=" << pairing_cost(ts) << " non_star=" << ts.non_star_bits() << " zone_size=" << zone_size
        << " encoder=" << encoder << " approximate=" << (ts.approximate ? 1 : 0) << '\n';
    for (const Pattern& p : ts.patterns) out << p.to_string() << '\n';
}

}  // namespace alertzone
