#pragma once

// Hidden Vector Encryption over a composite-order bilinear group
// (Boneh-Waters construction). Attribute bit i and pattern position i both
// refer to codeword bit i, least significant first.

#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "alertzone/core/random.hpp"
#include "alertzone/gray/codeword.hpp"
#include "alertzone/hve/reference_group.hpp"

namespace alertzone::hve {

template <class G>
concept BilinearGroup = requires(const G& g, typename G::Element e, typename G::Target t, std::uint64_t x, SplitMix64& rng) {
    { g.identity() } -> std::same_as<typename G::Element>;
    { g.mul(e, e) } -> std::same_as<typename G::Element>;
    { g.pow(e, x) } -> std::same_as<typename G::Element>;
    { g.pair(e, e) } -> std::same_as<typename G::Target>;
    { g.gt_identity() } -> std::same_as<typename G::Target>;
    { g.gt_mul(t, t) } -> std::same_as<typename G::Target>;
    { g.gt_div(t, t) } -> std::same_as<typename G::Target>;
    { g.gt_pow(t, x) } -> std::same_as<typename G::Target>;
    { g.random_p_element(rng) } -> std::same_as<typename G::Element>;
    { g.random_q_element(rng) } -> std::same_as<typename G::Element>;
    { g.random_q_generator(rng) } -> std::same_as<typename G::Element>;
    { g.random_target(rng) } -> std::same_as<typename G::Target>;
    { g.random_exponent(rng) } -> std::same_as<std::uint64_t>;
    { g.random_exponent_p(rng) } -> std::same_as<std::uint64_t>;
    { g.modulus() } -> std::convertible_to<std::uint64_t>;
};

template <BilinearGroup G>
struct PublicKey {
    using Element = typename G::Element;
    int width = 0;
    Element g_q{};
    Element V{};
    typename G::Target A{};
    std::vector<Element> U, H, W;
    friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

template <BilinearGroup G>
struct SecretKey {
    using Element = typename G::Element;
    int width = 0;
    Element g_q{};
    std::uint64_t a = 0;
    std::vector<Element> u, h, w;
    Element g{};
    Element v{};
    friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

template <BilinearGroup G>
struct Ciphertext {
    using Element = typename G::Element;
    int width = 0;
    typename G::Target c_prime{};
    Element c0{};
    std::vector<Element> c1, c2;  // by position

    [[nodiscard]] std::size_t component_count() const { return 2 + c1.size() + c2.size(); }
    friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

template <BilinearGroup G>
struct Token {
    using Element = typename G::Element;
    struct Position {
        int index = 0;
        Element k1{};
        Element k2{};
        friend bool operator==(const Position&, const Position&) = default;
    };
    Pattern pattern;
    Element k0{};
    std::vector<Position> positions;  // non-star positions, ascending

    [[nodiscard]] int width() const { return pattern.width; }
    friend bool operator==(const Token&, const Token&) = default;
};

/// Recovered target-group value plus the number of pairings spent.
template <BilinearGroup G>
struct Recovery {
    typename G::Target value{};
    std::size_t pairings = 0;
};

struct QueryResult {
    std::optional<std::uint32_t> message;  // empty: no match
    std::size_t pairings = 0;

    [[nodiscard]] bool matched() const { return message.has_value(); }
};

/// Registry of valid messages: small identifiers mapped to distinct random
/// target-group elements. Anything else a query recovers is a non-match.
template <BilinearGroup G>
class MessageSpace {
public:
    MessageSpace(const G& group, std::uint32_t count, std::uint64_t seed) {
        if (count == 0) throw std::invalid_argument("message space needs at least one message");
        SplitMix64 rng(seed);
        while (by_id_.size() < count) {
            const auto t = group.random_target(rng);
            if (t == group.gt_identity() || by_value_.contains(t)) continue;
            by_value_.emplace(t, static_cast<std::uint32_t>(by_id_.size()));
            by_id_.push_back(t);
        }
    }

    [[nodiscard]] std::uint32_t size() const { return static_cast<std::uint32_t>(by_id_.size()); }
    [[nodiscard]] const typename G::Target& message(std::uint32_t id) const {
        if (id >= by_id_.size()) throw std::out_of_range("unknown message id");
        return by_id_[id];
    }
    [[nodiscard]] std::optional<std::uint32_t> lookup(const typename G::Target& value) const {
        const auto it = by_value_.find(value);
        if (it == by_value_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::vector<typename G::Target> by_id_;
    std::map<typename G::Target, std::uint32_t> by_value_;
};

template <BilinearGroup G>
class Hve {
public:
    using Element = typename G::Element;
    using Target = typename G::Target;

    explicit Hve(G group) : group_(std::move(group)) {}

    [[nodiscard]] const G& group() const { return group_; }

    struct KeyPair {
        PublicKey<G> pk;
        SecretKey<G> sk;
    };

    [[nodiscard]] KeyPair setup(int width, SplitMix64& rng) const {
        if (width < 1 || width > kMaxCodewordWidth) throw std::invalid_argument("HVE width out of range");
        KeyPair out;
        SecretKey<G>& sk = out.sk;
        PublicKey<G>& pk = out.pk;
        sk.width = pk.width = width;
        sk.g_q = pk.g_q = group_.random_q_generator(rng);
        sk.a = group_.random_exponent_p(rng);
        sk.g = group_.random_p_element(rng);
        sk.v = group_.random_p_element(rng);
        pk.V = group_.mul(sk.v, blind(sk.g_q, rng));
        pk.A = group_.gt_pow(group_.pair(sk.g, sk.v), sk.a);
        for (int i = 0; i < width; ++i) {
            sk.u.push_back(group_.random_p_element(rng));
            sk.h.push_back(group_.random_p_element(rng));
            sk.w.push_back(group_.random_p_element(rng));
            pk.U.push_back(group_.mul(sk.u.back(), blind(sk.g_q, rng)));
            pk.H.push_back(group_.mul(sk.h.back(), blind(sk.g_q, rng)));
            pk.W.push_back(group_.mul(sk.w.back(), blind(sk.g_q, rng)));
        }
        return out;
    }

    [[nodiscard]] Ciphertext<G> encrypt(const PublicKey<G>& pk, Codeword attribute, const Target& message,
                                        SplitMix64& rng) const {
        if (attribute.width != pk.width) throw std::invalid_argument("attribute width differs from key width");
        const std::uint64_t s = group_.random_exponent(rng);
        Ciphertext<G> c;
        c.width = pk.width;
        c.c_prime = group_.gt_mul(message, group_.gt_pow(pk.A, s));
        c.c0 = group_.mul(group_.pow(pk.V, s), blind(pk.g_q, rng));
        for (int i = 0; i < pk.width; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            Element base = pk.H[idx];
            if (attribute.bit(i)) base = group_.mul(pk.U[idx], base);
            c.c1.push_back(group_.mul(group_.pow(base, s), blind(pk.g_q, rng)));
            c.c2.push_back(group_.mul(group_.pow(pk.W[idx], s), blind(pk.g_q, rng)));
        }
        return c;
    }

    [[nodiscard]] Token<G> gen_token(const SecretKey<G>& sk, const Pattern& pattern, SplitMix64& rng) const {
        if (pattern.width != sk.width) throw std::invalid_argument("pattern width differs from key width");
        Token<G> tk;
        tk.pattern = pattern;
        tk.k0 = group_.pow(sk.g, sk.a);
        for (int i = 0; i < sk.width; ++i) {
            if (pattern.is_star(i)) continue;
            const auto idx = static_cast<std::size_t>(i);
            const std::uint64_t r1 = group_.random_exponent_p(rng);
            const std::uint64_t r2 = group_.random_exponent_p(rng);
            Element base = sk.h[idx];
            if (((pattern.value >> i) & 1U) != 0) base = group_.mul(sk.u[idx], base);
            tk.k0 = group_.mul(tk.k0, group_.mul(group_.pow(base, r1), group_.pow(sk.w[idx], r2)));
            tk.positions.push_back({i, group_.pow(sk.v, r1), group_.pow(sk.v, r2)});
        }
        return tk;
    }

    /// C' * prod_j e(C_j1, K_j1) e(C_j2, K_j2) / e(C_0, K_0).
    [[nodiscard]] Recovery<G> recover(const Ciphertext<G>& c, const Token<G>& tk) const {
        if (c.width != tk.width()) throw std::invalid_argument("ciphertext and token widths differ");
        Recovery<G> out;
        Target acc = c.c_prime;
        for (const auto& pos : tk.positions) {
            const auto idx = static_cast<std::size_t>(pos.index);
            acc = group_.gt_mul(acc, group_.pair(c.c1[idx], pos.k1));
            acc = group_.gt_mul(acc, group_.pair(c.c2[idx], pos.k2));
            out.pairings += 2;
        }
        acc = group_.gt_div(acc, group_.pair(c.c0, tk.k0));
        out.pairings += 1;
        out.value = acc;
        return out;
    }

    [[nodiscard]] QueryResult query(const Ciphertext<G>& c, const Token<G>& tk, const MessageSpace<G>& messages) const {
        const Recovery<G> r = recover(c, tk);
        return {messages.lookup(r.value), r.pairings};
    }

private:
    Element blind(const Element& g_q, SplitMix64& rng) const { return group_.pow(g_q, uniform_below(rng, group_.modulus())); }

    G group_;
};

using ReferenceHve = Hve<ReferenceGroup>;

}  // namespace alertzone::hve
