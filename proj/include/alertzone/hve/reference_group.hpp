#pragma once

// Composite-order symmetric bilinear group held in exponent form. Every
// element is g^x for a fixed generator g of the order-N cyclic group, and
// is stored as x split by the Chinese remainder theorem into (x mod P,
// x mod Q). The pairing e(g^x, g^y) = e(g,g)^{xy} then multiplies the
// residues. All group identities hold exactly. Discrete logs are free, so
// this backend has no security whatsoever; it exists for testing the
// scheme's algebra and counting operations.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "alertzone/core/random.hpp"
#include "alertzone/hve/modular.hpp"

namespace alertzone::hve {

struct GroupParams {
    u64 p = 0;
    u64 q = 0;

    [[nodiscard]] u64 modulus() const { return p * q; }
    friend bool operator==(const GroupParams&, const GroupParams&) = default;

    void validate() const {
        if (!is_prime(p) || !is_prime(q)) throw std::invalid_argument("group parameters: P and Q must be prime");
        if (p == q) throw std::invalid_argument("group parameters: P and Q must differ");
        if (p >= (u64{1} << 32) || q >= (u64{1} << 32)) throw std::invalid_argument("group parameters: primes above 32 bits");
    }

    /// Two distinct primes of `bits` bits each, drawn deterministically from seed.
    static GroupParams generate(int bits, std::uint64_t seed) {
        SplitMix64 rng(seed);
        GroupParams out;
        out.p = random_prime(bits, rng);
        do {
            out.q = random_prime(bits, rng);
        } while (out.q == out.p);
        return out;
    }
};

class ReferenceGroup {
public:
    struct Element {
        u64 p_part = 0;  // exponent mod P
        u64 q_part = 0;  // exponent mod Q
        friend auto operator<=>(const Element&, const Element&) = default;
    };
    struct Target {
        u64 p_part = 0;
        u64 q_part = 0;
        friend auto operator<=>(const Target&, const Target&) = default;
    };

    explicit ReferenceGroup(GroupParams params) : params_(params) { params_.validate(); }

    [[nodiscard]] const GroupParams& params() const { return params_; }
    [[nodiscard]] u64 order_p() const { return params_.p; }
    [[nodiscard]] u64 order_q() const { return params_.q; }
    [[nodiscard]] u64 modulus() const { return params_.modulus(); }

    [[nodiscard]] Element generator() const { return {1, 1}; }
    [[nodiscard]] Element identity() const { return {0, 0}; }
    [[nodiscard]] Element mul(Element a, Element b) const {
        return {addmod(a.p_part, b.p_part, params_.p), addmod(a.q_part, b.q_part, params_.q)};
    }
    [[nodiscard]] Element pow(Element a, u64 e) const {
        return {mulmod(a.p_part, e % params_.p, params_.p), mulmod(a.q_part, e % params_.q, params_.q)};
    }
    [[nodiscard]] Target pair(Element a, Element b) const {
        return {mulmod(a.p_part, b.p_part, params_.p), mulmod(a.q_part, b.q_part, params_.q)};
    }

    [[nodiscard]] Target gt_identity() const { return {0, 0}; }
    [[nodiscard]] Target gt_mul(Target a, Target b) const {
        return {addmod(a.p_part, b.p_part, params_.p), addmod(a.q_part, b.q_part, params_.q)};
    }
    [[nodiscard]] Target gt_div(Target a, Target b) const {
        return {submod(a.p_part, b.p_part, params_.p), submod(a.q_part, b.q_part, params_.q)};
    }
    [[nodiscard]] Target gt_pow(Target a, u64 e) const {
        return {mulmod(a.p_part, e % params_.p, params_.p), mulmod(a.q_part, e % params_.q, params_.q)};
    }

    /// x^P == 1 iff x lies in the order-P subgroup.
    [[nodiscard]] bool in_subgroup_p(Element a) const { return a.q_part == 0; }
    [[nodiscard]] bool in_subgroup_q(Element a) const { return a.p_part == 0; }

    [[nodiscard]] bool valid(Element a) const { return a.p_part < params_.p && a.q_part < params_.q; }
    [[nodiscard]] bool valid(Target a) const { return a.p_part < params_.p && a.q_part < params_.q; }

    /// Non-identity element of the order-P subgroup.
    [[nodiscard]] Element random_p_element(SplitMix64& rng) const { return {1 + uniform_below(rng, params_.p - 1), 0}; }
    /// Uniform element of the order-Q subgroup (identity allowed).
    [[nodiscard]] Element random_q_element(SplitMix64& rng) const { return {0, uniform_below(rng, params_.q)}; }
    /// Generator of the order-Q subgroup.
    [[nodiscard]] Element random_q_generator(SplitMix64& rng) const { return {0, 1 + uniform_below(rng, params_.q - 1)}; }
    [[nodiscard]] Element random_element(SplitMix64& rng) const {
        return {uniform_below(rng, params_.p), uniform_below(rng, params_.q)};
    }
    [[nodiscard]] Target random_target(SplitMix64& rng) const {
        return {uniform_below(rng, params_.p), uniform_below(rng, params_.q)};
    }
    /// Exponent in Z_N that is non-zero modulo P.
    [[nodiscard]] u64 random_exponent(SplitMix64& rng) const {
        for (;;) {
            const u64 s = uniform_below(rng, modulus());
            if (s % params_.p != 0) return s;
        }
    }
    /// Exponent in [1, P-1].
    [[nodiscard]] u64 random_exponent_p(SplitMix64& rng) const { return 1 + uniform_below(rng, params_.p - 1); }

private:
    GroupParams params_;
};

}  // namespace alertzone::hve
