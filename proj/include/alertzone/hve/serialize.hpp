#pragma once

// Binary format for keys, ciphertexts and tokens over the reference group.
//
//   byte     version (1)
//   byte     object tag: 'P' public key, 'S' secret key, 'C' ciphertext, 'T' token
//   int      P, int Q
//   ...      object fields
//
// Every integer is a big-endian u16 byte count followed by that many
// big-endian bytes with no leading zeros (zero is the empty string). An
// element or target value is two integers (residue mod P, residue mod Q).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "alertzone/gray/codeword.hpp"
#include "alertzone/hve/hve.hpp"
#include "alertzone/hve/reference_group.hpp"

namespace alertzone::hve {

inline constexpr std::uint8_t kFormatVersion = 1;

class SerializeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ByteWriter {
public:
    void byte(std::uint8_t b) { out_.push_back(b); }

    void integer(std::uint64_t x) {
        std::vector<std::uint8_t> digits;
        while (x != 0) {
            digits.push_back(static_cast<std::uint8_t>(x & 0xFFU));
            x >>= 8;
        }
        byte(static_cast<std::uint8_t>(digits.size() >> 8));
        byte(static_cast<std::uint8_t>(digits.size() & 0xFFU));
        for (auto it = digits.rbegin(); it != digits.rend(); ++it) byte(*it);
    }

    template <class T>
    void pair(const T& e) {
        integer(e.p_part);
        integer(e.q_part);
    }

    void header(char tag, const GroupParams& params) {
        byte(kFormatVersion);
        byte(static_cast<std::uint8_t>(tag));
        integer(params.p);
        integer(params.q);
    }

    [[nodiscard]] std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class ByteReader {
public:
    explicit ByteReader(const std::vector<std::uint8_t>& in) : in_(in) {}

    std::uint8_t byte() {
        if (pos_ >= in_.size()) throw SerializeError("truncated input");
        return in_[pos_++];
    }

    std::uint64_t integer() {
        const std::size_t len = (std::size_t{byte()} << 8) | byte();
        if (len > 8) throw SerializeError("integer wider than 64 bits");
        std::uint64_t x = 0;
        for (std::size_t i = 0; i < len; ++i) {
            const std::uint8_t b = byte();
            if (i == 0 && b == 0) throw SerializeError("integer has a leading zero byte");
            x = (x << 8) | b;
        }
        return x;
    }

    template <class T>
    T pair(const ReferenceGroup& group) {
        T e{};
        e.p_part = integer();
        e.q_part = integer();
        if (!group.valid(e)) throw SerializeError("group element residue out of range");
        return e;
    }

    ReferenceGroup header(char expected_tag) {
        if (byte() != kFormatVersion) throw SerializeError("unsupported format version");
        const auto tag = static_cast<char>(byte());
        if (tag != expected_tag) throw SerializeError(std::string("expected object tag '") + expected_tag + "', found '" + tag + "'");
        GroupParams params;
        params.p = integer();
        params.q = integer();
        try {
            return ReferenceGroup(params);
        } catch (const std::invalid_argument& e) {
            throw SerializeError(e.what());
        }
    }

    std::size_t count(std::size_t limit) {
        const std::uint64_t n = integer();
        if (n > limit) throw SerializeError("element count out of range");
        return static_cast<std::size_t>(n);
    }

    void finish() const {
        if (pos_ != in_.size()) throw SerializeError("trailing bytes after object");
    }

private:
    const std::vector<std::uint8_t>& in_;
    std::size_t pos_ = 0;
};

using RefElement = ReferenceGroup::Element;
using RefTarget = ReferenceGroup::Target;

namespace detail {

inline void write_elements(ByteWriter& w, const std::vector<RefElement>& v) {
    for (const auto& e : v) w.pair(e);
}

inline std::vector<RefElement> read_elements(ByteReader& r, const ReferenceGroup& g, std::size_t n) {
    std::vector<RefElement> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(r.pair<RefElement>(g));
    return out;
}

inline int read_width(ByteReader& r) {
    const std::uint64_t width = r.integer();
    if (width < 1 || width > static_cast<std::uint64_t>(kMaxCodewordWidth)) throw SerializeError("width out of range");
    return static_cast<int>(width);
}

}  // namespace detail

inline std::vector<std::uint8_t> serialize(const ReferenceGroup& g, const PublicKey<ReferenceGroup>& pk) {
    ByteWriter w;
    w.header('P', g.params());
    w.integer(static_cast<std::uint64_t>(pk.width));
    w.pair(pk.g_q);
    w.pair(pk.V);
    w.pair(pk.A);
    detail::write_elements(w, pk.U);
    detail::write_elements(w, pk.H);
    detail::write_elements(w, pk.W);
    return w.take();
}

inline std::vector<std::uint8_t> serialize(const ReferenceGroup& g, const SecretKey<ReferenceGroup>& sk) {
    ByteWriter w;
    w.header('S', g.params());
    w.integer(static_cast<std::uint64_t>(sk.width));
    w.pair(sk.g_q);
    w.integer(sk.a);
    w.pair(sk.g);
    w.pair(sk.v);
    detail::write_elements(w, sk.u);
    detail::write_elements(w, sk.h);
    detail::write_elements(w, sk.w);
    return w.take();
}

inline std::vector<std::uint8_t> serialize(const ReferenceGroup& g, const Ciphertext<ReferenceGroup>& c) {
    ByteWriter w;
    w.header('C', g.params());
    w.integer(static_cast<std::uint64_t>(c.width));
    w.pair(c.c_prime);
    w.pair(c.c0);
    detail::write_elements(w, c.c1);
    detail::write_elements(w, c.c2);
    return w.take();
}

inline std::vector<std::uint8_t> serialize(const ReferenceGroup& g, const Token<ReferenceGroup>& tk) {
    ByteWriter w;
    w.header('T', g.params());
    w.integer(static_cast<std::uint64_t>(tk.pattern.width));
    w.integer(tk.pattern.care);
    w.integer(tk.pattern.value);
    w.pair(tk.k0);
    for (const auto& pos : tk.positions) {
        w.pair(pos.k1);
        w.pair(pos.k2);
    }
    return w.take();
}

inline PublicKey<ReferenceGroup> deserialize_public_key(const std::vector<std::uint8_t>& bytes, ReferenceGroup* group_out = nullptr) {
    ByteReader r(bytes);
    const ReferenceGroup g = r.header('P');
    PublicKey<ReferenceGroup> pk;
    pk.width = detail::read_width(r);
    const auto n = static_cast<std::size_t>(pk.width);
    pk.g_q = r.pair<RefElement>(g);
    pk.V = r.pair<RefElement>(g);
    pk.A = r.pair<RefTarget>(g);
    pk.U = detail::read_elements(r, g, n);
    pk.H = detail::read_elements(r, g, n);
    pk.W = detail::read_elements(r, g, n);
    r.finish();
    if (group_out != nullptr) *group_out = g;
    return pk;
}

inline SecretKey<ReferenceGroup> deserialize_secret_key(const std::vector<std::uint8_t>& bytes, ReferenceGroup* group_out = nullptr) {
    ByteReader r(bytes);
    const ReferenceGroup g = r.header('S');
    SecretKey<ReferenceGroup> sk;
    sk.width = detail::read_width(r);
    const auto n = static_cast<std::size_t>(sk.width);
    sk.g_q = r.pair<RefElement>(g);
    sk.a = r.integer();
    if (sk.a >= g.order_p()) throw SerializeError("secret exponent out of range");
    sk.g = r.pair<RefElement>(g);
    sk.v = r.pair<RefElement>(g);
    sk.u = detail::read_elements(r, g, n);
    sk.h = detail::read_elements(r, g, n);
    sk.w = detail::read_elements(r, g, n);
    for (const auto* list : {&sk.u, &sk.h, &sk.w}) {
        for (const auto& e : *list) {
            if (!g.in_subgroup_p(e)) throw SerializeError("secret element outside the order-P subgroup");
        }
    }
    if (!g.in_subgroup_p(sk.g) || !g.in_subgroup_p(sk.v)) throw SerializeError("secret element outside the order-P subgroup");
    r.finish();
    if (group_out != nullptr) *group_out = g;
    return sk;
}

inline Ciphertext<ReferenceGroup> deserialize_ciphertext(const std::vector<std::uint8_t>& bytes, ReferenceGroup* group_out = nullptr) {
    ByteReader r(bytes);
    const ReferenceGroup g = r.header('C');
    Ciphertext<ReferenceGroup> c;
    c.width = detail::read_width(r);
    const auto n = static_cast<std::size_t>(c.width);
    c.c_prime = r.pair<RefTarget>(g);
    c.c0 = r.pair<RefElement>(g);
    c.c1 = detail::read_elements(r, g, n);
    c.c2 = detail::read_elements(r, g, n);
    r.finish();
    if (group_out != nullptr) *group_out = g;
    return c;
}

inline Token<ReferenceGroup> deserialize_token(const std::vector<std::uint8_t>& bytes, ReferenceGroup* group_out = nullptr) {
    ByteReader r(bytes);
    const ReferenceGroup g = r.header('T');
    Token<ReferenceGroup> tk;
    const int width = detail::read_width(r);
    const std::uint64_t care = r.integer();
    const std::uint64_t value = r.integer();
    if (care > Pattern::full_mask(width) || (value & ~care) != 0) throw SerializeError("malformed token pattern");
    tk.pattern = Pattern(static_cast<std::uint32_t>(care), static_cast<std::uint32_t>(value), width);
    tk.k0 = r.pair<RefElement>(g);
    for (int i = 0; i < width; ++i) {
        if (tk.pattern.is_star(i)) continue;
        const RefElement k1 = r.pair<RefElement>(g);
        const RefElement k2 = r.pair<RefElement>(g);
        tk.positions.push_back({i, k1, k2});
    }
    r.finish();
    if (group_out != nullptr) *group_out = g;
    return tk;
}

}  // namespace alertzone::hve
