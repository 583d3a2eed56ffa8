#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "alertzone/core/random.hpp"

namespace alertzone::hve {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<u128>(a) * b) % m); }

inline u64 addmod(u64 a, u64 b, u64 m) {
    const u128 s = static_cast<u128>(a) + b;
    return static_cast<u64>(s % m);
}

inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : m - (b - a); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if ((exp & 1U) != 0) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Modular inverse by extended Euclid; throws when gcd(a, m) != 1.
inline u64 invmod(u64 a, u64 m) {
    __int128 t = 0;
    __int128 new_t = 1;
    __int128 r = m;
    __int128 new_r = a % m;
    while (new_r != 0) {
        const __int128 q = r / new_r;
        const __int128 t2 = t - q * new_t;
        t = new_t;
        new_t = t2;
        const __int128 r2 = r - q * new_r;
        r = new_r;
        new_r = r2;
    }
    if (r != 1) throw std::domain_error("value is not invertible modulo m");
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    constexpr std::array<u64, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : bases) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : bases) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// First prime at or after a random odd starting point with the top bit
/// set, so the result has exactly `bits` bits.
inline u64 random_prime(int bits, SplitMix64& rng) {
    if (bits < 3 || bits > 32) throw std::invalid_argument("prime size must be between 3 and 32 bits");
    const u64 low = u64{1} << (bits - 1);
    const u64 high = (u64{1} << bits) - 1;
    for (;;) {
        u64 candidate = low | (rng() & (low - 1)) | 1U;
        for (; candidate <= high; candidate += 2) {
            if (is_prime(candidate)) return candidate;
        }
    }
}

}  // namespace alertzone::hve
