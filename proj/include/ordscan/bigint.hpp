#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace ordscan {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt ipow(BigInt base, unsigned e) {
    BigInt r = 1;
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

inline uint64_t upow(uint64_t base, unsigned e) {
    uint64_t r = 1;
    while (e--) r *= base;
    return r;
}

/// floor(sqrt(n)) for n >= 0.
inline BigInt isqrt_floor(const BigInt& n) {
    return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const BigInt& n, BigInt* root = nullptr) {
    if (n < 0) return false;
    BigInt s = isqrt_floor(n);
    if (s * s != n) return false;
    if (root) *root = s;
    return true;
}

/// Exact p-adic valuation of a nonzero integer.
inline long padic_val(BigInt x, const BigInt& p) {
    long v = 0;
    if (x == 0) return -1;  // callers must handle zero separately
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1u) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1u;
    }
    return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1u) == 0) {
        d >>= 1u;
        ++s;
    }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Decomposes q = p^f with p prime; nullopt if q is not a prime power (or < 2).
inline std::optional<std::pair<uint64_t, int>> prime_power_decompose(uint64_t q) {
    if (q < 2) return std::nullopt;
    if (is_prime_u64(q)) return std::make_pair(q, 1);
    for (uint64_t p = 2; p * p <= q; ++p) {
        if (q % p != 0) continue;
        if (!is_prime_u64(p)) return std::nullopt;
        int f = 0;
        uint64_t r = q;
        while (r % p == 0) {
            r /= p;
            ++f;
        }
        if (r != 1) return std::nullopt;
        return std::make_pair(p, f);
    }
    return std::nullopt;
}

inline std::vector<uint32_t> primes_up_to(uint32_t n) {
    std::vector<bool> sieve(static_cast<size_t>(n) + 1, true);
    std::vector<uint32_t> out;
    for (uint32_t i = 2; i <= n; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (uint64_t j = static_cast<uint64_t>(i) * i; j <= n; j += i) sieve[static_cast<size_t>(j)] = false;
    }
    return out;
}

/// Kronecker symbol (a|n), n any nonzero integer.
inline int kronecker(long long a, long long n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    if (v & 1) {
        long long am = ((a % 8) + 8) % 8;
        if (am == 3 || am == 5) sign = -sign;
        if (am % 2 == 0) return 0;
    }
    a = ((a % n) + n) % n;
    while (a != 0) {
        int w = 0;
        while ((a & 1) == 0) {
            a >>= 1;
            ++w;
        }
        if (w & 1) {
            long long nm = n % 8;
            if (nm == 3 || nm == 5) sign = -sign;
        }
        // quadratic reciprocity for odd positive a, n
        if ((a % 4 == 3) && (n % 4 == 3)) sign = -sign;
        long long t = n % a;
        n = a;
        a = t;
    }
    return n == 1 ? sign : 0;
}

}  // namespace ordscan
