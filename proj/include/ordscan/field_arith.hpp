#pragma once

#include "ordscan/bigint.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ordscan {

inline constexpr int kMaxExtDegree = 4;

/// Element of F_{p^r}, coordinates in the power basis of the context modulus.
/// Coordinates beyond the extension degree are zero.
struct FqElem {
    std::array<uint32_t, kMaxExtDegree> c{0, 0, 0, 0};

    friend bool operator==(const FqElem&, const FqElem&) = default;
};

enum class CubeClass { Zero, Cube, NonCubeA, NonCubeB };

namespace detail {

// Dense polynomial arithmetic mod p, ascending coefficients; used only while
// searching for the field modulus, so clarity over speed.
using PolyP = std::vector<uint32_t>;

inline void trim(PolyP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyP polymod(PolyP a, const PolyP& m, uint32_t p) {
    // m monic
    while (a.size() >= m.size()) {
        uint64_t lead = a.back();
        size_t shift = a.size() - m.size();
        if (lead != 0) {
            for (size_t i = 0; i < m.size(); ++i) {
                uint64_t sub = lead * m[i] % p;
                uint64_t cur = a[i + shift];
                a[i + shift] = static_cast<uint32_t>((cur + p - sub) % p);
            }
        }
        a.pop_back();
        trim(a);
        if (a.size() < m.size()) break;
    }
    trim(a);
    return a;
}

inline PolyP polymulmod(const PolyP& a, const PolyP& b, const PolyP& m, uint32_t p) {
    if (a.empty() || b.empty()) return {};
    PolyP prod(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            prod[i + j] = static_cast<uint32_t>((prod[i + j] + static_cast<uint64_t>(a[i]) * b[j]) % p);
        }
    }
    return polymod(std::move(prod), m, p);
}

// x^(p^k) mod m via repeated p-th powering.
inline PolyP frobenius_power(const PolyP& m, uint32_t p, int k) {
    PolyP x{0, 1};
    x = polymod(std::move(x), m, p);
    for (int i = 0; i < k; ++i) {
        // raise to the p-th power by square-and-multiply
        PolyP base = x;
        PolyP acc{1};
        uint64_t e = p;
        while (e) {
            if (e & 1u) acc = polymulmod(acc, base, m, p);
            base = polymulmod(base, base, m, p);
            e >>= 1u;
        }
        x = std::move(acc);
    }
    return x;
}

inline PolyP polygcd(PolyP a, PolyP b, uint32_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // make b monic for the division
        uint32_t lead = b.back();
        if (lead != 1) {
            uint64_t inv = 1, base = lead, e = p - 2;
            while (e) {
                if (e & 1u) inv = inv * base % p;
                base = base * base % p;
                e >>= 1u;
            }
            for (auto& ci : b) ci = static_cast<uint32_t>(ci * inv % p);
        }
        PolyP r = polymod(std::move(a), b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// Rabin irreducibility test for monic f of degree r <= 4 over F_p.
inline bool is_irreducible(const PolyP& f, uint32_t p) {
    const int r = static_cast<int>(f.size()) - 1;
    if (r == 1) return true;
    // gcd(x^(p^(r/s)) - x, f) must be 1 for each prime s | r; the largest
    // proper-subfield degree suffices for r <= 4 since subfields are nested.
    const int sub = (r == 4) ? 2 : 1;
    PolyP xp = frobenius_power(f, p, sub);
    PolyP diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = static_cast<uint32_t>((diff[1] + p - 1) % p);
    trim(diff);
    PolyP g = polygcd(f, diff, p);
    if (!(g.size() == 1)) return false;
    // and x^(p^r) == x mod f
    PolyP xr = frobenius_power(f, p, r);
    PolyP x{0, 1};
    return polymod(std::move(xr), f, p) == polymod(std::move(x), f, p);
}

}  // namespace detail

/// Immutable description of F_{p^r}, r <= 4. All element operations are pure;
/// contexts can be shared freely across threads.
class FieldCtx {
  public:
    /// Builds F_{p^r} on the lexicographically smallest monic irreducible of
    /// degree r (coefficients compared low-degree-first as integers in [0,p)).
    static FieldCtx build_extension(uint32_t p, int r) {
        if (!is_prime_u64(p)) throw std::invalid_argument("build_extension: p = " + std::to_string(p) + " is not prime");
        if (r < 1 || r > kMaxExtDegree) throw std::invalid_argument("build_extension: degree out of range");
        FieldCtx ctx;
        ctx.p_ = p;
        ctx.r_ = r;
        ctx.q_ = upow(p, static_cast<unsigned>(r));
        ctx.modulus_ = find_modulus(p, r);
        ctx.init_reduction_rows();
        if (ctx.q_ % 3 == 1) ctx.omega_ = ctx.find_omega();
        return ctx;
    }

    uint32_t p() const { return p_; }
    int r() const { return r_; }
    uint64_t q() const { return q_; }
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    FqElem zero() const { return FqElem{}; }
    FqElem one() const {
        FqElem e;
        e.c[0] = 1 % p_;
        return e;
    }
    FqElem from_residue(uint64_t n) const {
        FqElem e;
        e.c[0] = static_cast<uint32_t>(n % p_);
        return e;
    }

    bool is_zero(const FqElem& a) const {
        for (int i = 0; i < r_; ++i)
            if (a.c[i]) return false;
        return true;
    }

    FqElem add(const FqElem& a, const FqElem& b) const {
        FqElem out;
        for (int i = 0; i < r_; ++i) {
            uint32_t s = a.c[i] + b.c[i];
            out.c[i] = s >= p_ ? s - p_ : s;
        }
        return out;
    }

    FqElem sub(const FqElem& a, const FqElem& b) const {
        FqElem out;
        for (int i = 0; i < r_; ++i) {
            uint32_t s = a.c[i] + p_ - b.c[i];
            out.c[i] = s >= p_ ? s - p_ : s;
        }
        return out;
    }

    FqElem neg(const FqElem& a) const { return sub(zero(), a); }

    FqElem mul(const FqElem& a, const FqElem& b) const {
        // schoolbook product then fold degrees r..2r-2 with the precomputed
        // rows; coefficient magnitudes stay below 2^63 for p < 2^20
        uint64_t acc[2 * kMaxExtDegree - 1] = {0};
        for (int i = 0; i < r_; ++i) {
            if (a.c[i] == 0) continue;
            for (int j = 0; j < r_; ++j) acc[i + j] += static_cast<uint64_t>(a.c[i]) * b.c[j];
        }
        for (int k = 2 * r_ - 2; k >= r_; --k) {
            uint64_t v = acc[k] % p_;
            acc[k] = 0;
            if (v == 0) continue;
            const auto& row = red_[k - r_];
            for (int j = 0; j < r_; ++j) acc[j] += v * row[j];
        }
        FqElem out;
        for (int j = 0; j < r_; ++j) out.c[j] = static_cast<uint32_t>(acc[j] % p_);
        return out;
    }

    FqElem pow(FqElem base, uint64_t e) const {
        FqElem out = one();
        while (e) {
            if (e & 1u) out = mul(out, base);
            base = mul(base, base);
            e >>= 1u;
        }
        return out;
    }

    /// Index of an element in the deterministic coordinate order (base-p digits).
    uint64_t index(const FqElem& a) const {
        uint64_t idx = 0;
        for (int i = r_ - 1; i >= 0; --i) idx = idx * p_ + a.c[i];
        return idx;
    }

    FqElem element(uint64_t idx) const {
        FqElem e;
        for (int i = 0; i < r_; ++i) {
            e.c[i] = static_cast<uint32_t>(idx % p_);
            idx /= p_;
        }
        return e;
    }

    /// Odometer step through the coordinate order; returns false after the
    /// last element wraps back to zero.
    bool next_element(FqElem& e) const {
        for (int i = 0; i < r_; ++i) {
            if (++e.c[i] < p_) return true;
            e.c[i] = 0;
        }
        return false;
    }

    /// The smallest element of multiplicative order 3 (only when q = 1 mod 3).
    const FqElem& omega() const {
        if (q_ % 3 != 1) throw std::logic_error("omega: q != 1 mod 3");
        return omega_;
    }

  private:
    FieldCtx() = default;

    static std::vector<uint32_t> find_modulus(uint32_t p, int r) {
        if (r == 1) return {0};  // T - 0 placeholder for the prime field
        std::vector<uint32_t> c(static_cast<size_t>(r), 0);
        // lexicographic scan: c[0] most significant
        while (true) {
            detail::PolyP f(c.begin(), c.end());
            f.push_back(1);
            if (detail::is_irreducible(f, p)) return c;
            int i = r - 1;
            while (i >= 0 && ++c[static_cast<size_t>(i)] == p) c[static_cast<size_t>(i--)] = 0;
            if (i < 0) throw std::logic_error("find_modulus: exhausted search space");
        }
    }

    void init_reduction_rows() {
        // row k: coordinates of T^(r+k) for k = 0..r-2
        if (r_ == 1) return;
        std::array<uint32_t, kMaxExtDegree> cur{};
        for (int j = 0; j < r_; ++j) cur[j] = (p_ - modulus_[static_cast<size_t>(j)]) % p_;  // T^r
        red_[0] = cur;
        for (int k = 1; k <= r_ - 2; ++k) {
            // multiply by T, then reduce the overflow coefficient
            uint64_t top = cur[static_cast<size_t>(r_ - 1)];
            std::array<uint32_t, kMaxExtDegree> nxt{};
            for (int j = r_ - 1; j >= 1; --j) nxt[j] = cur[static_cast<size_t>(j - 1)];
            nxt[0] = 0;
            for (int j = 0; j < r_; ++j) {
                uint64_t v = nxt[static_cast<size_t>(j)] + top * red_[0][static_cast<size_t>(j)];
                nxt[static_cast<size_t>(j)] = static_cast<uint32_t>(v % p_);
            }
            cur = nxt;
            red_[static_cast<size_t>(k)] = cur;
        }
    }

    FqElem find_omega() const {
        // any non-cube x gives w = x^((q-1)/3) of order 3; the order-3 set is
        // {w, w^2} = {w, -1-w}, pick the index-smaller for determinism
        const uint64_t e = (q_ - 1) / 3;
        FqElem x = zero();
        while (next_element(x)) {
            if (is_zero(x)) continue;
            FqElem w = pow(x, e);
            if (w == one()) continue;
            FqElem w2 = sub(neg(one()), w);
            return index(w) <= index(w2) ? w : w2;
        }
        throw std::logic_error("find_omega: no generator found");
    }

    uint32_t p_ = 0;
    int r_ = 0;
    uint64_t q_ = 0;
    std::vector<uint32_t> modulus_;                                 // c_0..c_{r-1} of the monic modulus
    std::array<std::array<uint32_t, kMaxExtDegree>, 3> red_{};      // T^r..T^(2r-2)
    FqElem omega_;
};

/// Coset of the cube map. For q = 2 mod 3 cubing is a bijection and only
/// Zero/Cube occur; for q = 1 mod 3 the two nontrivial cosets are labelled by
/// x^((q-1)/3) landing on omega or omega^2.
inline CubeClass cube_class(const FqElem& x, const FieldCtx& ctx) {
    if (ctx.is_zero(x)) return CubeClass::Zero;
    if (ctx.q() % 3 != 1) return CubeClass::Cube;
    FqElem t = ctx.pow(x, (ctx.q() - 1) / 3);
    if (t == ctx.one()) return CubeClass::Cube;
    if (t == ctx.omega()) return CubeClass::NonCubeA;
    return CubeClass::NonCubeB;
}

/// Number of y with y^3 = x.
inline int fiber_size(const FqElem& x, const FieldCtx& ctx) {
    if (ctx.is_zero(x)) return 1;
    if (ctx.q() % 3 != 1) return 1;
    return cube_class(x, ctx) == CubeClass::Cube ? 3 : 0;
}

/// Precomputed fiber sizes of y -> y^m over all of F_q, indexed by element
/// index. Built in O(q); the scan kernels only do table lookups.
class FiberTable {
  public:
    FiberTable(const FieldCtx& ctx, int m) : counts_(ctx.q(), 0) {
        FqElem y = ctx.zero();
        do {
            FqElem ym = y;
            for (int i = 1; i < m; ++i) ym = ctx.mul(ym, y);
            ++counts_[ctx.index(ym)];
        } while (ctx.next_element(y));
    }

    uint8_t operator[](uint64_t idx) const { return counts_[idx]; }
    size_t size() const { return counts_.size(); }

  private:
    std::vector<uint8_t> counts_;
};

}  // namespace ordscan
