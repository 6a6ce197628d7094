#pragma once

#include "ordscan/bigint.hpp"
#include "ordscan/errors.hpp"
#include "ordscan/field_arith.hpp"
#include "ordscan/ratpoly.hpp"

#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace ordscan {

namespace detail {

/// Determinant by Bareiss fraction-free elimination; all divisions exact.
inline BigInt bareiss_det(std::vector<std::vector<BigInt>> m) {
    const size_t n = m.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

inline BigInt resultant(const std::vector<BigInt>& f, const std::vector<BigInt>& g) {
    const int n = static_cast<int>(f.size()) - 1;
    const int m = static_cast<int>(g.size()) - 1;
    if (n < 0 || m < 0) return 0;
    const int dim = n + m;
    std::vector<std::vector<BigInt>> s(static_cast<size_t>(dim), std::vector<BigInt>(static_cast<size_t>(dim), 0));
    for (int row = 0; row < m; ++row)
        for (int k = 0; k <= n; ++k) s[static_cast<size_t>(row)][static_cast<size_t>(row + n - k)] = f[static_cast<size_t>(k)];
    for (int row = 0; row < n; ++row)
        for (int k = 0; k <= m; ++k) s[static_cast<size_t>(m + row)][static_cast<size_t>(row + m - k)] = g[static_cast<size_t>(k)];
    return bareiss_det(std::move(s));
}

}  // namespace detail

/// Polynomial discriminant, exact. Coefficients ascending, lc != 0.
inline BigInt poly_discriminant(const std::vector<BigInt>& f) {
    const int n = static_cast<int>(f.size()) - 1;
    if (n < 1) return 1;
    std::vector<BigInt> df;
    for (int i = 1; i <= n; ++i) df.push_back(f[static_cast<size_t>(i)] * i);
    while (!df.empty() && df.back() == 0) df.pop_back();
    if (df.empty()) return 0;
    BigInt res = detail::resultant(f, df);
    BigInt num = (n % 4 == 2 || n % 4 == 3) ? -res : res;  // (-1)^(n(n-1)/2)
    return num / f.back();
}

enum class CurveModel { Superelliptic, Elliptic };

/// y^m = f(x) over Q: the data source for Frobenius polynomials.
/// Superelliptic means m = 3 with deg f in {4,5}; elliptic means m = 2 with
/// deg f = 3.
struct CurveSpec {
    CurveModel model;
    int m;
    std::vector<BigInt> f;  // ascending, f.back() != 0
    int genus;
    BigInt disc;

    static CurveSpec superelliptic(std::vector<BigInt> f) { return make(CurveModel::Superelliptic, 3, std::move(f)); }
    static CurveSpec elliptic(std::vector<BigInt> f) { return make(CurveModel::Elliptic, 2, std::move(f)); }

    static CurveSpec make(CurveModel model, int m, std::vector<BigInt> f) {
        while (!f.empty() && f.back() == 0) f.pop_back();
        const int deg = static_cast<int>(f.size()) - 1;
        if (model == CurveModel::Superelliptic) {
            if (m != 3 || (deg != 4 && deg != 5)) throw std::invalid_argument("superelliptic curve needs m = 3, deg f in {4,5}");
        } else {
            if (m != 2 || deg != 3) throw std::invalid_argument("elliptic curve needs m = 2, deg f = 3");
        }
        BigInt disc = poly_discriminant(f);
        if (disc == 0) throw std::invalid_argument("f must be separable (nonzero discriminant)");
        const int genus = model == CurveModel::Elliptic ? 1 : (m - 1) * (deg - 1) / 2;
        return CurveSpec{model, m, std::move(f), genus, std::move(disc)};
    }

    int deg_f() const { return static_cast<int>(f.size()) - 1; }

    std::string to_string() const {
        std::ostringstream os;
        os << "y^" << m << " = ";
        bool first = true;
        for (int i = deg_f(); i >= 0; --i) {
            const BigInt& c = f[static_cast<size_t>(i)];
            if (c == 0) continue;
            if (!first) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            BigInt a = c < 0 ? BigInt(-c) : c;
            if (a != 1 || i == 0) os << a;
            if (i >= 1) os << "x";
            if (i >= 2) os << "^" << i;
            first = false;
        }
        return os.str();
    }
};

/// True iff p avoids m, lc(f), disc(f) (and 3 for superelliptic models).
inline bool good_reduction(const CurveSpec& curve, uint32_t p) {
    BigInt pp = p;
    if (curve.f.back() % pp == 0) return false;
    if (curve.disc % pp == 0) return false;
    if (curve.m % p == 0) return false;
    if (curve.model == CurveModel::Superelliptic && p == 3) return false;
    return true;
}

/// Number of points of the smooth projective model over F_{p^r}: the affine
/// fiber count plus the single point at infinity (gcd(m, deg f) = 1 for both
/// supported shapes forces one totally ramified point there).
inline uint64_t count_points(const CurveSpec& curve, uint32_t p, int r) {
    if (!good_reduction(curve, p)) throw std::invalid_argument("count_points: bad reduction at p = " + std::to_string(p));
    if (r < 1 || r > curve.genus) throw std::invalid_argument("count_points: r out of range");
    uint64_t q = upow(p, static_cast<unsigned>(r));
    if (q > (1ull << 28)) throw std::invalid_argument("count_points: F_{p^r} too large for table-based counting");
    const FieldCtx ctx = FieldCtx::build_extension(p, r);
    const FiberTable table(ctx, curve.m);

    // f's coefficients reduced into F_p
    const int deg = curve.deg_f();
    std::vector<uint32_t> fc(static_cast<size_t>(deg) + 1);
    BigInt pp = p;
    for (int i = 0; i <= deg; ++i) {
        BigInt c = curve.f[static_cast<size_t>(i)] % pp;
        if (c < 0) c += pp;
        fc[static_cast<size_t>(i)] = static_cast<uint32_t>(c);
    }

    uint64_t affine = 0;
    FqElem x = ctx.zero();
    do {
        // Horner
        FqElem v = ctx.from_residue(fc[static_cast<size_t>(deg)]);
        for (int i = deg - 1; i >= 0; --i) {
            v = ctx.mul(v, x);
            v.c[0] = (v.c[0] + fc[static_cast<size_t>(i)]) % p;
        }
        affine += table[ctx.index(v)];
    } while (ctx.next_element(x));

    return affine + 1;
}

/// Monic degree-2g Frobenius characteristic polynomial over a field with q
/// elements (q = p^ext). Construction enforces integrality, a_0 = q^g and the
/// functional equation a_i = q^(g-i) a_(2g-i).
struct LPolynomial {
    uint64_t q;
    uint32_t p;
    int ext;  // q = p^ext
    int g;
    std::vector<BigInt> a;  // a_0..a_2g, a_2g = 1

    LPolynomial(uint64_t q_in, int g_in, std::vector<BigInt> coeffs) : q(q_in), g(g_in), a(std::move(coeffs)) {
        auto pf = prime_power_decompose(q);
        if (!pf) throw std::invalid_argument("LPolynomial: q must be a prime power");
        p = static_cast<uint32_t>(pf->first);
        ext = pf->second;
        if (static_cast<int>(a.size()) != 2 * g + 1 || a.back() != 1) throw std::invalid_argument("LPolynomial: need monic degree 2g");
        const BigInt qq = q;
        for (int i = 0; i <= g; ++i) {
            if (a[static_cast<size_t>(i)] != ipow(qq, static_cast<unsigned>(g - i)) * a[static_cast<size_t>(2 * g - i)])
                throw std::invalid_argument("LPolynomial: functional equation fails at i = " + std::to_string(i));
        }
    }

    std::string to_string() const {
        std::ostringstream os;
        for (int i = 2 * g; i >= 0; --i) {
            const BigInt& c = a[static_cast<size_t>(i)];
            if (c == 0) continue;
            if (i < 2 * g) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            BigInt abs_c = c < 0 ? BigInt(-c) : c;
            if (abs_c != 1 || i == 0) os << abs_c;
            if (i >= 1) os << "T";
            if (i >= 2) os << "^" << i;
        }
        return os.str();
    }
};

/// Advisory root-modulus check: every complex root satisfies |alpha|^2 = q to
/// 1e-9 relative accuracy. The exact guarantees are the functional equation
/// and integrality; this catches gross counting bugs. Roots come from
/// Durand-Kerner on the squarefree part (repeated roots would otherwise limit
/// the attainable accuracy).
inline bool weil_check(const LPolynomial& L) {
    std::vector<BigInt> cs = L.a;
    detail::RatPoly rp(cs.begin(), cs.end());
    detail::RatPoly sf = detail::rp_squarefree_part(rp);
    const int n = detail::rp_deg(sf);
    if (n <= 0) return false;
    std::vector<std::complex<double>> c(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) c[static_cast<size_t>(i)] = static_cast<double>(sf[static_cast<size_t>(i)]);

    const double radius = std::sqrt(static_cast<double>(L.q));
    std::vector<std::complex<double>> roots(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double angle = 2.0 * 3.14159265358979323846 * i / n + 0.39;
        roots[static_cast<size_t>(i)] = std::polar(radius * 1.1, angle);
    }
    auto eval = [&](std::complex<double> z) {
        std::complex<double> v = 0;
        for (size_t i = c.size(); i-- > 0;) v = v * z + c[i];
        return v;
    };
    for (int iter = 0; iter < 600; ++iter) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> num = eval(roots[static_cast<size_t>(i)]);
            std::complex<double> den = 1;
            for (int j = 0; j < n; ++j)
                if (j != i) den *= roots[static_cast<size_t>(i)] - roots[static_cast<size_t>(j)];
            std::complex<double> delta = num / den;
            roots[static_cast<size_t>(i)] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14 * radius) break;
    }
    const double tol = 1e-9 * static_cast<double>(L.q);
    for (const auto& root : roots) {
        if (std::abs(std::norm(root) - static_cast<double>(L.q)) > tol) return false;
    }
    return true;
}

/// Reconstructs P_p(A,T) from point counts N_1..N_g via Newton's identities
/// (exact integers) completed by the functional equation; weil_check must
/// pass on the result.
inline LPolynomial lpoly_from_counts(const std::vector<uint64_t>& counts, uint32_t p, int g) {
    if (static_cast<int>(counts.size()) != g) throw std::invalid_argument("lpoly_from_counts: need g counts");
    const BigInt pp = p;
    std::vector<BigInt> s(static_cast<size_t>(g) + 1);  // power sums of the 2g roots
    for (int r = 1; r <= g; ++r) {
        BigInt pr = ipow(pp, static_cast<unsigned>(r));
        s[static_cast<size_t>(r)] = pr + 1 - BigInt(counts[static_cast<size_t>(r - 1)]);
        // Weil bound |N_r - (p^r + 1)| <= 2g p^(r/2)
        if (s[static_cast<size_t>(r)] * s[static_cast<size_t>(r)] > 4 * g * g * pr)
            throw WeilViolation("lpoly_from_counts: count N_" + std::to_string(r) + " violates the Weil bound at p = " + std::to_string(p));
    }
    std::vector<BigInt> e(static_cast<size_t>(g) + 1);
    e[0] = 1;
    for (int k = 1; k <= g; ++k) {
        BigInt acc = 0;
        for (int i = 1; i <= k; ++i) {
            BigInt term = e[static_cast<size_t>(k - i)] * s[static_cast<size_t>(i)];
            acc += (i % 2 == 1) ? term : -term;
        }
        if (acc % k != 0) throw WeilViolation("lpoly_from_counts: Newton identity yields a non-integer at p = " + std::to_string(p));
        e[static_cast<size_t>(k)] = acc / k;
    }
    std::vector<BigInt> a(static_cast<size_t>(2 * g) + 1);
    a[static_cast<size_t>(2 * g)] = 1;
    for (int k = 1; k <= g; ++k) a[static_cast<size_t>(2 * g - k)] = (k % 2 == 1) ? -e[static_cast<size_t>(k)] : e[static_cast<size_t>(k)];
    for (int i = 0; i < g; ++i) a[static_cast<size_t>(i)] = ipow(pp, static_cast<unsigned>(g - i)) * a[static_cast<size_t>(2 * g - i)];
    LPolynomial L(p, g, std::move(a));
    if (!weil_check(L)) throw WeilViolation("lpoly_from_counts: root-modulus check failed at p = " + std::to_string(p));
    return L;
}

/// Power sums of the roots recovered from the coefficients (inverse Newton
/// identities); test oracles re-expand counts from these.
inline std::vector<BigInt> power_sums(const LPolynomial& L, int up_to) {
    const int n = 2 * L.g;
    std::vector<BigInt> e(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const BigInt& c = L.a[static_cast<size_t>(n - k)];
        e[static_cast<size_t>(k)] = (k % 2 == 0) ? c : -c;
    }
    std::vector<BigInt> s(static_cast<size_t>(up_to) + 1);
    s[0] = n;
    for (int k = 1; k <= up_to; ++k) {
        BigInt acc = 0;
        for (int i = 1; i < k && i <= n; ++i) {
            BigInt term = e[static_cast<size_t>(i)] * s[static_cast<size_t>(k - i)];
            acc += (i % 2 == 1) ? term : -term;
        }
        if (k <= n) {
            BigInt kek = BigInt(k) * e[static_cast<size_t>(k)];
            acc += (k % 2 == 1) ? kek : -kek;
        }
        s[static_cast<size_t>(k)] = acc;
    }
    return s;
}

}  // namespace ordscan
