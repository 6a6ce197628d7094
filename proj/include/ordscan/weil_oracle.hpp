#pragma once

#include "ordscan/bigint.hpp"
#include "ordscan/classify.hpp"
#include "ordscan/curve_counts.hpp"
#include "ordscan/errors.hpp"
#include "ordscan/newton.hpp"
#include "ordscan/quad_field.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ordscan {

namespace detail {

inline int sign_ll(long long x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

/// Exact sign of A + C*sqrt(q).
inline int sign_a_plus_c_sqrtq(long long A, long long C, long long q) {
    if (C == 0) return sign_ll(A);
    if (A == 0) return sign_ll(C);
    if (A > 0 && C > 0) return 1;
    if (A < 0 && C < 0) return -1;
    long long lhs = A * A, rhs = C * C * q;
    if (lhs == rhs) return 0;
    // |A| decides if A^2 > C^2 q, otherwise the radical part decides
    return (lhs > rhs) ? sign_ll(A) : sign_ll(C);
}

/// All roots of the monic polynomial real and inside [-2 sqrt(q), 2 sqrt(q)],
/// exactly; degree at most 3. Real-rootedness comes from the discriminant
/// sign, the interval condition from Budan-Fourier derivative signs at the
/// endpoints (exact for real-rooted polynomials, endpoint roots included).
inline bool roots_real_in_weil_interval(const std::vector<long long>& c, long long q) {
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg == 0) return true;
    if (deg == 2) {
        if (c[1] * c[1] - 4 * c[0] < 0) return false;
    } else if (deg == 3) {
        long long c2 = c[2], c1 = c[1], c0 = c[0];
        long long disc = 18 * c2 * c1 * c0 - 4 * c2 * c2 * c2 * c0 + c2 * c2 * c1 * c1 - 4 * c1 * c1 * c1 - 27 * c0 * c0;
        if (disc < 0) return false;
    }
    // derivative table, ascending coefficients, monic leading
    std::vector<std::vector<long long>> ders;
    ders.push_back(c);
    for (int k = 1; k < deg; ++k) {
        const auto& prev = ders.back();
        std::vector<long long> d(prev.size() - 1);
        for (size_t i = 1; i < prev.size(); ++i) d[i - 1] = prev[i] * static_cast<long long>(i);
        ders.push_back(std::move(d));
    }
    // evaluate at +-2 sqrt(q) as A + C sqrt(q): (2 sqrt(q))^j = 2^j q^(j/2) (+ sqrt factor when j odd)
    for (int side = 0; side < 2; ++side) {
        const bool plus = side == 0;
        for (int k = 0; k < deg; ++k) {
            long long A = 0, C = 0;
            const auto& d = ders[static_cast<size_t>(k)];
            long long pw = 1;  // 2^j q^floor(j/2)
            for (size_t j = 0; j < d.size(); ++j) {
                long long term = d[j] * pw;
                if (!plus && (j & 1)) term = -term;
                if (j & 1) C += term;
                else A += term;
                pw *= 2;
                if (j & 1) pw *= q;
            }
            int s = sign_a_plus_c_sqrtq(A, C, q);
            int want = plus ? 1 : ((deg - k) % 2 == 0 ? 1 : -1);
            if (s != 0 && s != want) return false;
        }
    }
    return true;
}

inline std::vector<std::vector<BigInt>> companion_matrix(const std::vector<BigInt>& monic) {
    const int n = static_cast<int>(monic.size()) - 1;
    std::vector<std::vector<BigInt>> m(static_cast<size_t>(n), std::vector<BigInt>(static_cast<size_t>(n), 0));
    for (int i = 1; i < n; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(i - 1)] = 1;
    for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(n - 1)] = -monic[static_cast<size_t>(i)];
    return m;
}

/// Matrix of the action on the wedge square, rows/columns indexed by pairs
/// i < j in lexicographic order.
inline std::vector<std::vector<BigInt>> wedge_square(const std::vector<std::vector<BigInt>>& m) {
    const int n = static_cast<int>(m.size());
    std::vector<std::pair<int, int>> idx;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) idx.emplace_back(i, j);
    const size_t w = idx.size();
    std::vector<std::vector<BigInt>> out(w, std::vector<BigInt>(w, 0));
    for (size_t r = 0; r < w; ++r) {
        auto [i, j] = idx[r];
        for (size_t s = 0; s < w; ++s) {
            auto [k, l] = idx[s];
            out[r][s] = m[static_cast<size_t>(i)][static_cast<size_t>(k)] * m[static_cast<size_t>(j)][static_cast<size_t>(l)] -
                        m[static_cast<size_t>(i)][static_cast<size_t>(l)] * m[static_cast<size_t>(j)][static_cast<size_t>(k)];
        }
    }
    return out;
}

/// Characteristic polynomial by Faddeev-LeVerrier; every trace division is
/// exact over Z.
inline std::vector<BigInt> char_poly(const std::vector<std::vector<BigInt>>& a) {
    const size_t n = a.size();
    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n, 0));
    std::vector<BigInt> c(n + 1, 0);
    c[n] = 1;  // coefficient of T^n
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    for (size_t k = 1; k <= n; ++k) {
        // m <- a * m
        std::vector<std::vector<BigInt>> nm(n, std::vector<BigInt>(n, 0));
        for (size_t i = 0; i < n; ++i)
            for (size_t l = 0; l < n; ++l) {
                if (a[i][l] == 0) continue;
                for (size_t j = 0; j < n; ++j) nm[i][j] += a[i][l] * m[l][j];
            }
        m = std::move(nm);
        BigInt tr = 0;
        for (size_t i = 0; i < n; ++i) tr += m[i][i];
        if (tr % static_cast<long>(k) != 0) throw InvariantViolation("char_poly: non-integer trace step");
        BigInt ck = -tr / static_cast<long>(k);
        c[n - k] = ck;
        for (size_t i = 0; i < n; ++i) m[i][i] += ck;
    }
    return c;  // ascending
}

inline long long binom(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace detail

/// Exhaustive list of weight-1 Weil polynomials over F_q of degree 2g.
struct WeilEnum {
    uint64_t q = 0;
    int g = 0;
    std::vector<LPolynomial> polys;
};

/// All monic degree-2g integer polynomials with the functional equation,
/// coefficientwise binomial bounds, and every complex root of modulus
/// sqrt(q). The root condition is decided exactly: the reciprocal-pair
/// transform must have all real roots in [-2 sqrt(q), 2 sqrt(q)]
/// (sign-change counting, no floating point).
inline WeilEnum enumerate_weil(uint64_t q, int g) {
    if (g < 1 || g > 3) throw std::invalid_argument("enumerate_weil: g must be 1..3");
    if (!prime_power_decompose(q)) throw std::invalid_argument("enumerate_weil: q must be a prime power");
    if (q > 16 && g == 3) throw std::invalid_argument("enumerate_weil: exhaustive mode caps q at 16 for g = 3");
    if (q > 1024) throw std::invalid_argument("enumerate_weil: q too large for exhaustive mode");
    const long long qq = static_cast<long long>(q);

    std::vector<long long> bound(static_cast<size_t>(g) + 1, 0);
    for (int i = 1; i <= g; ++i) {
        // floor(C(2g,i) q^(i/2))
        BigInt b2 = BigInt(detail::binom(2 * g, i)) * detail::binom(2 * g, i) * ipow(BigInt(qq), static_cast<unsigned>(i));
        bound[static_cast<size_t>(i)] = static_cast<long long>(isqrt_floor(b2));
    }

    WeilEnum out;
    out.q = q;
    out.g = g;

    // free coefficients a_{2g-1} .. a_g, outer loop on the highest
    std::vector<long long> free_coeff(static_cast<size_t>(g), 0);
    std::vector<long long> trace_poly(static_cast<size_t>(g) + 1, 0);
    auto emit = [&]() {
        std::vector<BigInt> a(static_cast<size_t>(2 * g) + 1);
        a[static_cast<size_t>(2 * g)] = 1;
        for (int i = 1; i <= g; ++i) a[static_cast<size_t>(2 * g - i)] = free_coeff[static_cast<size_t>(i - 1)];
        for (int i = 0; i < g; ++i) a[static_cast<size_t>(i)] = ipow(BigInt(qq), static_cast<unsigned>(g - i)) * a[static_cast<size_t>(2 * g - i)];
        out.polys.emplace_back(q, g, std::move(a));
    };

    if (g == 1) {
        for (long long a1 = -bound[1]; a1 <= bound[1]; ++a1) {
            if (a1 * a1 <= 4 * qq) {
                free_coeff[0] = a1;
                emit();
            }
        }
        return out;
    }
    if (g == 2) {
        for (long long a3 = -bound[1]; a3 <= bound[1]; ++a3)
            for (long long a2 = -bound[2]; a2 <= bound[2]; ++a2) {
                trace_poly = {a2 - 2 * qq, a3, 1};
                if (detail::roots_real_in_weil_interval(trace_poly, qq)) {
                    free_coeff[0] = a3;
                    free_coeff[1] = a2;
                    emit();
                }
            }
        return out;
    }
    for (long long a5 = -bound[1]; a5 <= bound[1]; ++a5)
        for (long long a4 = -bound[2]; a4 <= bound[2]; ++a4)
            for (long long a3 = -bound[3]; a3 <= bound[3]; ++a3) {
                trace_poly = {a3 - 2 * qq * a5, a4 - 3 * qq, a5, 1};
                if (detail::roots_real_in_weil_interval(trace_poly, qq)) {
                    free_coeff[0] = a5;
                    free_coeff[1] = a4;
                    free_coeff[2] = a3;
                    emit();
                }
            }
    return out;
}

/// Randomized spot check beyond the exhaustive caps: uniformly sampled
/// coefficient tuples inside the binomial bounds, filtered by the same exact
/// root condition.
inline WeilEnum sample_weil(uint64_t q, int g, size_t count, uint64_t seed) {
    if (g < 2 || g > 3) throw std::invalid_argument("sample_weil: g must be 2 or 3");
    const long long qq = static_cast<long long>(q);
    std::mt19937_64 rng(seed);
    WeilEnum out;
    out.q = q;
    out.g = g;
    std::vector<long long> bound(static_cast<size_t>(g) + 1, 0);
    for (int i = 1; i <= g; ++i) {
        BigInt b2 = BigInt(detail::binom(2 * g, i)) * detail::binom(2 * g, i) * ipow(BigInt(qq), static_cast<unsigned>(i));
        bound[static_cast<size_t>(i)] = static_cast<long long>(isqrt_floor(b2));
    }
    size_t attempts = 0;
    while (out.polys.size() < count && attempts < count * 10000) {
        ++attempts;
        std::vector<long long> fc(static_cast<size_t>(g));
        for (int i = 1; i <= g; ++i) {
            std::uniform_int_distribution<long long> dist(-bound[static_cast<size_t>(i)], bound[static_cast<size_t>(i)]);
            fc[static_cast<size_t>(i - 1)] = dist(rng);
        }
        std::vector<long long> tp;
        if (g == 2) tp = {fc[1] - 2 * qq, fc[0], 1};
        else tp = {fc[2] - 2 * qq * fc[0], fc[1] - 3 * qq, fc[0], 1};
        if (!detail::roots_real_in_weil_interval(tp, qq)) continue;
        std::vector<BigInt> a(static_cast<size_t>(2 * g) + 1);
        a[static_cast<size_t>(2 * g)] = 1;
        for (int i = 1; i <= g; ++i) a[static_cast<size_t>(2 * g - i)] = fc[static_cast<size_t>(i - 1)];
        for (int i = 0; i < g; ++i) a[static_cast<size_t>(i)] = ipow(BigInt(qq), static_cast<unsigned>(g - i)) * a[static_cast<size_t>(2 * g - i)];
        out.polys.emplace_back(q, g, std::move(a));
    }
    return out;
}

struct RefinementReport {
    uint64_t q = 0;
    int g = 0;
    size_t total = 0;            // enumerated Weil polynomials
    size_t premise_count = 0;    // wedge-square eigenvalues all equal q
    size_t counterexamples = 0;  // premise holds but the forcing conclusion fails
    bool q_square = false;       // 2g sqrt(q) integral, so the premise can be met
    std::vector<LPolynomial> premise_polys;
};

/// For every enumerated polynomial whose pairwise root products all equal q
/// (checked exactly through the characteristic polynomial of the wedge
/// square), verifies that the polynomial is (T -+ sqrt(q))^2g; such q must
/// have integral 2g sqrt(q), mirroring the finitely-many-primes conclusion.
inline RefinementReport refinement_forcing_check(uint64_t q, int g) {
    if (g < 3) throw std::invalid_argument("refinement_forcing_check: needs g >= 3 (an auxiliary third eigenvalue)");
    WeilEnum we = enumerate_weil(q, g);
    RefinementReport rep;
    rep.q = q;
    rep.g = g;
    rep.total = we.polys.size();
    BigInt s;
    rep.q_square = is_perfect_square(BigInt(q), &s);

    const long long pairs = detail::binom(2 * g, 2);
    for (const auto& L : we.polys) {
        // necessary: trace of the wedge square equals C(2g,2) q, i.e. the
        // coefficient of T^(2g-2) sits at its binomial bound
        if (L.a[static_cast<size_t>(2 * g - 2)] != BigInt(pairs) * static_cast<long long>(q)) continue;
        auto wedge = detail::wedge_square(detail::companion_matrix(L.a));
        auto chi = detail::char_poly(wedge);
        bool premise = true;
        for (size_t k = 0; k < chi.size(); ++k) {
            // compare with (T - q)^pairs
            size_t deg = chi.size() - 1;
            BigInt want = BigInt(detail::binom(static_cast<int>(deg), static_cast<int>(deg - k))) *
                          ipow(BigInt(-static_cast<long long>(q)), static_cast<unsigned>(deg - k));
            if (chi[k] != want) {
                premise = false;
                break;
            }
        }
        if (!premise) continue;
        ++rep.premise_count;
        rep.premise_polys.push_back(L);
        // conclusion: P = (T -+ sqrt(q))^2g
        bool forced = false;
        if (rep.q_square) {
            for (int sign : {1, -1}) {
                bool match = true;
                for (int k = 0; k <= 2 * g; ++k) {
                    BigInt want = BigInt(detail::binom(2 * g, k)) * ipow(BigInt(-sign * s), static_cast<unsigned>(k));
                    if (L.a[static_cast<size_t>(2 * g - k)] != want) {
                        match = false;
                        break;
                    }
                }
                if (match) forced = true;
            }
        }
        if (!forced) ++rep.counterexamples;
    }
    return rep;
}

/// Builds (P_sigma * conj(P_sigma))^t exactly and verifies rational-integer
/// coefficients plus the degree-2 t deg(P_sigma) functional equation over p.
inline bool polypow_check(const QuadField& E, const EPoly& p_sigma, unsigned t, uint32_t p) {
    if (t < 1) throw std::invalid_argument("polypow_check: t must be positive");
    EPoly prod = epoly_mul(E, p_sigma, epoly_conj(E, p_sigma));
    EPoly acc;
    acc.c = {QuadInt(1, 0)};
    for (unsigned i = 0; i < t; ++i) acc = epoly_mul(E, acc, prod);
    const int g = static_cast<int>(t) * p_sigma.degree();
    if (acc.degree() != 2 * g) return false;
    std::vector<BigInt> a(static_cast<size_t>(2 * g) + 1);
    for (int k = 0; k <= 2 * g; ++k) {
        if (acc.c[static_cast<size_t>(k)].b != 0) return false;  // must be rational integers
        a[static_cast<size_t>(k)] = acc.c[static_cast<size_t>(k)].a;
    }
    if (a[static_cast<size_t>(2 * g)] != 1) return false;
    const BigInt pp = p;
    for (int i = 0; i <= g; ++i) {
        if (a[static_cast<size_t>(i)] != ipow(pp, static_cast<unsigned>(g - i)) * a[static_cast<size_t>(2 * g - i)]) return false;
    }
    return true;
}

/// One elliptic factor with complex multiplication by Q(sqrt(-d)).
struct CmEntry {
    CurveSpec curve;
    int d;
};

struct CmFactorReport {
    SplitKind kind = SplitKind::Inert;
    BigInt a_p;
    int u = 0;
    bool ordinary = false;
};

struct CmReport {
    uint32_t p = 0;
    std::vector<CmFactorReport> factors;
    int u_sum = 0;
    int u_product = 0;       // from the product polynomial's Newton polygon
    bool additivity_ok = false;
    bool assertions_ok = false;  // split => ordinary (u = 1); inert => a_p = 0, u = 0
};

/// CM baseline: at split primes every factor is ordinary, at inert primes the
/// trace vanishes, and u is additive on products.
inline CmReport cm_baseline(const std::vector<CmEntry>& entries, uint32_t p) {
    if (entries.empty()) throw std::invalid_argument("cm_baseline: need at least one curve");
    CmReport rep;
    rep.p = p;
    std::vector<BigInt> product{1};
    for (const auto& entry : entries) {
        if (entry.curve.model != CurveModel::Elliptic) throw std::invalid_argument("cm_baseline: curves must be elliptic");
        // configured CM shapes: j = 0 over Q(sqrt(-3)) and j = 1728 over Q(i)
        const auto& f = entry.curve.f;
        if (entry.d == 3) {
            if (f[1] != 0 || f[2] != 0) throw std::invalid_argument("cm_baseline: d = 3 expects y^2 = x^3 + c");
        } else if (entry.d == 1) {
            if (f[0] != 0 || f[2] != 0) throw std::invalid_argument("cm_baseline: d = 1 expects y^2 = x^3 + a x");
        } else {
            throw std::invalid_argument("cm_baseline: no configured CM list for d = " + std::to_string(entry.d));
        }
        QuadField E(entry.d);
        LPolynomial L = lpoly_from_counts({count_points(entry.curve, p, 1)}, p, 1);
        CmFactorReport fr;
        fr.kind = split_prime(E, p).kind;
        fr.a_p = -L.a[1];
        fr.u = unit_root_count(L);
        fr.ordinary = is_ordinary(L);
        rep.u_sum += fr.u;
        rep.factors.push_back(std::move(fr));
        // multiply the product polynomial
        std::vector<BigInt> next(product.size() + 2, 0);
        for (size_t i = 0; i < product.size(); ++i)
            for (size_t j = 0; j < 3; ++j) next[i + j] += product[i] * L.a[j];
        product = std::move(next);
    }
    LPolynomial prod_poly(p, static_cast<int>(entries.size()), std::move(product));
    rep.u_product = unit_root_count(prod_poly);
    rep.additivity_ok = rep.u_product == rep.u_sum;
    rep.assertions_ok = true;
    for (const auto& fr : rep.factors) {
        if (fr.kind == SplitKind::Split && !(fr.ordinary && fr.u == 1)) rep.assertions_ok = false;
        if (fr.kind == SplitKind::Inert && !(fr.a_p == 0 && fr.u == 0)) rep.assertions_ok = false;
    }
    return rep;
}

}  // namespace ordscan
