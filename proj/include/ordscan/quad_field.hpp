#pragma once

#include "ordscan/bigint.hpp"
#include "ordscan/curve_counts.hpp"
#include "ordscan/errors.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ordscan {

/// Element a + b*theta of the ring of integers of an imaginary quadratic
/// field; theta depends on the field (see QuadField).
struct QuadInt {
    BigInt a, b;

    QuadInt() : a(0), b(0) {}
    QuadInt(BigInt a_in, BigInt b_in) : a(std::move(a_in)), b(std::move(b_in)) {}

    bool is_zero() const { return a == 0 && b == 0; }
    friend bool operator==(const QuadInt&, const QuadInt&) = default;

    /// Lexicographic (a, b) order; used for deterministic reporting only.
    friend bool operator<(const QuadInt& x, const QuadInt& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; }
};

/// Q(sqrt(-d)) for squarefree d with class number 1, through its ring of
/// integers Z[theta], theta = (1+sqrt(-d))/2 if d = 3 mod 4 and sqrt(-d)
/// otherwise. Element generators for split primes exist exactly because the
/// class number is 1.
class QuadField {
  public:
    explicit QuadField(int d) : d_(d), half_(d % 4 == 3) {
        static constexpr int kAllowed[] = {1, 2, 3, 7, 11, 19, 43, 67, 163};
        if (std::find(std::begin(kAllowed), std::end(kAllowed), d) == std::end(kAllowed))
            throw std::invalid_argument("QuadField: d must have class number 1");
    }

    int d() const { return d_; }
    bool half_integral() const { return half_; }
    long long discriminant() const { return half_ ? -static_cast<long long>(d_) : -4LL * d_; }

    QuadInt conj(const QuadInt& x) const { return half_ ? QuadInt(x.a + x.b, -x.b) : QuadInt(x.a, -x.b); }

    BigInt trace(const QuadInt& x) const { return half_ ? BigInt(2 * x.a + x.b) : BigInt(2 * x.a); }

    BigInt norm(const QuadInt& x) const {
        if (half_) return x.a * x.a + x.a * x.b + x.b * x.b * ((1 + d_) / 4);
        return x.a * x.a + d_ * x.b * x.b;
    }

    QuadInt add(const QuadInt& x, const QuadInt& y) const { return QuadInt(x.a + y.a, x.b + y.b); }
    QuadInt sub(const QuadInt& x, const QuadInt& y) const { return QuadInt(x.a - y.a, x.b - y.b); }
    QuadInt neg(const QuadInt& x) const { return QuadInt(-x.a, -x.b); }

    QuadInt mul(const QuadInt& x, const QuadInt& y) const {
        if (half_) {
            // theta^2 = theta - (1+d)/4
            BigInt tt = (1 + d_) / 4;
            return QuadInt(x.a * y.a - x.b * y.b * tt, x.a * y.b + x.b * y.a + x.b * y.b);
        }
        return QuadInt(x.a * y.a - d_ * x.b * y.b, x.a * y.b + x.b * y.a);
    }

    QuadInt theta() const { return QuadInt(0, 1); }

    const std::vector<QuadInt>& units() const {
        if (units_.empty()) {
            units_.push_back(QuadInt(1, 0));
            units_.push_back(QuadInt(-1, 0));
            if (d_ == 1) {
                units_.push_back(QuadInt(0, 1));
                units_.push_back(QuadInt(0, -1));
            } else if (d_ == 3) {
                units_.push_back(QuadInt(-1, 1));
                units_.push_back(QuadInt(1, -1));
                units_.push_back(QuadInt(0, 1));
                units_.push_back(QuadInt(0, -1));
            }
        }
        return units_;
    }

    /// Exact division x / y in O_E, nullopt if y does not divide x.
    std::optional<QuadInt> div_exact(const QuadInt& x, const QuadInt& y) const {
        if (y.is_zero()) return std::nullopt;
        BigInt n = norm(y);
        QuadInt z = mul(x, conj(y));
        if (z.a % n != 0 || z.b % n != 0) return std::nullopt;
        return QuadInt(z.a / n, z.b / n);
    }

    /// The unit multiple with lexicographically smallest sign-normalized
    /// coordinates: first coordinate positive when possible, then smallest
    /// (a, |b|) with positive b breaking the remaining tie. Quotients the unit
    /// group deterministically.
    QuadInt canonical_associate(const QuadInt& x) const {
        if (x.is_zero()) return x;
        std::optional<QuadInt> best;
        auto less = [](const QuadInt& l, const QuadInt& r) {
            // positive first coordinate outranks everything, then (a, |b|)
            // with positive b breaking the remaining tie
            bool lpos = l.a > 0, rpos = r.a > 0;
            if (lpos != rpos) return lpos;
            if (l.a != r.a) return l.a < r.a;
            BigInt lb = l.b < 0 ? BigInt(-l.b) : l.b;
            BigInt rb = r.b < 0 ? BigInt(-r.b) : r.b;
            if (lb != rb) return lb < rb;
            return l.b > r.b;
        };
        for (const auto& u : units()) {
            QuadInt cand = mul(u, x);
            bool eligible = cand.a > 0 || (cand.a == 0 && cand.b > 0);
            if (!eligible) continue;
            if (!best || less(cand, *best)) best = cand;
        }
        return *best;  // negation is always a unit, so an eligible associate exists
    }

    std::string to_string(const QuadInt& x) const {
        std::ostringstream os;
        os << x.a;
        if (x.b >= 0) os << "+" << x.b << "*w";
        else os << x.b << "*w";
        return os.str();
    }

  private:
    int d_;
    bool half_;
    mutable std::vector<QuadInt> units_;
};

enum class SplitKind { Split, Inert, Ramified };

inline const char* to_string(SplitKind k) {
    switch (k) {
        case SplitKind::Split: return "split";
        case SplitKind::Inert: return "inert";
        case SplitKind::Ramified: return "ramified";
    }
    return "?";
}

/// Factorization data of a rational prime in O_E; pi generates one prime
/// above p when the kind is Split or Ramified.
struct SplitPrimeData {
    uint32_t p = 0;
    SplitKind kind = SplitKind::Inert;
    QuadInt pi;
};

/// All x with N(x) = n up to unit multiplication, in canonical-associate
/// form, sorted by coordinates. Bounded (a, b) enumeration.
inline std::vector<QuadInt> norm_solutions(const QuadField& E, const BigInt& n) {
    if (n < 1) throw std::invalid_argument("norm_solutions: n must be positive");
    std::vector<QuadInt> sols;
    const int d = E.d();
    if (E.half_integral()) {
        // ((2a+b)^2 + d b^2)/4 = n
        BigInt bmax = isqrt_floor(4 * n / d);
        for (BigInt b = -bmax; b <= bmax; ++b) {
            BigInt rhs = 4 * n - d * b * b;
            BigInt s;
            if (!is_perfect_square(rhs, &s)) continue;
            for (int sgn : {1, -1}) {
                BigInt t = sgn * s;  // 2a + b = t
                if ((t - b) % 2 != 0) continue;
                sols.emplace_back((t - b) / 2, b);
                if (s == 0) break;
            }
        }
    } else {
        BigInt bmax = isqrt_floor(n / d);
        for (BigInt b = -bmax; b <= bmax; ++b) {
            BigInt rhs = n - d * b * b;
            BigInt s;
            if (!is_perfect_square(rhs, &s)) continue;
            sols.emplace_back(s, b);
            if (s != 0) sols.emplace_back(-s, b);
        }
    }
    for (auto& x : sols) x = E.canonical_associate(x);
    std::sort(sols.begin(), sols.end());
    sols.erase(std::unique(sols.begin(), sols.end()), sols.end());
    return sols;
}

/// Splitting behavior of p in E via the Kronecker symbol of the field
/// discriminant; pi is the canonical generator when one exists.
inline SplitPrimeData split_prime(const QuadField& E, uint32_t p) {
    if (!is_prime_u64(p)) throw std::invalid_argument("split_prime: p not prime");
    SplitPrimeData out;
    out.p = p;
    int k = kronecker(E.discriminant(), p);
    if (k == -1) {
        out.kind = SplitKind::Inert;
        return out;
    }
    out.kind = (k == 1) ? SplitKind::Split : SplitKind::Ramified;
    auto sols = norm_solutions(E, BigInt(p));
    if (sols.empty()) throw InvariantViolation("split_prime: no norm-p element at p = " + std::to_string(p));
    out.pi = sols.front();
    return out;
}

/// pi-adic valuation; nullopt encodes +infinity (x = 0).
inline std::optional<long> valuation(const QuadField& E, QuadInt x, const QuadInt& pi) {
    if (x.is_zero()) return std::nullopt;
    long v = 0;
    while (true) {
        auto q = E.div_exact(x, pi);
        if (!q) return v;
        x = *q;
        ++v;
    }
}

inline std::optional<long> valuation(const QuadField& E, const QuadInt& x, const SplitPrimeData& sp) {
    if (sp.kind == SplitKind::Inert) throw std::invalid_argument("valuation: inert prime has no pi");
    return valuation(E, x, sp.pi);
}

/// Monic polynomial over O_E, ascending coefficients (c[deg] = 1).
struct EPoly {
    std::vector<QuadInt> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    friend bool operator==(const EPoly&, const EPoly&) = default;
};

inline EPoly epoly_conj(const QuadField& E, const EPoly& f) {
    EPoly out = f;
    for (auto& ci : out.c) ci = E.conj(ci);
    return out;
}

inline EPoly epoly_mul(const QuadField& E, const EPoly& f, const EPoly& g) {
    EPoly out;
    out.c.assign(f.c.size() + g.c.size() - 1, QuadInt());
    for (size_t i = 0; i < f.c.size(); ++i)
        for (size_t j = 0; j < g.c.size(); ++j) out.c[i + j] = E.add(out.c[i + j], E.mul(f.c[i], g.c[j]));
    return out;
}

inline std::string epoly_to_string(const QuadField& E, const EPoly& f) {
    std::ostringstream os;
    for (int i = f.degree(); i >= 0; --i) {
        if (i < f.degree()) os << " + ";
        os << "(" << E.to_string(f.c[static_cast<size_t>(i)]) << ")";
        if (i >= 1) os << "*T";
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

namespace detail {

/// Elements with prescribed trace whose norm is at most bound_sq.
inline std::vector<QuadInt> with_trace_norm_bounded(const QuadField& E, const BigInt& t, const BigInt& bound_sq) {
    std::vector<QuadInt> out;
    const int d = E.d();
    if (E.half_integral()) {
        // N(a+b theta) = (t^2 + d b^2)/4 once 2a + b = t
        BigInt rhs = 4 * bound_sq - t * t;
        if (rhs < 0) return out;
        BigInt bmax = isqrt_floor(rhs / d);
        for (BigInt b = -bmax; b <= bmax; ++b) {
            if ((t - b) % 2 != 0) continue;
            out.emplace_back((t - b) / 2, b);
        }
    } else {
        if (t % 2 != 0) return out;
        BigInt a = t / 2;
        BigInt rhs = bound_sq - a * a;
        if (rhs < 0) return out;
        BigInt bmax = isqrt_floor(rhs / d);
        for (BigInt b = -bmax; b <= bmax; ++b) out.emplace_back(a, b);
    }
    return out;
}

/// Every element of norm n (not just up to units).
inline std::vector<QuadInt> all_with_norm(const QuadField& E, const BigInt& n) {
    std::vector<QuadInt> out;
    if (n == 0) {
        out.emplace_back();
        return out;
    }
    for (const auto& x : norm_solutions(E, n))
        for (const auto& u : E.units()) out.push_back(E.mul(u, x));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Solutions c of the 2x2 system Tr(c) = t and Tr(c0 * conj(c)) = m, plus the
/// degenerate fallback through a known norm when c0 is rational.
inline std::vector<QuadInt> solve_linear_pair(const QuadField& E, const QuadInt& c0, const BigInt& t, const BigInt& m,
                                              const BigInt& norm_target) {
    std::vector<QuadInt> out;
    const BigInt ttheta = E.trace(E.theta());
    const BigInt A = E.trace(c0);
    const BigInt B = E.trace(E.mul(c0, E.conj(E.theta())));
    const BigInt det = 2 * B - ttheta * A;
    if (det != 0) {
        BigInt un = t * B - ttheta * m;
        BigInt vn = 2 * m - A * t;
        if (un % det == 0 && vn % det == 0) out.emplace_back(un / det, vn / det);
        return out;
    }
    // c0 rational: recover c from its norm and trace instead
    if (norm_target < 0) return out;
    if (norm_target == 0) {
        if (t == 0) out.emplace_back();
        return out;
    }
    for (const auto& cand : all_with_norm(E, norm_target)) {
        if (E.trace(cand) == t && E.trace(E.mul(c0, E.conj(cand))) == m) out.push_back(cand);
    }
    return out;
}

}  // namespace detail

/// Factorization P_sigma * conj(P_sigma) = L over O_E at a split prime.
/// Candidates are assembled from the constant term (norm p^g), the trace
/// coefficient (integer trace + archimedean bound), and exact linear matching
/// of the mixed coefficients; every candidate is validated by exact
/// multiplication. P_sigma is the factor whose constant term has the smaller
/// pi-adic valuation, ties broken by coefficient order.
inline std::pair<EPoly, EPoly> conjugate_split(const LPolynomial& L, const QuadField& E, const SplitPrimeData& sp) {
    if (sp.kind != SplitKind::Split) throw std::invalid_argument("conjugate_split: prime is not split");
    const int g = L.g;
    if (g < 1 || g > 4) throw std::invalid_argument("conjugate_split: supported genera are 1..4");
    const BigInt p = L.q;
    const auto& t = L.a;  // t[k] = coefficient of T^k

    std::vector<EPoly> found;
    auto try_candidate = [&](EPoly f) {
        EPoly prod = epoly_mul(E, f, epoly_conj(E, f));
        for (int k = 0; k <= 2 * g; ++k) {
            if (!(prod.c[static_cast<size_t>(k)] == QuadInt(t[static_cast<size_t>(k)], 0))) return;
        }
        found.push_back(std::move(f));
    };

    const auto c0s = detail::all_with_norm(E, ipow(p, static_cast<unsigned>(g)));
    for (const auto& c0 : c0s) {
        if (g == 1) {
            if (E.trace(c0) == t[1]) try_candidate(EPoly{{c0, QuadInt(1, 0)}});
            continue;
        }
        // trace coefficient: Tr = t_{2g-1}, |c_{g-1}| <= g sqrt(p)
        for (const auto& cg1 : detail::with_trace_norm_bounded(E, t[static_cast<size_t>(2 * g - 1)], BigInt(g) * g * p)) {
            if (g == 2) {
                try_candidate(EPoly{{c0, cg1, QuadInt(1, 0)}});
            } else if (g == 3) {
                // Tr(c1) = t4 - N(c2); Tr(c0 conj(c1)) = t1; N(c1) = t2 - Tr(c0 conj(c2))
                BigInt tr_c1 = t[4] - E.norm(cg1);
                BigInt nrm_c1 = t[2] - E.trace(E.mul(c0, E.conj(cg1)));
                for (const auto& c1 : detail::solve_linear_pair(E, c0, tr_c1, t[1], nrm_c1))
                    try_candidate(EPoly{{c0, c1, cg1, QuadInt(1, 0)}});
            } else {
                // g = 4: enumerate c2 on the trace line Tr(c2) = t6 - N(c3)
                // within |c2| <= C(4,2) p, then solve for c1
                BigInt tr_c2 = t[6] - E.norm(cg1);
                for (const auto& c2 : detail::with_trace_norm_bounded(E, tr_c2, BigInt(36) * p * p)) {
                    BigInt tr_c1 = t[5] - E.trace(E.mul(cg1, E.conj(c2)));
                    BigInt nrm_c1 = t[2] - E.trace(E.mul(c0, E.conj(c2)));
                    for (const auto& c1 : detail::solve_linear_pair(E, c0, tr_c1, t[1], nrm_c1))
                        try_candidate(EPoly{{c0, c1, c2, cg1, QuadInt(1, 0)}});
                }
            }
        }
    }

    if (found.empty())
        throw NoSplitting("conjugate_split: no factorization over Q(sqrt(-" + std::to_string(E.d()) + ")) at p = " + std::to_string(sp.p));

    auto key_less = [](const EPoly& x, const EPoly& y) {
        for (size_t i = 0; i < x.c.size(); ++i) {
            if (x.c[i] == y.c[i]) continue;
            return x.c[i] < y.c[i];
        }
        return false;
    };
    std::sort(found.begin(), found.end(), key_less);
    found.erase(std::unique(found.begin(), found.end()), found.end());

    // order each conjugate pair: smaller constant-term valuation first
    auto order_pair = [&](const EPoly& f) {
        EPoly fbar = epoly_conj(E, f);
        long vf = valuation(E, f.c[0], sp.pi).value();
        long vb = valuation(E, fbar.c[0], sp.pi).value();
        if (vf < vb) return std::make_pair(f, fbar);
        if (vb < vf) return std::make_pair(fbar, f);
        return key_less(f, fbar) ? std::make_pair(f, fbar) : std::make_pair(fbar, f);
    };
    auto pair0 = order_pair(found.front());  // found is sorted, the first pair is the deterministic pick
    return pair0;
}

}  // namespace ordscan
