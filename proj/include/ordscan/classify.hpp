#pragma once

#include "ordscan/bigint.hpp"
#include "ordscan/curve_counts.hpp"
#include "ordscan/errors.hpp"
#include "ordscan/newton.hpp"
#include "ordscan/quad_field.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace ordscan {

/// Multiplicities of the two embeddings of E acting on the regular
/// differentials. Reported as an unordered pair; r_tau is the label under the
/// convention that tau acts by zeta_3^{-1} on the dx/y eigendifferential.
struct Signature {
    int r_tau = 0;
    int r_taubar = 0;

    std::pair<int, int> unordered() const { return {std::min(r_tau, r_taubar), std::max(r_tau, r_taubar)}; }
    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Exponent bookkeeping on the basis {x^a dx / y^b} of regular differentials:
/// x^a dx/y^b is regular iff m(a+1) < b deg(f), and scales by zeta_3^{-b}
/// under y -> zeta_3 y. Elliptic curves with E-multiplication carry a single
/// differential.
inline Signature signature(const CurveSpec& curve) {
    if (curve.model == CurveModel::Elliptic) return Signature{1, 0};
    if (curve.m != 3) throw std::invalid_argument("signature: need a superelliptic m = 3 curve");
    const int n = curve.deg_f();
    Signature sig;
    for (int b = 1; b <= 2; ++b) {
        int count = 0;
        for (int a = 0; 3 * (a + 1) < b * n; ++a) ++count;
        (b == 1 ? sig.r_tau : sig.r_taubar) = count;
    }
    if (sig.r_tau + sig.r_taubar != curve.genus) throw InvariantViolation("signature: eigenspace dimensions do not sum to the genus");
    return sig;
}

/// Sum of f_P * v_P(x) over the primes of E above p dividing x; at a split
/// prime this is v_pi(x) + v_pibar(x) with residue degrees 1. The Katz bound
/// predicate is katz_sum <= [E:Q]/2 = 1.
inline Rational katz_sum(const QuadField& E, const QuadInt& x, const SplitPrimeData& sp) {
    if (sp.kind != SplitKind::Split) throw std::invalid_argument("katz_sum: prime is not split");
    if (x.is_zero()) throw std::invalid_argument("katz_sum: x must be nonzero");
    long v1 = valuation(E, x, sp.pi).value();
    long v2 = valuation(E, E.conj(x), sp.pi).value();
    return Rational(v1 + v2);
}

/// True iff p does not divide b in O_E, i.e. not both v_pi(b) >= 1 and
/// v_pibar(b) >= 1.
inline bool ogus_predicate(const QuadField& E, const QuadInt& b, const SplitPrimeData& sp) {
    if (sp.kind != SplitKind::Split) throw std::invalid_argument("ogus_predicate: prime is not split");
    if (b.is_zero()) return false;
    bool div_pi = valuation(E, b, sp.pi).value() >= 1;
    bool div_pibar = valuation(E, E.conj(b), sp.pi).value() >= 1;
    return !(div_pi && div_pibar);
}

enum class Mechanism { TrivialUnitDet, OgusSigma, OgusSigmaBar, BothDivisible, Inert, Bad };

inline const char* to_string(Mechanism m) {
    switch (m) {
        case Mechanism::TrivialUnitDet: return "TrivialUnitDet";
        case Mechanism::OgusSigma: return "OgusSigma";
        case Mechanism::OgusSigmaBar: return "OgusSigmaBar";
        case Mechanism::BothDivisible: return "BothDivisible";
        case Mechanism::Inert: return "Inert";
        case Mechanism::Bad: return "Bad";
    }
    return "?";
}

/// v_pi of the trace coefficient (a), wedge coefficient (b, g >= 2) and
/// constant term of P_sigma and of P_sigmabar; nullopt encodes +infinity.
struct FactorValuations {
    std::optional<long> a_sigma, a_sigmabar;
    std::optional<long> b_sigma, b_sigmabar;
    long c_sigma = 0, c_sigmabar = 0;
};

/// Full per-prime classification.
struct PrimeRecord {
    uint32_t p = 0;
    SplitKind kind = SplitKind::Inert;
    bool good = false;
    std::optional<LPolynomial> L;
    std::optional<EPoly> p_sigma, p_sigmabar;
    std::optional<FactorValuations> vals;
    std::optional<NewtonPolygon> slopes_l, slopes_sigma, slopes_sigmabar;
    std::optional<int> u;
    std::optional<bool> ordinary;
    std::optional<Rational> katz;  // katz_sum of the sigma trace
    bool katz_infinite = false;    // trace was zero: every prime divides it
    std::optional<bool> ogus;
    std::optional<bool> itc;  // infinity-type law at this prime
    Mechanism mechanism = Mechanism::Bad;
};

/// True iff the multiset {v(c_sigma), v(c_sigmabar)} of constant-term
/// valuations equals the multiset {r_tau, r_taubar}. False is data, not an
/// error.
inline bool infinity_type_check(const PrimeRecord& rec, const Signature& sig) {
    if (rec.kind != SplitKind::Split || !rec.vals) throw std::invalid_argument("infinity_type_check: need a split record with factors");
    std::pair<long, long> got{std::min(rec.vals->c_sigma, rec.vals->c_sigmabar), std::max(rec.vals->c_sigma, rec.vals->c_sigmabar)};
    auto want = sig.unordered();
    return got.first == want.first && got.second == want.second;
}

namespace detail {

inline void check_slope_pairing(const NewtonPolygon& a, const NewtonPolygon& b, uint32_t p) {
    auto fa = a.flat();
    auto fb = b.flat();
    if (fa.size() != fb.size()) throw InvariantViolation("factor slope multisets differ in size at p = " + std::to_string(p));
    std::reverse(fb.begin(), fb.end());
    for (size_t i = 0; i < fa.size(); ++i) {
        if (fa[i] + fb[i] != 1) throw InvariantViolation("factor slopes do not pair to sum 1 at p = " + std::to_string(p));
    }
}

}  // namespace detail

/// The full pipeline: reduction check, point counts, L-polynomial, prime
/// splitting, conjugate factorization, valuations, Newton polygons and the
/// mechanism tag. Bad and non-split primes are tagged, never dropped;
/// violated invariants throw, never silently reclassify.
inline PrimeRecord classify_prime(const CurveSpec& curve, const QuadField& E, uint32_t p) {
    PrimeRecord rec;
    rec.p = p;
    SplitPrimeData sp = split_prime(E, p);
    rec.kind = sp.kind;
    rec.good = good_reduction(curve, p);
    if (!rec.good) {
        rec.mechanism = Mechanism::Bad;
        return rec;
    }
    const int g = curve.genus;
    std::vector<uint64_t> counts;
    counts.reserve(static_cast<size_t>(g));
    for (int r = 1; r <= g; ++r) counts.push_back(count_points(curve, p, r));
    rec.L = lpoly_from_counts(counts, p, g);
    rec.slopes_l = newton_polygon(valued_coeffs(*rec.L));
    rec.u = unit_root_count(*rec.slopes_l);
    rec.ordinary = is_ordinary(*rec.L);
    if ((*rec.u == g) != *rec.ordinary)
        throw InvariantViolation("ordinary/unit-root disagreement at p = " + std::to_string(p));

    if (sp.kind != SplitKind::Split) {
        rec.mechanism = Mechanism::Inert;
        return rec;
    }

    auto [ps, pb] = conjugate_split(*rec.L, E, sp);
    FactorValuations fv;
    auto vp = [&](const QuadInt& x) { return valuation(E, x, sp.pi); };
    fv.a_sigma = vp(ps.c[static_cast<size_t>(g - 1)]);
    fv.a_sigmabar = vp(pb.c[static_cast<size_t>(g - 1)]);
    if (g >= 2) {
        fv.b_sigma = vp(ps.c[static_cast<size_t>(g - 2)]);
        fv.b_sigmabar = vp(pb.c[static_cast<size_t>(g - 2)]);
    }
    fv.c_sigma = vp(ps.c[0]).value();
    fv.c_sigmabar = vp(pb.c[0]).value();
    if (fv.c_sigma + fv.c_sigmabar != g)
        throw InvariantViolation("constant-term valuation budget v(c) + v(cbar) != g at p = " + std::to_string(p));

    rec.slopes_sigma = newton_polygon(valued_coeffs(ps, E, sp.pi));
    rec.slopes_sigmabar = newton_polygon(valued_coeffs(pb, E, sp.pi));
    detail::check_slope_pairing(*rec.slopes_sigma, *rec.slopes_sigmabar, p);
    if (unit_root_count(*rec.slopes_sigma) + unit_root_count(*rec.slopes_sigmabar) != *rec.u)
        throw InvariantViolation("unit roots of the factors do not add up to u at p = " + std::to_string(p));

    // Katz sum of the sigma trace; a zero trace makes it +infinity
    QuadInt a_sig = E.neg(ps.c[static_cast<size_t>(g - 1)]);
    if (a_sig.is_zero()) rec.katz_infinite = true;
    else rec.katz = katz_sum(E, a_sig, sp);
    if (g >= 2) rec.ogus = ogus_predicate(E, ps.c[static_cast<size_t>(g - 2)], sp);

    if (fv.c_sigma == 0 || fv.c_sigmabar == 0) {
        rec.mechanism = Mechanism::TrivialUnitDet;
    } else if (g >= 2 && fv.b_sigma && *fv.b_sigma == 0) {
        rec.mechanism = Mechanism::OgusSigma;
    } else if (g >= 2 && fv.b_sigmabar && *fv.b_sigmabar == 0) {
        rec.mechanism = Mechanism::OgusSigmaBar;
    } else {
        rec.mechanism = Mechanism::BothDivisible;
    }

    // Slope forcing: a unit wedge coefficient gives two unit roots; when the
    // constant term of that side has valuation deg - 2 the remaining roots are
    // all forced to valuation 1 and the prime must be ordinary.
    if (rec.mechanism == Mechanism::OgusSigma || rec.mechanism == Mechanism::OgusSigmaBar) {
        const bool sigma_side = rec.mechanism == Mechanism::OgusSigma;
        long cv = sigma_side ? fv.c_sigma : fv.c_sigmabar;
        if (cv == g - 2 || g == 3) {
            const NewtonPolygon& side = sigma_side ? *rec.slopes_sigma : *rec.slopes_sigmabar;
            const NewtonPolygon& other = sigma_side ? *rec.slopes_sigmabar : *rec.slopes_sigma;
            bool forced = side.multiplicity_of(Rational(0)) == 2 && side.multiplicity_of(Rational(1)) == g - 2 &&
                          other.multiplicity_of(Rational(0)) == g - 2 && other.multiplicity_of(Rational(1)) == 2 && *rec.ordinary;
            if (!forced) throw InvariantViolation("Ogus slope forcing failed at p = " + std::to_string(p));
        }
    }

    rec.p_sigma = std::move(ps);
    rec.p_sigmabar = std::move(pb);
    rec.vals = fv;
    if (curve.model == CurveModel::Elliptic || curve.m == 3) rec.itc = infinity_type_check(rec, signature(curve));
    return rec;
}

/// One synthetic quadratic factor T^2 - a T + delta of a totally split
/// product; the det = chi_ell convention forces delta = p.
struct QuadFactor {
    BigInt a;
    BigInt delta;
};

struct HalfOrdinaryResult {
    int bound = 0;            // #{sigma : v(a_sigma) = 0}, a lower bound on u
    bool katz_violation = false;  // more than floor(g/2) non-unit traces
};

/// Lower bound on the unit-root count from the trace valuations of g
/// quadratic factors: each unit trace contributes Newton slopes {0,1}, i.e.
/// one unit root. When the Katz support bound holds the result is at least
/// ceil(g/2).
inline HalfOrdinaryResult half_ordinary_bound(const std::vector<CoeffVal>& trace_vals) {
    const int g = static_cast<int>(trace_vals.size());
    if (g < 1) throw std::invalid_argument("half_ordinary_bound: need at least one factor");
    int support = 0;
    for (const auto& v : trace_vals) {
        if (v.inf || v.v > 0) ++support;
        else if (v.v < 0) throw std::invalid_argument("half_ordinary_bound: negative valuation");
    }
    HalfOrdinaryResult res;
    res.bound = g - support;
    res.katz_violation = support > g / 2;
    if (!res.katz_violation && res.bound < (g + 1) / 2)
        throw InvariantViolation("half_ordinary_bound: bound fell below ceil(g/2) without a Katz violation");
    return res;
}

inline HalfOrdinaryResult half_ordinary_bound(const std::vector<QuadFactor>& factors, uint32_t p) {
    std::vector<CoeffVal> vals;
    vals.reserve(factors.size());
    for (const auto& f : factors) {
        if (f.delta != p) throw std::invalid_argument("half_ordinary_bound: det = chi_ell convention requires delta = p");
        if (f.a == 0) vals.push_back(CoeffVal::infinity());
        else vals.push_back(CoeffVal(Rational(padic_val(f.a, p))));
    }
    return half_ordinary_bound(vals);
}

}  // namespace ordscan
