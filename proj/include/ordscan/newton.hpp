#pragma once

#include "ordscan/bigint.hpp"
#include "ordscan/curve_counts.hpp"
#include "ordscan/quad_field.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace ordscan {

/// Valuation of one coefficient: an exact rational, or +infinity for a zero
/// coefficient.
struct CoeffVal {
    bool inf = false;
    Rational v = 0;

    CoeffVal() = default;
    CoeffVal(Rational val) : v(std::move(val)) {}  // NOLINT(google-explicit-constructor)
    static CoeffVal infinity() {
        CoeffVal c;
        c.inf = true;
        return c;
    }
    friend bool operator==(const CoeffVal&, const CoeffVal&) = default;
};

/// Valuations of a_0..a_n of a monic polynomial; vals[n] must be 0.
using ValuedCoeffs = std::vector<CoeffVal>;

/// Slope multiset of a Newton polygon, nondecreasing, multiplicities summing
/// to the degree. Slopes equal the valuations of the roots.
struct NewtonPolygon {
    std::vector<std::pair<Rational, int>> slopes;

    int total_multiplicity() const {
        int n = 0;
        for (const auto& [s, m] : slopes) n += m;
        return n;
    }

    int multiplicity_of(const Rational& s) const {
        for (const auto& [slope, m] : slopes)
            if (slope == s) return m;
        return 0;
    }

    /// Flattened nondecreasing list, one entry per root.
    std::vector<Rational> flat() const {
        std::vector<Rational> out;
        for (const auto& [s, m] : slopes)
            for (int i = 0; i < m; ++i) out.push_back(s);
        return out;
    }

    Rational weighted_sum() const {
        Rational acc = 0;
        for (const auto& [s, m] : slopes) acc += s * m;
        return acc;
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [s, m] : slopes)
            for (int i = 0; i < m; ++i) {
                if (!first) os << " ";
                os << s;
                first = false;
            }
        return os.str();
    }

    friend bool operator==(const NewtonPolygon&, const NewtonPolygon&) = default;
};

/// Lower convex hull of (i, vals[i]); each segment from (i1,v1) to (i2,v2)
/// contributes slope (v1-v2)/(i2-i1) with multiplicity i2-i1, so slopes are
/// the root valuations. Monotone-chain sweep, exact arithmetic.
inline NewtonPolygon newton_polygon(const ValuedCoeffs& vals) {
    const int n = static_cast<int>(vals.size()) - 1;
    if (n < 1) throw std::invalid_argument("newton_polygon: need degree >= 1");
    if (vals.back().inf || vals.back().v != 0) throw std::invalid_argument("newton_polygon: polynomial must be monic (vals[n] = 0)");
    if (vals.front().inf) throw std::invalid_argument("newton_polygon: zero constant term unsupported");

    std::vector<std::pair<int, Rational>> pts;
    for (int i = 0; i <= n; ++i) {
        if (vals[static_cast<size_t>(i)].inf) continue;
        pts.emplace_back(i, vals[static_cast<size_t>(i)].v);
    }
    std::vector<std::pair<int, Rational>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& [x1, y1] = hull[hull.size() - 2];
            const auto& [x2, y2] = hull[hull.size() - 1];
            // keep only right turns: (pt - p1) x (p2 - p1) must stay negative
            Rational cross = (y2 - y1) * (pt.first - x1) - (pt.second - y1) * (x2 - x1);
            if (cross >= 0) hull.pop_back();
            else break;
        }
        hull.push_back(pt);
    }
    NewtonPolygon np;
    for (size_t k = 1; k < hull.size(); ++k) {
        const auto& [x1, y1] = hull[k - 1];
        const auto& [x2, y2] = hull[k];
        np.slopes.emplace_back((y1 - y2) / (x2 - x1), x2 - x1);
    }
    std::reverse(np.slopes.begin(), np.slopes.end());  // read right-to-left: nondecreasing
    // merge equal adjacent slopes (possible only through exact ties)
    std::vector<std::pair<Rational, int>> merged;
    for (auto& [s, m] : np.slopes) {
        if (!merged.empty() && merged.back().first == s) merged.back().second += m;
        else merged.emplace_back(s, m);
    }
    np.slopes = std::move(merged);
    return np;
}

/// Coefficient valuations of an integer polynomial under the p-adic valuation
/// normalized so that v(q) = 1 (q = p^ext).
inline ValuedCoeffs valued_coeffs(const LPolynomial& L) {
    ValuedCoeffs vals;
    vals.reserve(L.a.size());
    const BigInt p = L.p;
    for (const auto& c : L.a) {
        if (c == 0) vals.push_back(CoeffVal::infinity());
        else vals.push_back(CoeffVal(Rational(padic_val(c, p), L.ext)));
    }
    return vals;
}

/// Coefficient valuations of an O_E polynomial under the pi-adic valuation.
inline ValuedCoeffs valued_coeffs(const EPoly& f, const QuadField& E, const QuadInt& pi) {
    ValuedCoeffs vals;
    vals.reserve(f.c.size());
    for (const auto& c : f.c) {
        auto v = valuation(E, c, pi);
        if (!v) vals.push_back(CoeffVal::infinity());
        else vals.push_back(CoeffVal(Rational(*v)));
    }
    return vals;
}

inline int unit_root_count(const NewtonPolygon& np) { return np.multiplicity_of(Rational(0)); }

inline int unit_root_count(const LPolynomial& L) { return unit_root_count(newton_polygon(valued_coeffs(L))); }

inline int unit_root_count(const EPoly& f, const QuadField& E, const QuadInt& pi) {
    return unit_root_count(newton_polygon(valued_coeffs(f, E, pi)));
}

/// Ordinary means the middle coefficient is prime to p.
inline bool is_ordinary(const LPolynomial& L) { return L.a[static_cast<size_t>(L.g)] % L.p != 0; }

}  // namespace ordscan
