#pragma once

#include "ordscan/bigint.hpp"

#include <algorithm>
#include <vector>

namespace ordscan::detail {

// Small dense polynomials over Q, ascending coefficients. Degrees stay in the
// single digits, so a plain monic Euclid suffices everywhere.
using RatPoly = std::vector<Rational>;

inline void rp_trim(RatPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int rp_deg(const RatPoly& a) { return static_cast<int>(a.size()) - 1; }

inline RatPoly rp_derivative(const RatPoly& a) {
    RatPoly d;
    for (size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<int>(i));
    return d;
}

inline Rational rp_eval(const RatPoly& a, const Rational& x) {
    Rational v = 0;
    for (size_t i = a.size(); i-- > 0;) v = v * x + a[i];
    return v;
}

inline RatPoly rp_rem(RatPoly a, const RatPoly& b) {
    rp_trim(a);
    while (rp_deg(a) >= rp_deg(b) && !a.empty()) {
        Rational f = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        a.pop_back();
        rp_trim(a);
    }
    return a;
}

inline RatPoly rp_monic(RatPoly a) {
    rp_trim(a);
    if (a.empty()) return a;
    Rational lead = a.back();
    for (auto& c : a) c /= lead;
    return a;
}

inline RatPoly rp_gcd(RatPoly a, RatPoly b) {
    rp_trim(a);
    rp_trim(b);
    while (!b.empty()) {
        RatPoly r = rp_rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    return rp_monic(std::move(a));
}

inline RatPoly rp_divide_exact(const RatPoly& a, const RatPoly& b) {
    RatPoly rem = a;
    rp_trim(rem);
    RatPoly quot(rem.size() >= b.size() ? rem.size() - b.size() + 1 : 0, Rational(0));
    while (rp_deg(rem) >= rp_deg(b) && !rem.empty()) {
        Rational f = rem.back() / b.back();
        size_t shift = rem.size() - b.size();
        quot[shift] = f;
        for (size_t i = 0; i < b.size(); ++i) rem[i + shift] -= f * b[i];
        rem.pop_back();
        rp_trim(rem);
    }
    return quot;
}

/// Product of the distinct irreducible factors, monic.
inline RatPoly rp_squarefree_part(const RatPoly& a) {
    RatPoly g = rp_gcd(a, rp_derivative(a));
    if (rp_deg(g) <= 0) return rp_monic(a);
    return rp_monic(rp_divide_exact(a, g));
}

/// Sturm chain of a squarefree polynomial.
inline std::vector<RatPoly> sturm_chain(const RatPoly& f) {
    std::vector<RatPoly> chain;
    chain.push_back(f);
    chain.push_back(rp_derivative(f));
    rp_trim(chain.back());
    while (rp_deg(chain.back()) >= 1) {
        RatPoly r = rp_rem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        rp_trim(r);
        if (r.empty()) break;
        chain.push_back(std::move(r));
    }
    return chain;
}

inline int sign_of(const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

inline int sign_changes(const std::vector<int>& signs) {
    int changes = 0, prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

inline int sturm_changes_at(const std::vector<RatPoly>& chain, const Rational& x) {
    std::vector<int> signs;
    for (const auto& f : chain) signs.push_back(sign_of(rp_eval(f, x)));
    return sign_changes(signs);
}

inline int sturm_changes_at_inf(const std::vector<RatPoly>& chain, bool positive) {
    std::vector<int> signs;
    for (const auto& f : chain) {
        if (f.empty()) {
            signs.push_back(0);
            continue;
        }
        int s = sign_of(f.back());
        if (!positive && (rp_deg(f) & 1)) s = -s;
        signs.push_back(s);
    }
    return sign_changes(signs);
}

/// Number of distinct real roots of a squarefree polynomial.
inline int count_real_roots(const RatPoly& f) {
    if (rp_deg(f) <= 0) return 0;
    auto chain = sturm_chain(f);
    return sturm_changes_at_inf(chain, false) - sturm_changes_at_inf(chain, true);
}

/// Number of distinct real roots of a squarefree polynomial in (a, b],
/// assuming f(a) != 0.
inline int count_real_roots_in(const RatPoly& f, const Rational& a, const Rational& b) {
    if (rp_deg(f) <= 0) return 0;
    auto chain = sturm_chain(f);
    return sturm_changes_at(chain, a) - sturm_changes_at(chain, b);
}

}  // namespace ordscan::detail
