#include "ordscan/curve_counts.hpp"

#include "catch_amalgamated.hpp"

#include <vector>

using namespace ordscan;

namespace {

// Independent naive field for the double-loop counting oracle. Uses its own
// modulus (largest in the scan order instead of smallest); the point count
// does not depend on the representation of F_{p^r}.
struct NaiveFq {
    uint32_t p;
    int r;
    std::vector<uint32_t> mod;  // monic, ascending, degree r

    NaiveFq(uint32_t p_in, int r_in) : p(p_in), r(r_in) {
        std::vector<uint32_t> c(static_cast<size_t>(r), p - 1);
        while (true) {
            if (irreducible(c)) {
                mod = c;
                return;
            }
            int i = r - 1;
            while (i >= 0 && c[static_cast<size_t>(i)] == 0) c[static_cast<size_t>(i--)] = p - 1;
            if (i < 0) throw std::logic_error("no irreducible found");
            --c[static_cast<size_t>(i)];
        }
    }

    using V = std::vector<uint32_t>;

    V reduce(V a) const {
        while (a.size() > static_cast<size_t>(r)) {
            uint64_t lead = a.back();
            a.pop_back();
            for (int i = 0; i < r; ++i) {
                uint64_t sub = lead * mod[static_cast<size_t>(i)] % p;
                size_t pos = a.size() - static_cast<size_t>(r) + static_cast<size_t>(i);
                a[pos] = static_cast<uint32_t>((a[pos] + p - sub) % p);
            }
        }
        a.resize(static_cast<size_t>(r), 0);
        return a;
    }

    V mul(const V& a, const V& b) const {
        V prod(2 * static_cast<size_t>(r) - 1, 0);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                prod[static_cast<size_t>(i + j)] =
                    static_cast<uint32_t>((prod[static_cast<size_t>(i + j)] + static_cast<uint64_t>(a[static_cast<size_t>(i)]) * b[static_cast<size_t>(j)]) % p);
        return reduce(std::move(prod));
    }

    bool irreducible(const std::vector<uint32_t>& c) const {
        // no monic factor of degree <= r/2, by trial division
        std::vector<uint32_t> f(c.begin(), c.end());
        f.push_back(1);
        for (int d = 1; 2 * d <= r; ++d) {
            std::vector<uint32_t> g(static_cast<size_t>(d), 0);
            while (true) {
                std::vector<uint32_t> cand(g.begin(), g.end());
                cand.push_back(1);
                std::vector<uint32_t> rem = f;
                while (rem.size() >= cand.size() && !rem.empty()) {
                    uint64_t lead = rem.back();
                    size_t shift = rem.size() - cand.size();
                    for (size_t i = 0; i < cand.size(); ++i) {
                        uint64_t sub = lead * cand[i] % p;
                        rem[i + shift] = static_cast<uint32_t>((rem[i + shift] + p - sub) % p);
                    }
                    while (!rem.empty() && rem.back() == 0) rem.pop_back();
                }
                if (rem.empty()) return false;
                int i = 0;
                while (i < d && ++g[static_cast<size_t>(i)] == p) g[static_cast<size_t>(i++)] = 0;
                if (i == d) break;
            }
        }
        return true;
    }

    V from_index(uint64_t idx) const {
        V e(static_cast<size_t>(r), 0);
        for (int i = 0; i < r; ++i) {
            e[static_cast<size_t>(i)] = static_cast<uint32_t>(idx % p);
            idx /= p;
        }
        return e;
    }
};

// affine double loop + one point at infinity
uint64_t naive_count(const CurveSpec& curve, uint32_t p, int r) {
    NaiveFq F(p, r);
    uint64_t q = 1;
    for (int i = 0; i < r; ++i) q *= p;
    // f coefficients in the prime subfield
    std::vector<NaiveFq::V> fc;
    for (const auto& c : curve.f) {
        BigInt red = c % p;
        if (red < 0) red += p;
        NaiveFq::V v(static_cast<size_t>(r), 0);
        v[0] = static_cast<uint32_t>(red);
        fc.push_back(v);
    }
    uint64_t count = 0;
    for (uint64_t xi = 0; xi < q; ++xi) {
        NaiveFq::V x = F.from_index(xi);
        NaiveFq::V val = fc.back();
        for (size_t i = fc.size() - 1; i-- > 0;) {
            val = F.mul(val, x);
            for (int k = 0; k < r; ++k) val[static_cast<size_t>(k)] = (val[static_cast<size_t>(k)] + fc[i][static_cast<size_t>(k)]) % p;
        }
        for (uint64_t yi = 0; yi < q; ++yi) {
            NaiveFq::V y = F.from_index(yi);
            NaiveFq::V ym = y;
            for (int k = 1; k < curve.m; ++k) ym = F.mul(ym, y);
            if (ym == val) ++count;
        }
    }
    return count + 1;
}

const CurveSpec kCm = CurveSpec::elliptic({BigInt(1), 0, 0, BigInt(1)});
const CurveSpec kPicard3 = CurveSpec::superelliptic({BigInt(1), BigInt(1), 0, 0, BigInt(1)});
const CurveSpec kPicard4 = CurveSpec::superelliptic({BigInt(1), BigInt(1), 0, 0, 0, BigInt(1)});

}  // namespace

TEST_CASE("discriminants of the standard curves") {
    CHECK(kCm.disc == -27);
    CHECK(kPicard3.disc == 229);   // -27 p^4 + 256 q^3 for x^4 + p x + q
    CHECK(kPicard4.disc == 3381);  // 5^5 q^4 + 4^4 p^5 for x^5 + p x + q
    CHECK(poly_discriminant({BigInt(-1), 0, BigInt(1)}) == 4);
    CHECK_THROWS_AS(CurveSpec::elliptic({0, 0, 0, BigInt(1)}), std::invalid_argument);  // x^3 is inseparable
}

TEST_CASE("curve model validation") {
    CHECK(kCm.genus == 1);
    CHECK(kPicard3.genus == 3);
    CHECK(kPicard4.genus == 4);
    CHECK_THROWS_AS(CurveSpec::superelliptic({BigInt(1), BigInt(1), 0, BigInt(1)}), std::invalid_argument);  // deg 3
    CHECK_THROWS_AS(CurveSpec::make(CurveModel::Elliptic, 2, {BigInt(1), 0, 0, 0, BigInt(1)}), std::invalid_argument);
}

TEST_CASE("good_reduction examples") {
    CHECK(good_reduction(kCm, 7));
    CHECK_FALSE(good_reduction(kCm, 3));  // p | disc
    CHECK_FALSE(good_reduction(kCm, 2));  // p | m
    CHECK_FALSE(good_reduction(kPicard3, 3));
    CHECK_FALSE(good_reduction(kPicard3, 229));
    CHECK(good_reduction(kPicard3, 7));
    CHECK_FALSE(good_reduction(kPicard4, 7));  // 7 | 3381
}

TEST_CASE("count_points examples") {
    CHECK(count_points(kCm, 7, 1) == 12);
    CHECK(count_points(kPicard3, 5, 1) == 6);  // cube map bijective, one y per x
    CHECK(count_points(kPicard3, 7, 1) == naive_count(kPicard3, 7, 1));
    CHECK_THROWS_AS(count_points(kCm, 3, 1), std::invalid_argument);
}

TEST_CASE("table counting agrees with the naive double loop") {
    SECTION("r = 1, all good p <= 31, both genera and elliptic") {
        for (uint32_t p : {5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u}) {
            for (const CurveSpec* curve : {&kCm, &kPicard3, &kPicard4}) {
                if (!good_reduction(*curve, p)) continue;
                INFO("p = " << p << " curve " << curve->to_string());
                CHECK(count_points(*curve, p, 1) == naive_count(*curve, p, 1));
            }
        }
    }
    SECTION("r = 2") {
        for (uint32_t p : {5u, 7u, 11u, 13u}) {
            for (const CurveSpec* curve : {&kCm, &kPicard3}) {
                if (!good_reduction(*curve, p)) continue;
                if (curve->genus < 2) continue;
                CHECK(count_points(*curve, p, 2) == naive_count(*curve, p, 2));
            }
        }
    }
    SECTION("r = 3") {
        for (uint32_t p : {5u, 7u, 11u}) {
            if (!good_reduction(kPicard3, p)) continue;
            CHECK(count_points(kPicard3, p, 3) == naive_count(kPicard3, p, 3));
        }
    }
}

TEST_CASE("lpoly_from_counts examples") {
    LPolynomial L = lpoly_from_counts({12}, 7, 1);
    CHECK(L.a == std::vector<BigInt>{7, 4, 1});

    LPolynomial Lss = lpoly_from_counts({6}, 5, 1);  // supersingular shape N = p + 1
    CHECK(Lss.a == std::vector<BigInt>{5, 0, 1});

    LPolynomial L3 = lpoly_from_counts({6, 26, 126}, 5, 3);  // N_r = p^r + 1
    CHECK(L3.a == std::vector<BigInt>{125, 0, 0, 0, 0, 0, 1});
}

TEST_CASE("lpoly_from_counts rejects Weil-bound violations") {
    CHECK_THROWS_AS(lpoly_from_counts({100}, 7, 1), WeilViolation);
    CHECK_THROWS_AS(lpoly_from_counts({0}, 11, 1), WeilViolation);
}

TEST_CASE("weil_check examples") {
    CHECK(weil_check(LPolynomial(7, 1, {7, 0, 1})));
    CHECK(weil_check(LPolynomial(7, 1, {7, -3, 1})));
    CHECK_FALSE(weil_check(LPolynomial(7, 1, {7, -6, 1})));  // real roots 3 +- sqrt(2)
    // repeated-root cases must still pass
    CHECK(weil_check(LPolynomial(4, 1, {4, -4, 1})));                    // (T-2)^2
    CHECK(weil_check(LPolynomial(5, 3, {125, 0, 75, 0, 15, 0, 1})));     // (T^2+5)^3
}

TEST_CASE("LPolynomial validates the functional equation") {
    CHECK_THROWS_AS(LPolynomial(7, 1, {6, 4, 1}), std::invalid_argument);
    CHECK_THROWS_AS(LPolynomial(7, 1, {7, 4, 2}), std::invalid_argument);
    CHECK_THROWS_AS(LPolynomial(12, 1, {12, 0, 1}), std::invalid_argument);  // q not a prime power
}

TEST_CASE("power sums re-expand to the input counts") {
    for (uint32_t p : {7u, 11u, 13u}) {
        for (const CurveSpec* curve : {&kCm, &kPicard3}) {
            if (!good_reduction(*curve, p)) continue;
            const int g = curve->genus;
            std::vector<uint64_t> counts;
            for (int r = 1; r <= g; ++r) counts.push_back(count_points(*curve, p, r));
            LPolynomial L = lpoly_from_counts(counts, p, g);
            auto s = power_sums(L, g);
            for (int r = 1; r <= g; ++r) {
                BigInt expect = ipow(BigInt(p), static_cast<unsigned>(r)) + 1 - BigInt(counts[static_cast<size_t>(r - 1)]);
                CHECK(s[static_cast<size_t>(r)] == expect);
            }
        }
    }
}

TEST_CASE("superelliptic curves at p = 2 mod 3 have N_1 = p + 1 and zero top trace") {
    for (uint32_t p : {5u, 11u, 17u, 23u, 29u}) {
        if (!good_reduction(kPicard3, p)) continue;
        CHECK(count_points(kPicard3, p, 1) == p + 1);
        std::vector<uint64_t> counts;
        for (int r = 1; r <= 3; ++r) counts.push_back(count_points(kPicard3, p, r));
        LPolynomial L = lpoly_from_counts(counts, p, 3);
        CHECK(L.a[5] == 0);
    }
}

TEST_CASE("Weil bound holds for scanned good primes") {
    for (uint32_t p : {5u, 7u, 11u, 13u, 17u, 19u}) {
        if (!good_reduction(kPicard3, p)) continue;
        for (int r = 1; r <= 3; ++r) {
            BigInt n = count_points(kPicard3, p, r);
            BigInt mid = ipow(BigInt(p), static_cast<unsigned>(r)) + 1;
            BigInt dev = n - mid;
            CHECK(dev * dev <= 36 * ipow(BigInt(p), static_cast<unsigned>(r)));
        }
    }
}
