#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gfl/fields.hpp"

#include <set>
#include <stdexcept>

using namespace gfl;

TEST_CASE("prime field arithmetic") {
    FieldSpec f = default_field_spec(5);
    CHECK(f.p() == 5);
    CHECK(f.m() == 1);
    CHECK(f.q() == 5);
    CHECK(f.add(3, 4) == 2);
    CHECK(f.sub(1, 3) == 3);
    CHECK(f.neg(2) == 3);
    CHECK(f.mul(3, 4) == 2);
    CHECK(f.inv(2) == 3);
    CHECK(f.pow(2, 4) == 1);
    CHECK(f.from_int(12) == 2);
}

TEST_CASE("GF(4) multiplication follows t^2 = t + 1") {
    FieldSpec f = default_field_spec(4);
    // packed 2 = t, packed 3 = t + 1
    CHECK(f.mul(2, 2) == 3);
    CHECK(f.mul(2, 3) == 1);
    CHECK(f.mul(3, 3) == 2);
    CHECK(f.frobenius(2) == 3);  // conjugate root
    CHECK(f.frobenius(3) == 2);
    CHECK(f.add(2, 3) == 1);     // characteristic 2: t + (t+1) = 1
}

TEST_CASE("GF(8) powers of the generator") {
    FieldSpec f = default_field_spec(8);
    // t^3 = t + 1 with packed t = 2
    CHECK(f.mul(2, 2) == 4);
    CHECK(f.mul(4, 2) == 3);
    uint16_t x = 2;
    std::set<uint16_t> orbit;
    for (int i = 0; i < 7; ++i) {
        orbit.insert(x);
        x = f.mul(x, 2);
    }
    CHECK(orbit.size() == 7);  // t generates the full multiplicative group
    CHECK(x == 2);
}

TEST_CASE("GF(9) presentations: shipped modulus and an explicit one") {
    FieldSpec def = default_field_spec(9);
    CHECK(def.p() == 3);
    CHECK(def.m() == 2);
    // shipped modulus t^2 + 2t + 2: t * t = t + 1, packed 3 * 3 = 4
    CHECK(def.mul(3, 3) == 4);

    FieldSpec alt(3, 2, {1, 0, 1});  // t^2 + 1: t * t = -1 = 2
    CHECK(alt.mul(3, 3) == 2);
    CHECK_FALSE(def.same(alt));
    CHECK(def.same(default_field_spec(9)));
}

TEST_CASE("every nonzero element has a working inverse") {
    for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
        FieldSpec f = default_field_spec(q);
        for (unsigned a = 1; a < q; ++a)
            CHECK(f.mul(uint16_t(a), f.inv(uint16_t(a))) == 1);
        CHECK_THROWS_AS(f.inv(0), std::domain_error);
    }
}

TEST_CASE("coefficient round trip and Frobenius order") {
    for (unsigned q : {4u, 8u, 9u}) {
        FieldSpec f = default_field_spec(q);
        for (unsigned a = 0; a < q; ++a) {
            CHECK(f.from_coeffs(f.coeffs_of(uint16_t(a))) == a);
            CHECK(f.frobenius(uint16_t(a), f.m()) == a);  // full power of p fixes all
            CHECK(f.frobenius(uint16_t(a)) == f.pow(uint16_t(a), f.p()));
        }
        // the prime subfield is exactly the Frobenius fixed points
        unsigned fixed = 0;
        for (unsigned a = 0; a < q; ++a)
            if (f.frobenius(uint16_t(a)) == a) ++fixed;
        CHECK(fixed == f.p());
    }
}

TEST_CASE("field elements compose with operators") {
    FieldSpec f = default_field_spec(9);
    FieldElement a(f, 3), b(f, 5);
    CHECK((a + b - b) == a);
    CHECK((a * b / b) == a);
    CHECK((-a + a).value() == 0);
    CHECK(a.pow(8).value() == 1);
    CHECK(a.inverse() * a == FieldElement(f, 1));
}

TEST_CASE("Lucas binomials against direct Pascal reduction") {
    for (unsigned p : {2u, 3u, 5u, 7u}) {
        // Pascal's triangle mod p up to n = 40
        std::vector<std::vector<unsigned>> row{{1}};
        for (unsigned n = 1; n <= 40; ++n) {
            std::vector<unsigned> nxt(n + 1, 1);
            for (unsigned k = 1; k < n; ++k) nxt[k] = (row.back()[k - 1] + row.back()[k]) % p;
            row.push_back(nxt);
        }
        for (unsigned n = 0; n <= 40; ++n)
            for (unsigned k = 0; k <= n; ++k)
                CHECK(binom_mod_p(n, k, p) == row[n][k]);
        CHECK(binom_mod_p(5, 9, p) == 0);
    }
}

TEST_CASE("carry form of the binomial matches the Lucas value") {
    for (unsigned p : {2u, 3u, 5u}) {
        for (uint64_t a = 0; a <= 64; ++a)
            for (uint64_t b = 0; b <= 64; ++b)
                CHECK(binom_sum_mod_p(a, b, p) == binom_mod_p(a + b, a, p));
    }
    // characteristic 2 shortcut: nonzero exactly when the supports are disjoint
    CHECK(binom_sum_mod_p(0b1010, 0b0101, 2) == 1);
    CHECK(binom_sum_mod_p(0b1010, 0b0010, 2) == 0);
}

TEST_CASE("bracket values and overflow guard") {
    CHECK(bracket(0, 2) == 0);
    CHECK(bracket(1, 2) == 1);
    CHECK(bracket(3, 2) == 7);
    CHECK(bracket(2, 3) == 8);
    CHECK(bracket(2, 4) == 15);
    CHECK(bracket(3, 4) == 63);
    CHECK(bracket(63, 2) == UINT64_MAX / 2);
    CHECK_THROWS_AS(bracket(64, 2), std::overflow_error);
    CHECK_THROWS_AS(bracket(41, 3), std::overflow_error);

    CHECK(bracket_seq({2, 1}, 2) == 4);
    CHECK(bracket_seq({4, 2}, 2) == 18);
    CHECK(bracket_seq({}, 3) == 0);
}

TEST_CASE("field spec parsing") {
    CHECK(parse_field_spec("4").same(default_field_spec(4)));
    FieldSpec alt = parse_field_spec("3,2,1,0,1");
    CHECK(alt.p() == 3);
    CHECK(alt.m() == 2);
    CHECK(alt.modulus() == std::vector<unsigned>{1, 0, 1});
    CHECK_THROWS(parse_field_spec("6"));       // not a prime power we ship
    CHECK_THROWS(parse_field_spec("3,2,1"));   // truncated modulus
    CHECK_THROWS(parse_field_spec(""));
}

TEST_CASE("tables exist for small fields and agree with slow arithmetic") {
    FieldSpec f = default_field_spec(8);
    REQUIRE(f.has_tables());
    for (unsigned a = 0; a < 8; ++a) {
        const uint16_t* row = f.mul_row(uint16_t(a));
        for (unsigned b = 0; b < 8; ++b) CHECK(row[b] == f.mul(uint16_t(a), uint16_t(b)));
    }
}
