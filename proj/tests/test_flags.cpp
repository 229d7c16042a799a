#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gfl/flags.hpp"

#include <algorithm>
#include <random>

using namespace gfl;

namespace {

MatrixFq random_invertible(const FieldSpec& f, unsigned d, std::mt19937& rng) {
    std::uniform_int_distribution<unsigned> dist(0, f.q() - 1);
    while (true) {
        MatrixFq m(f, d, d);
        for (unsigned i = 0; i < d; ++i)
            for (unsigned j = 0; j < d; ++j) m(i, j) = uint16_t(dist(rng));
        if (m.rank() == d) return m;
    }
}

}  // namespace

TEST_CASE("canonical forms identify equal flags and reject dependence") {
    FieldSpec f = default_field_spec(2);
    std::vector<uint16_t> e1{1, 0}, e2{0, 1}, e12{1, 1};
    auto a = canonicalize(f, {e1, e2});
    auto b = canonicalize(f, {e1, e12});  // same chain: <e1> < F^2
    REQUIRE(a);
    REQUIRE(b);
    CHECK(*a == *b);
    auto c = canonicalize(f, {e12, e2});  // starts at <e1+e2>
    REQUIRE(c);
    CHECK(*a != *c);
    CHECK_FALSE(canonicalize(f, {e1, e1}));
    CHECK_FALSE(canonicalize(f, {e12, e1, e2}));  // third vector dependent

    // scaling normalizes the lead to 1
    FieldSpec f3 = default_field_spec(3);
    auto s = canonicalize(f3, {{2, 1, 0}});
    REQUIRE(s);
    CHECK(s->rows[0] == std::vector<uint16_t>{1, 2, 0});
}

TEST_CASE("flag counts") {
    FieldSpec f2 = default_field_spec(2);
    CHECK(flag_count(f2, 2, 1) == 3);
    CHECK(flag_count(f2, 2, 2) == 3);
    CHECK(flag_count(f2, 3, 1) == 7);
    CHECK(flag_count(f2, 3, 2) == 21);
    CHECK(flag_count(f2, 3, 3) == 21);
    CHECK(flag_count(f2, 4, 2) == 105);
    CHECK(flag_count(f2, 2, 3) == 0);
    CHECK(flag_count(f2, 5, 0) == 1);
    FieldSpec f3 = default_field_spec(3);
    CHECK(flag_count(f3, 2, 1) == 4);
    CHECK(flag_count(f3, 3, 2) == 52);
    FieldSpec f4 = default_field_spec(4);
    CHECK(flag_count(f4, 2, 1) == 5);
}

TEST_CASE("enumeration is complete, canonical and sorted") {
    for (unsigned q : {2u, 3u, 4u}) {
        FieldSpec f = default_field_spec(q);
        for (unsigned d = 0; d <= 3; ++d)
            for (unsigned r = 0; r <= 4; ++r) {
                auto flags = enumerate_flags(f, d, r);
                CHECK(flags.size() == flag_count(f, d, r));
                CHECK(std::is_sorted(flags.begin(), flags.end()));
                CHECK(std::adjacent_find(flags.begin(), flags.end()) == flags.end());
                for (auto& fl : flags) {
                    REQUIRE(fl.length() == r);
                    CHECK(fl.d == d);
                    if (r == 0) continue;  // no generators, nothing to reduce
                    auto re = canonicalize(f, fl.rows);
                    REQUIRE(re);
                    CHECK(*re == fl);  // already in canonical form
                }
                auto idx = flag_index(flags);
                CHECK(idx.size() == flags.size());
                for (size_t i = 0; i < flags.size(); ++i) CHECK(idx.at(flags[i]) == i);
            }
    }
}

TEST_CASE("flag_map pushes chains forward") {
    FieldSpec f = default_field_spec(2);
    auto flags = enumerate_flags(f, 3, 2);
    CHECK(flags.size() == 21);
    MatrixFq id = MatrixFq::identity(f, 3);
    for (auto& fl : flags) {
        auto im = flag_map(id, fl);
        REQUIRE(im);
        CHECK(*im == fl);
    }
    // a rank-2 projection collapses any flag whose step meets the kernel
    MatrixFq proj(f, 3, 3);
    proj(0, 0) = proj(1, 1) = 1;  // kills e3
    size_t collapsed = 0, kept = 0;
    for (auto& fl : flags) (flag_map(proj, fl) ? kept : collapsed)++;
    CHECK(collapsed > 0);
    CHECK(kept > 0);
    CHECK(kept + collapsed == 21);
    CHECK_FALSE(flag_map(MatrixFq(f, 3, 3), flags[0]));  // zero map collapses all
}

TEST_CASE("invertible maps permute the flag basis") {
    std::mt19937 rng(21);
    for (unsigned q : {2u, 3u}) {
        FieldSpec f = default_field_spec(q);
        MatrixFq g = random_invertible(f, 3, rng);
        auto flags = enumerate_flags(f, 3, 2);
        MatrixFq m = flag_module_matrix(g, 2);
        CHECK(m.rows() == flags.size());
        CHECK(m.cols() == flags.size());
        CHECK(m.rank() == flags.size());
        // permutation matrix: exactly one 1 per column, nothing else
        for (size_t c = 0; c < m.cols(); ++c) {
            unsigned ones = 0;
            for (size_t r = 0; r < m.rows(); ++r) {
                if (m(r, c) != 0) {
                    CHECK(m(r, c) == 1);
                    ++ones;
                }
            }
            CHECK(ones == 1);
        }
        // and it is the permutation flag_map computes
        auto idx = flag_index(flags);
        for (size_t c = 0; c < flags.size(); ++c) {
            auto im = flag_map(g, flags[c]);
            REQUIRE(im);
            CHECK(m(idx.at(*im), c) == 1);
        }
    }
}

TEST_CASE("flag module functor respects composition") {
    std::mt19937 rng(22);
    FieldSpec f = default_field_spec(3);
    MatrixFq a = random_invertible(f, 3, rng);
    MatrixFq b = random_invertible(f, 3, rng);
    CHECK(flag_module_matrix(compose(a, b), 2) ==
          compose(flag_module_matrix(a, 2), flag_module_matrix(b, 2)));
    // scalar matrices act as the identity on flags
    MatrixFq two = MatrixFq(f, 3, 3);
    two(0, 0) = two(1, 1) = two(2, 2) = 2;
    CHECK(flag_module_matrix(two, 2) == MatrixFq::identity(f, 52));
}

TEST_CASE("non-invertible maps send collapsing flags to zero columns") {
    FieldSpec f = default_field_spec(2);
    MatrixFq proj(f, 3, 3);
    proj(0, 0) = proj(1, 1) = 1;
    MatrixFq m = flag_module_matrix(proj, 2);
    auto flags = enumerate_flags(f, 3, 2);
    for (size_t c = 0; c < flags.size(); ++c) {
        bool zero_col = true;
        for (size_t r = 0; r < m.rows(); ++r) zero_col &= m(r, c) == 0;
        CHECK(zero_col == !flag_map(proj, flags[c]).has_value());
    }
}

TEST_CASE("truncation forgets the tail of the chain") {
    FieldSpec f = default_field_spec(2);
    auto flags = enumerate_flags(f, 3, 2);
    for (auto& fl : flags) {
        FlagCanonical t = truncate(fl, 1);
        CHECK(t.length() == 1);
        CHECK(t.rows[0] == fl.rows[0]);
    }
    MatrixFq pi = truncation_matrix(f, 3, 2, 1);
    CHECK(pi.rows() == 7);
    CHECK(pi.cols() == 21);
    // each length-2 flag maps to exactly one line, each line has q+1 = 3
    // extensions, and the matrix has full rank
    for (size_t c = 0; c < pi.cols(); ++c) {
        unsigned ones = 0;
        for (size_t r = 0; r < pi.rows(); ++r) ones += pi(r, c) != 0;
        CHECK(ones == 1);
    }
    for (size_t r = 0; r < pi.rows(); ++r) {
        unsigned fiber = 0;
        for (size_t c = 0; c < pi.cols(); ++c) fiber += pi(r, c) != 0;
        CHECK(fiber == 3);
    }
    CHECK(pi.rank() == 7);
    CHECK(truncation_matrix(f, 3, 2, 2) == MatrixFq::identity(f, 21));
}

TEST_CASE("diagonal matrix places each flag on its own square") {
    FieldSpec f = default_field_spec(2);
    unsigned d = 2, r = 1;
    auto flags = enumerate_flags(f, d, r);
    MatrixFq diag = flag_diag_matrix(f, d, r);
    size_t n = flags.size();
    CHECK(diag.rows() == n * n);
    CHECK(diag.cols() == n);
    for (size_t c = 0; c < n; ++c)
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                uint16_t want = (i == c && j == c) ? 1 : 0;
                CHECK(diag(i * n + j, c) == want);
            }
}
