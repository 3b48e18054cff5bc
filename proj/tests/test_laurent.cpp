#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcs/laurent.hpp"
#include "oracles.hpp"

using lcs::Field;
using lcs::LaurentMatrix;
using lcs::LaurentPoly;
using lcs::Rat;

namespace {

LaurentPoly binomial(Field f, Rat c0, Rat c1) {
    // c0 + c1 * t
    return LaurentPoly::constant(f, c0) + LaurentPoly::monomial(f, 1, c1);
}

LaurentPoly random_poly(std::mt19937& rng, Field f) {
    std::uniform_int_distribution<int> exp_d(-4, 4), n_terms(0, 4), coeff_d(-5, 5);
    LaurentPoly p(f);
    int k = n_terms(rng);
    for (int i = 0; i < k; ++i)
        p = p + LaurentPoly::monomial(f, exp_d(rng), Rat(coeff_d(rng)));
    return p;
}

LaurentMatrix random_matrix(std::mt19937& rng, Field f, int rows, int cols) {
    LaurentMatrix m(rows, cols, f);
    std::uniform_int_distribution<int> fill(0, 2);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (fill(rng) == 0) m.at(i, j) = random_poly(rng, f);
    return m;
}

} // namespace

TEST_CASE("laurent_mul examples") {
    // (1 - t)(1 + t) = 1 - t^2
    auto q = Field::Rationals;
    auto lhs = binomial(q, 1, -1) * binomial(q, 1, 1);
    auto expect = LaurentPoly::constant(q, 1) - LaurentPoly::monomial(q, 2, 1);
    CHECK(lhs == expect);

    // t^-1 * t = 1
    CHECK(LaurentPoly::monomial(q, -1, 1) * LaurentPoly::monomial(q, 1, 1) ==
          LaurentPoly::one(q));

    // (1 + t)^2 over F2 = 1 + t^2
    auto f2 = Field::GF2;
    auto sq = binomial(f2, 1, 1) * binomial(f2, 1, 1);
    CHECK(sq == LaurentPoly::constant(f2, 1) + LaurentPoly::monomial(f2, 2, 1));
}

TEST_CASE("field mismatch is a typed error") {
    auto a = LaurentPoly::one(Field::Rationals);
    auto b = LaurentPoly::one(Field::GF2);
    CHECK_THROWS_AS(a * b, lcs::Error);
    try {
        a* b;
    } catch (const lcs::Error& e) {
        CHECK(e.kind() == lcs::ErrorKind::FieldMismatch);
    }
}

TEST_CASE("rank examples") {
    auto q = Field::Rationals;
    LaurentMatrix a(1, 1, q);
    a.at(0, 0) = binomial(q, 1, -1);
    CHECK(lcs::rank_over_fraction_field(a) == 1);

    LaurentMatrix z(2, 2, q);
    CHECK(lcs::rank_over_fraction_field(z) == 0);

    // [[1-t, t], [t, 1-t]]: det = 1 - 2t != 0, full rank
    LaurentMatrix m(2, 2, q);
    m.at(0, 0) = binomial(q, 1, -1);
    m.at(0, 1) = LaurentPoly::monomial(q, 1, 1);
    m.at(1, 0) = LaurentPoly::monomial(q, 1, 1);
    m.at(1, 1) = binomial(q, 1, -1);
    CHECK(lcs::rank_over_fraction_field(m) == 2);
}

TEST_CASE("rank of a singular matrix with laurent entries") {
    auto q = Field::Rationals;
    // second row = t * first row
    LaurentMatrix m(2, 2, q);
    m.at(0, 0) = binomial(q, 1, -1);
    m.at(0, 1) = binomial(q, 2, 3);
    m.at(1, 0) = m.at(0, 0).shifted(1);
    m.at(1, 1) = m.at(0, 1).shifted(1);
    CHECK(lcs::rank_over_fraction_field(m) == 1);
}

TEST_CASE("exact division round trip") {
    std::mt19937 rng(7);
    for (int it = 0; it < 200; ++it) {
        Field f = it % 2 ? Field::GF2 : Field::Rationals;
        auto a = random_poly(rng, f);
        auto b = random_poly(rng, f);
        if (b.is_zero()) continue;
        auto q = LaurentPoly::divide_exact(a * b, b);
        CHECK(q == a);
    }
}

TEST_CASE("ring axioms on randomized triples") {
    std::mt19937 rng(11);
    for (int it = 0; it < 200; ++it) {
        Field f = it % 2 ? Field::GF2 : Field::Rationals;
        auto a = random_poly(rng, f), b = random_poly(rng, f), c = random_poly(rng, f);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a * b == b * a);
    }
}

TEST_CASE("rank(A) == rank(A^T) on randomized matrices up to 8x8") {
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> size_d(1, 8);
    for (int it = 0; it < 60; ++it) {
        Field f = it % 3 ? Field::Rationals : Field::GF2;
        auto m = random_matrix(rng, f, size_d(rng), size_d(rng));
        CHECK(lcs::rank_over_fraction_field(m) ==
              lcs::rank_over_fraction_field(m.transposed()));
    }
}

TEST_CASE("rank invariant under scaling a row by a unit monomial") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> size_d(1, 6), exp_d(-3, 3), sign_d(0, 1);
    for (int it = 0; it < 60; ++it) {
        Field f = it % 2 ? Field::GF2 : Field::Rationals;
        auto m = random_matrix(rng, f, size_d(rng), size_d(rng));
        int before = lcs::rank_over_fraction_field(m);
        std::uniform_int_distribution<int> row_d(0, m.rows - 1);
        int row = row_d(rng);
        Rat c = sign_d(rng) ? Rat(1) : Rat(-1);
        long k = exp_d(rng);
        for (int j = 0; j < m.cols; ++j)
            m.at(row, j) = m.at(row, j).shifted(k).scaled(c);
        CHECK(lcs::rank_over_fraction_field(m) == before);
    }
}

TEST_CASE("rank agrees with random rational evaluation oracle") {
    // Matrices with entries 0 or +-t^k: evaluate t at a random rational and
    // compare exact numeric rank with the fraction-field rank.
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> size_d(1, 6), exp_d(-3, 3), kind_d(0, 3);
    std::uniform_int_distribution<int> num_d(7, 200), den_d(3, 97);
    for (int it = 0; it < 100; ++it) {
        int rows = size_d(rng), cols = size_d(rng);
        LaurentMatrix m(rows, cols, Field::Rationals);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                int kind = kind_d(rng);
                if (kind == 0) continue;
                Rat c = (kind == 1) ? Rat(1) : Rat(-1);
                m.at(i, j) = LaurentPoly::monomial(Field::Rationals, exp_d(rng), c);
            }
        // A random rational with large height; a polynomial identity failing
        // only at such points would need enormous coefficients.
        Rat t(num_d(rng) * 1009 + 1, den_d(rng));
        std::vector<std::vector<Rat>> num(rows, std::vector<Rat>(cols));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) num[i][j] = m.at(i, j).eval(t);
        CHECK(lcs::rank_over_fraction_field(m) == oracle::rational_rank(num));
    }
}

TEST_CASE("canonical form drops zero coefficients") {
    auto q = Field::Rationals;
    auto p = binomial(q, 1, 1) - binomial(q, 1, 1);
    CHECK(p.is_zero());
    CHECK(p.term_count() == 0);
    auto g = LaurentPoly::constant(Field::GF2, 2);
    CHECK(g.is_zero());
}
