#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qk/novikov.hpp"

using namespace qk;

namespace {
std::mt19937 rng(4242);

NovikovSeries<Rational> random_series(int r, int cutoff) {
    std::uniform_int_distribution<int> coeff(-4, 4);
    NovikovSeries<Rational> s(r, cutoff);
    for (const Degree& d : all_degrees(r, cutoff)) s.set(d, Rational(coeff(rng)));
    return s;
}
}  // namespace

TEST_CASE("degree ordering") {
    auto ds = all_degrees(2, 2);
    REQUIRE(ds.size() == 6);
    CHECK(ds[0] == Degree({0, 0}));
    CHECK(ds[1] == Degree({0, 1}));
    CHECK(ds[2] == Degree({1, 0}));
    CHECK(ds[3] == Degree({0, 2}));
    CHECK(ds[4] == Degree({1, 1}));
    CHECK(ds[5] == Degree({2, 0}));
    auto below = degrees_below(Degree({1, 2}));
    CHECK(below.size() == 6);
}

TEST_CASE("series arithmetic and truncation") {
    // Q1 * Q1 at cutoff 1 -> 0
    NovikovSeries<Rational> q1(1, 1);
    q1.set(Degree(std::vector<int>{1}), Rational(1));
    CHECK((q1 * q1).is_zero());

    // (1+Q)(1-Q) at cutoff 2 = 1 - Q^2
    NovikovSeries<Rational> a(1, 2), b(1, 2);
    a.set(Degree(std::vector<int>{0}), Rational(1));
    a.set(Degree(std::vector<int>{1}), Rational(1));
    b.set(Degree(std::vector<int>{0}), Rational(1));
    b.set(Degree(std::vector<int>{1}), Rational(-1));
    NovikovSeries<Rational> p = a * b;
    CHECK(p.at(Degree(std::vector<int>{0})) == Rational(1));
    CHECK(p.at(Degree(std::vector<int>{1})) == Rational(0));
    CHECK(p.at(Degree(std::vector<int>{2})) == Rational(-1));

    // Q1Q2 + Q1Q2 = 2 Q1Q2
    NovikovSeries<Rational> c(2, 2);
    c.set(Degree({1, 1}), Rational(1));
    CHECK((c + c).at(Degree({1, 1})) == Rational(2));

    NovikovSeries<Rational> wrong(2, 3);
    CHECK_THROWS_AS(c + wrong, Error);
}

TEST_CASE("mul associativity/commutativity up to cutoff") {
    for (int it = 0; it < 20; ++it) {
        auto a = random_series(2, 3), b = random_series(2, 3), c = random_series(2, 3);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("qshift") {
    NovikovSeries<QRat> s(2, 4, QRat());
    s.set(Degree({2, 0}), QRat(3));
    s.set(Degree({1, 3}), QRat(1));
    s.set(Degree({0, 0}), QRat(5));
    auto sh = qshift(s, 0, 1);
    CHECK(sh.at(Degree({2, 0})) == QRat(3).q_shifted(2));
    CHECK(sh.at(Degree({0, 0})) == QRat(5));  // constants unchanged
    auto sh2 = qshift(s, 1, 1);
    CHECK(sh2.at(Degree({1, 3})) == QRat::q(3));

    // compose: shift(i,a) then shift(i,b) = shift(i,a+b); distinct i commute
    auto lhs = qshift(qshift(s, 0, 2), 0, -1);
    CHECK(lhs == qshift(s, 0, 1));
    CHECK(qshift(qshift(s, 0, 1), 1, 2) == qshift(qshift(s, 1, 2), 0, 1));
}

TEST_CASE("matrix series inversion") {
    // invert(I - E Q) = sum E^k Q^k
    int n = 2;
    Matrix<QRat> E(n, n);
    E(0, 1) = QRat(1);
    E(1, 0) = QRat(1);
    NovikovSeries<Matrix<QRat>> m(1, 4, Matrix<QRat>(n, n));
    m.set(Degree(std::vector<int>{0}), Matrix<QRat>::identity(n));
    m.set(Degree(std::vector<int>{1}), -E);
    auto inv = invert_matrix_series(m, qrat_ring_inverse);
    for (int d = 0; d <= 4; ++d) {
        Matrix<QRat> expect = E.pow(d);
        CHECK(inv.at(Degree(std::vector<int>{d})) == expect);
    }
    // identity stays identity
    NovikovSeries<Matrix<QRat>> id(1, 4, Matrix<QRat>(n, n));
    id.set(Degree(std::vector<int>{0}), Matrix<QRat>::identity(n));
    CHECK(invert_matrix_series(id, qrat_ring_inverse) == id);
    // two-sided inverse on random series with unit leading term
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int it = 0; it < 10; ++it) {
        NovikovSeries<Matrix<QRat>> r(2, 2, Matrix<QRat>(n, n));
        for (const Degree& d : all_degrees(2, 2)) {
            Matrix<QRat> mat(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) mat(i, j) = QRat(coeff(rng));
            if (d.is_zero()) mat = Matrix<QRat>::identity(n);
            r.set(d, mat);
        }
        auto rinv = invert_matrix_series(r, qrat_ring_inverse);
        NovikovSeries<Matrix<QRat>> id2(2, 2, Matrix<QRat>(n, n));
        id2.set(Degree::zero(2), Matrix<QRat>::identity(n));
        CHECK(r * rinv == id2);
        CHECK(rinv * r == id2);
    }
}
