#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qk/polyroots.hpp"
#include "qk/qrat.hpp"

using namespace qk;

namespace {

std::mt19937 rng(20240817);

QRat random_qrat() {
    std::uniform_int_distribution<int> coeff(-5, 5), exp(-3, 4), m(1, 3), mult(0, 2);
    QLaurent num;
    for (int i = 0; i < 4; ++i) num.add_to(exp(rng), Rational(coeff(rng)));
    std::map<long, long> den;
    for (int i = 0; i < 2; ++i) {
        long k = mult(rng);
        if (k > 0) den[m(rng)] += k;
    }
    return QRat(num, den);
}

}  // namespace

TEST_CASE("rational basics") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK(Rational::parse("-7/3") == Rational(-7, 3));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(5).str() == "5");
    CHECK(Rational(-7, 3).str() == "-7/3");
    CHECK_THROWS_AS(Rational(1).operator/=(Rational(0)), Error);
}

TEST_CASE("qlaurent arithmetic and division") {
    QLaurent q = QLaurent::q();
    QLaurent p = (QLaurent(1) - q) * (QLaurent(1) + q);
    CHECK(p == QLaurent(1) - q.pow(2));
    CHECK(p.divisible_by(QLaurent::one_minus_q(1)));
    CHECK(p.divided_by(QLaurent::one_minus_q(1)) == QLaurent(1) + q);
    CHECK(!(QLaurent(1) + q.pow(2)).divisible_by(QLaurent::one_minus_q(1)));
    CHECK(q.bar() == QLaurent::q(-1));
}

TEST_CASE("eval_q") {
    // q^2 - 2q at 1 -> -1
    QLaurent p = QLaurent::q(2) - QLaurent::q().scaled(Rational(2));
    CHECK(p.eval(Rational(1)) == Rational(-1));
    CHECK(QLaurent::q(-1).eval(Rational(2)) == Rational(1, 2));
    CHECK_THROWS_AS(QLaurent::q(-1).eval(Rational(0)), Error);
}

TEST_CASE("one-minus-q expansion") {
    // q = 1 - (1-q)
    auto e = expand_one_minus_q(QLaurent::q());
    REQUIRE(e.coeffs.size() == 2);
    CHECK(e.coeffs[0] == Rational(1));
    CHECK(e.coeffs[1] == Rational(-1));
    // q^2 = 1 - 2(1-q) + (1-q)^2
    auto e2 = expand_one_minus_q(QLaurent::q(2));
    REQUIRE(e2.coeffs.size() == 3);
    CHECK(e2.coeffs[0] == Rational(1));
    CHECK(e2.coeffs[1] == Rational(-2));
    CHECK(e2.coeffs[2] == Rational(1));
    auto e3 = expand_one_minus_q(QLaurent(3));
    REQUIRE(e3.coeffs.size() == 1);
    CHECK(e3.coeffs[0] == Rational(3));
    CHECK_THROWS_AS(expand_one_minus_q(QLaurent::q(-1)), Error);

    // Round trip on random polynomials.
    std::uniform_int_distribution<int> coeff(-9, 9), deg(0, 7);
    for (int it = 0; it < 50; ++it) {
        QLaurent p;
        int d = deg(rng);
        for (int j = 0; j <= d; ++j) p.add_to(j, Rational(coeff(rng)));
        CHECK(expand_one_minus_q(p).to_polynomial() == p);
    }
}

TEST_CASE("qrat involution and normalization") {
    QRat q = QRat::q();
    CHECK(q.bar() == QRat::q(-1));
    QRat f = QRat::one_minus_q_inverse(1);  // 1/(1-q)
    // 1/(1-q) * 1/(1-q^{-1}) = -q/(1-q)^2
    QRat g = f * f.bar();
    QRat expected = QRat(QLaurent::monomial(Rational(-1), 1), {{1, 2}});
    CHECK(g == expected);
    // bar is an involution
    for (int it = 0; it < 40; ++it) {
        QRat x = random_qrat();
        CHECK(x.bar().bar() == x);
    }
}

TEST_CASE("qrat inverse") {
    QRat f(QLaurent::one_minus_q(1));
    CHECK(f.inverse() == QRat::one_minus_q_inverse(1));
    CHECK(f * f.inverse() == QRat(1));
    // 1/(1+q^2) = (1-q^2)/(1-q^4)
    QRat g(QLaurent(1) + QLaurent::q(2));
    CHECK(g * g.inverse() == QRat(1));
    CHECK_THROWS_AS(QRat().inverse(), Error);
    // 1 + q + q^3 has roots away from roots of unity
    CHECK_THROWS_AS(QRat(QLaurent(1) + QLaurent::q(1) + QLaurent::q(3)).inverse(), Error);
}

TEST_CASE("laurent-proper split: worked examples") {
    // q/(1-q) -> (-1, 1/(1-q))
    QRat f = QRat(QLaurent::q(), {{1, 1}});
    auto s = split_laurent_proper(f);
    CHECK(s.laurent == QLaurent(-1));
    CHECK(s.proper == QRat::one_minus_q_inverse(1));

    // constant stays Laurent
    auto s2 = split_laurent_proper(QRat(5));
    CHECK(s2.laurent == QLaurent(5));
    CHECK(s2.proper.is_zero());

    // (1+q)/(q(1-q)) -> (q^{-1}, 2/(1-q))
    QRat f3 = QRat((QLaurent(1) + QLaurent::q()).shifted(-1), {{1, 1}});
    auto s3 = split_laurent_proper(f3);
    CHECK(s3.laurent == QLaurent::q(-1));
    CHECK(s3.proper == QRat::one_minus_q_inverse(1).scaled(Rational(2)));
}

TEST_CASE("laurent-proper split: recombination, idempotence, uniqueness") {
    for (int it = 0; it < 200; ++it) {
        QRat f = random_qrat();
        auto s = split_laurent_proper(f);
        // recombination
        CHECK(QRat(s.laurent) + s.proper == f);
        // structural form of the proper part
        if (!s.proper.is_zero()) {
            CHECK(s.proper.numerator().min_exp() >= 0);
            long degden = 0;
            for (const auto& [m, k] : s.proper.denominator_factors()) degden += m * k;
            CHECK(s.proper.numerator().max_exp() < degden);
        }
        // idempotence in each slot
        auto sp = split_laurent_proper(s.proper);
        CHECK(sp.laurent.is_zero());
        CHECK(sp.proper == s.proper);
        auto sl = split_laurent_proper(QRat(s.laurent));
        CHECK(sl.laurent == s.laurent);
        CHECK(sl.proper.is_zero());
    }
}

TEST_CASE("rational eigenvalues / roots") {
    // x^2 - 2x + 1 -> (1,2)
    auto r = rational_roots({Rational(1), Rational(-2), Rational(1)});
    REQUIRE(r.roots.size() == 1);
    CHECK(r.roots[0].first == Rational(1));
    CHECK(r.roots[0].second == 2);
    CHECK(!r.nontrivial_cofactor);
    // x^3 -> (0,3)
    auto r2 = rational_roots({Rational(0), Rational(0), Rational(0), Rational(1)});
    REQUIRE(r2.roots.size() == 1);
    CHECK(r2.roots[0].first == Rational(0));
    CHECK(r2.roots[0].second == 3);
    // x^2 - 2 -> no rational roots, cofactor flagged
    auto r3 = rational_roots({Rational(-2), Rational(0), Rational(1)});
    CHECK(r3.roots.empty());
    CHECK(r3.nontrivial_cofactor);
    // eigenvalues of a small matrix: diag(1, 1, -3/2) + nilpotent
    Matrix<Rational> m(3, 3);
    m(0, 0) = Rational(1);
    m(1, 1) = Rational(1);
    m(2, 2) = Rational(-3, 2);
    m(0, 1) = Rational(7);
    auto ev = rational_eigenvalues_of_matrix(m);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == Rational(-3, 2));
    CHECK(ev[1] == Rational(1));
}

TEST_CASE("charpoly and squarefree") {
    Matrix<Rational> m(2, 2);
    m(0, 1) = Rational(-1);
    m(1, 0) = Rational(1);
    m(1, 1) = Rational(2);
    // charpoly of [[0,-1],[1,2]] = x^2 - 2x + 1
    auto cp = charpoly(m);
    REQUIRE(cp.size() == 3);
    CHECK(cp[0] == Rational(1));
    CHECK(cp[1] == Rational(-2));
    CHECK(cp[2] == Rational(1));
    CHECK(!is_squarefree(cp));
    CHECK(is_squarefree({Rational(-1), Rational(0), Rational(0), Rational(1)}));
}

TEST_CASE("laurent-proper split: uniqueness of the decomposition") {
    // For any Laurent polynomial L', split(L' + proper) recovers exactly
    // (L', proper): the split is pinned by the structural properties alone.
    std::uniform_int_distribution<int> coeff(-5, 5), exp(-3, 4);
    for (int it = 0; it < 60; ++it) {
        QRat f = random_qrat();
        auto s = split_laurent_proper(f);
        QLaurent other;
        for (int i = 0; i < 3; ++i) other.add_to(exp(rng), Rational(coeff(rng)));
        auto s2 = split_laurent_proper(QRat(other) + s.proper);
        CHECK(s2.laurent == other);
        CHECK(s2.proper == s.proper);
    }
}
