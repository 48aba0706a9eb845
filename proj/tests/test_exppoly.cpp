#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qk/odesolve.hpp"

using namespace qk;

namespace {

std::mt19937 rng(911);

ExpPoly E(int nvar, long k, int var = 0) {
    Freq f(nvar, Rational(0));
    f[var] = Rational(k);
    return ExpPoly::exponential(nvar, f);
}

ExpPoly random_exppoly(int nvar) {
    std::uniform_int_distribution<int> coeff(-4, 4), freq(-2, 2), deg(0, 2);
    ExpPoly f = ExpPoly::zero(nvar);
    for (int i = 0; i < 3; ++i) {
        Freq fr(nvar, Rational(0));
        Mono m(nvar, 0);
        for (int v = 0; v < nvar; ++v) {
            fr[v] = Rational(freq(rng));
            m[v] = deg(rng);
        }
        f.add_term(fr, m, Rational(coeff(rng)));
    }
    return f;
}

}  // namespace

TEST_CASE("ring operations") {
    int n = 1;
    ExpPoly t = ExpPoly::variable(n, 0);
    CHECK(E(n, -1) * E(n, -1) == E(n, -2));
    CHECK(t * E(n, 1) == E(n, 1) * t);
    CHECK((E(n, 1) - E(n, 1)).is_zero());
    // mixed variable-count operands
    CHECK(ExpPoly(1) + ExpPoly::variable(2, 1) == ExpPoly::variable(2, 1) + ExpPoly(1));
}

TEST_CASE("differentiate") {
    int n = 1;
    ExpPoly t = ExpPoly::variable(n, 0);
    // d/dt (t e^{-t}) = (1-t) e^{-t}
    ExpPoly f = t * E(n, -1);
    CHECK(f.differentiated(0) == (ExpPoly(1) - t) * E(n, -1));
    // d/dt ((1+t) e^{-t}) = -t e^{-t}
    ExpPoly g = (ExpPoly(1) + t) * E(n, -1);
    CHECK(g.differentiated(0) == -(t * E(n, -1)));
    // d/ds e^{t} = 0 in two variables
    CHECK(E(2, 1, 0).differentiated(1).is_zero());
}

TEST_CASE("eval_zero") {
    int n = 1;
    ExpPoly t = ExpPoly::variable(n, 0);
    CHECK(((ExpPoly(1) + t) * E(n, -1)).eval_zero(0) == ExpPoly(1));
    // s e^{t} at t = 0 -> s
    ExpPoly s = ExpPoly::variable(2, 1);
    CHECK((s * E(2, 1, 0)).eval_zero(0) == s);
    CHECK((t * t).eval_all_zero() == Rational(0));
}

TEST_CASE("linear substitution") {
    // t = -u : e^{-t}(1+t) -> e^{u}(1-u)
    Matrix<Rational> S(1, 1);
    S(0, 0) = Rational(-1);
    ExpPoly t = ExpPoly::variable(1, 0);
    ExpPoly f = (ExpPoly(1) + t) * E(1, -1);
    ExpPoly expect = (ExpPoly(1) - t) * E(1, 1);
    CHECK(f.substituted(S) == expect);
}

TEST_CASE("ode: worked examples") {
    // dim 1, L = [1], B = e^{2t}, Y0 = 1  ->  e^{2t}
    OdeProblem p1;
    p1.dimension = 1;
    p1.L = Matrix<Rational>(1, 1);
    p1.L(0, 0) = Rational(1);
    p1.B = {E(1, 2)};
    p1.Y0 = {ExpPoly(1)};
    p1.active = 0;
    auto y1 = solve_linear_ode(p1);
    CHECK(y1[0] == E(1, 2));

    // resonance: L = [1], B = e^{t}, Y0 = 0  ->  t e^{t}
    OdeProblem p2 = p1;
    p2.B = {E(1, 1)};
    p2.Y0 = {ExpPoly(0L)};
    auto y2 = solve_linear_ode(p2);
    CHECK(y2[0] == ExpPoly::variable(1, 0) * E(1, 1));

    // L = [0], B = t, Y0 = 0 -> t^2/2
    OdeProblem p3 = p1;
    p3.L(0, 0) = Rational(0);
    p3.B = {ExpPoly::variable(1, 0)};
    p3.Y0 = {ExpPoly(0L)};
    auto y3 = solve_linear_ode(p3);
    CHECK(y3[0] == (ExpPoly::variable(1, 0) * ExpPoly::variable(1, 0)).scaled(Rational(1, 2)));
}

TEST_CASE("ode: linearity and nilpotent-polynomial properties") {
    std::uniform_int_distribution<int> small(-2, 2);
    for (int it = 0; it < 12; ++it) {
        int n = 2;
        OdeProblem p;
        p.dimension = n;
        p.L = Matrix<Rational>(n, n);
        // triangular: rational spectrum, so the ansatz always suffices
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) p.L(i, j) = Rational(small(rng));
        p.active = 0;
        OdeProblem pa = p, pb = p, psum = p;
        for (int i = 0; i < n; ++i) {
            pa.B.push_back(random_exppoly(1));
            pb.B.push_back(random_exppoly(1));
            psum.B.push_back(pa.B[i] + pb.B[i]);
            pa.Y0.push_back(ExpPoly(static_cast<long>(small(rng))));
            pb.Y0.push_back(ExpPoly(static_cast<long>(small(rng))));
            psum.Y0.push_back(pa.Y0[i] + pb.Y0[i]);
        }
        auto ya = solve_linear_ode(pa);
        auto yb = solve_linear_ode(pb);
        auto ys = solve_linear_ode(psum);
        for (int i = 0; i < n; ++i) CHECK(ys[i] == ya[i] + yb[i]);
    }

    // nilpotent L, polynomial B -> polynomial solution
    OdeProblem p;
    p.dimension = 2;
    p.L = Matrix<Rational>(2, 2);
    p.L(0, 1) = Rational(3);
    p.active = 0;
    ExpPoly t = ExpPoly::variable(1, 0);
    p.B = {t, t * t};
    p.Y0 = {ExpPoly(1), ExpPoly(2)};
    auto y = solve_linear_ode(p);
    for (const auto& e : y)
        for (const auto& [f, poly] : e.terms())
            for (const auto& x : f) CHECK(x.is_zero());
}

TEST_CASE("ode: coefficients from previously solved variables") {
    OdeProblem p;
    p.dimension = 1;
    p.L = Matrix<Rational>(1, 1);
    p.L(0, 0) = Rational(-1);
    p.active = 1;
    ExpPoly s = ExpPoly::variable(2, 0);  // earlier variable
    // Y' = -Y + s + 1, Y(0) = s + 1  ->  Y = s + 1 (constant in the active var)
    p.B = {s + ExpPoly(1)};
    p.Y0 = {s + ExpPoly(1)};
    auto y = solve_linear_ode(p);
    CHECK(y[0] == (s + ExpPoly(1)).promoted(2));
}

TEST_CASE("ode: irrational eigenvalue excitation reports AnsatzInsufficient") {
    OdeProblem p;
    p.dimension = 2;
    p.L = Matrix<Rational>(2, 2);
    p.L(0, 1) = Rational(1);
    p.L(1, 0) = Rational(2);  // eigenvalues +-sqrt(2)
    p.active = 0;
    p.B = {ExpPoly(0L), ExpPoly(0L)};
    p.Y0 = {ExpPoly(1), ExpPoly(0L)};
    CHECK_THROWS_WITH_AS(solve_linear_ode(p), doctest::Contains("AnsatzInsufficient"), Error);
}
