#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qk/bigrec.hpp"
#include "qk/reference_data.hpp"

using namespace qk;

namespace {

TheoryState rebuild(const std::string& name, int cutoff, SmallShift* small_out = nullptr) {
    Target t = load_target(name);
    auto f = birkhoff_factorize(build_M(t, cutoff));
    auto small = small_shift_operators(f, t);
    TheoryState state = reconstruct(t, small, cutoff);
    if (small_out) *small_out = small;
    return state;
}

// conjugate a canonical-basis cp1 matrix into the {1, P^{-1}} presentation
// and substitute the presentation coordinate (t_canonical = -tau).
ExpMatrix to_paper_basis(const ExpMatrix& m) {
    Matrix<Rational> C(2, 2);
    C(0, 0) = Rational(1);
    C(0, 1) = Rational(1);
    C(1, 1) = Rational(-1);
    Matrix<Rational> Cinv = rational_matrix_inverse(C);
    Matrix<Rational> Sub(1, 1);
    Sub(0, 0) = Rational(-1);
    ExpMatrix out(2, 2, ExpPoly::zero(1));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            ExpPoly acc = ExpPoly::zero(1);
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v)
                    if (!Cinv(a, u).is_zero() && !C(v, b).is_zero())
                        acc += m(u, v).promoted(1).substituted(Sub).scaled(Cinv(a, u) * C(v, b));
            out(a, b) = acc;
        }
    return out;
}

}  // namespace

TEST_CASE("cp1 degree-one and degree-two displays") {
    SmallShift small;
    TheoryState st = rebuild("cp1", 2, &small);

    // degree one: A_1 = Omega_1 in the presentation basis
    Degree d1(std::vector<int>{1});
    auto l1 = st.shift.find(0, d1);
    REQUIRE(l1 != nullptr);
    REQUIRE(l1->size() == 1);
    CHECK(to_paper_basis((*l1)[0]) == reference::cp1_shift_degree1());
    CHECK(to_paper_basis(st.products[1].at(d1)).is_zero() == false);
    // multiplication by P^{-1} at degree >= 1 is minus the h-multiplication
    {
        ExpMatrix omega_paper = to_paper_basis(st.products[1].at(d1));
        ExpMatrix expect = reference::cp1_shift_degree1();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) CHECK(-omega_paper(a, b) == expect(a, b));
    }

    // degree two layers and product
    Degree d2(std::vector<int>{2});
    auto l2 = st.shift.find(0, d2);
    REQUIRE(l2 != nullptr);
    REQUIRE(l2->size() == 2);
    CHECK(to_paper_basis((*l2)[0]) == reference::cp1_shift_degree2_layer0());
    CHECK(to_paper_basis((*l2)[1]) == reference::cp1_shift_degree2_layer1());
    {
        ExpMatrix omega_paper = to_paper_basis(st.products[1].at(d2));
        ExpMatrix expect = reference::cp1_product_degree2();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) CHECK(-omega_paper(a, b) == expect(a, b));
    }

    // residuals and restriction
    CHECK(lax_residual(st).ok);
    CHECK(restriction_consistency(st, small).ok);
}

TEST_CASE("perturbed state fails the residual check") {
    TheoryState st = rebuild("cp1", 2);
    ExpMatrix m = st.shift.layers[0][Degree(std::vector<int>{2})][0];
    m(0, 1) += ExpPoly(1);
    st.shift.layers[0][Degree(std::vector<int>{2})][0] = m;
    CHECK(!lax_residual(st).ok);
}

TEST_CASE("cp1 fundamental solution, pairing, potential") {
    SmallShift small;
    TheoryState st = rebuild("cp1", 3, &small);
    fundamental_solution_T(st);
    CHECK(t_equations(st).ok);

    // T at t=0 equals the small factorization T
    Target t = load_target("cp1");
    auto f = birkhoff_factorize(build_M(t, 3));
    for (const auto& [d, Tm] : st.T_big.terms()) {
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                QRatExpPoly v = Tm(a, b);
                ExpPoly dummy;
                QRatExpPoly at0 = v;
                for (int var = 0; var < at0.nvar(); ++var) at0 = at0.eval_zero(var);
                QRat got = at0.eval_all_zero();
                CHECK(got == f.T_small.at(d)(a, b));
            }
    }

    // S = T^{-1} two-sided
    auto S = invert_fundamental_series(st.T_big);
    QExpMatrixSeries id(1, 3, QExpMatrix(2, 2, QRatExpPoly::zero(1)));
    id.set(Degree::zero(1),
           QExpMatrix::identity(2, QRatExpPoly::zero(1), QRatExpPoly::constant(1, QRat(1))));
    CHECK(S * st.T_big == id);
    CHECK(st.T_big * S == id);

    pairing_and_potential(st);
    // g_d displays
    for (int d = 0; d <= 3; ++d) {
        Matrix<Rational> Sub(1, 1);
        Sub(0, 0) = Rational(-1);
        ExpPoly core = st.potential_core.at(Degree(std::vector<int>{d})).promoted(1).substituted(Sub);
        ExpPoly g = core * ExpPoly::exponential(1, Freq{Rational(1)});
        CHECK(g == reference::cp1_g(d));
    }

    // scalar crosscheck route agrees and reproduces y_3, x_3
    auto cc = cp1_scalar_crosscheck(st);
    CHECK(cc.ok);
    CHECK(cc.y[1] == reference::cp1_y(1));
    CHECK(cc.x[1] == reference::cp1_x(1));
    CHECK(cc.y[2] == reference::cp1_y(2));
    CHECK(cc.x[2] == reference::cp1_x(2));
    CHECK(cc.y[3] == reference::cp1_y(3));
    CHECK(cc.x[3] == reference::cp1_x(3));

    // degree <= 3 invariants with P^{-1} insertions are integers; degree-2
    // values match the closed form
    std::vector<Rational> pinv = t.resolve_class("Pinv");
    for (int n = 0; n <= 8; ++n) {
        Rational v = extract_invariants(st, {{pinv, n}}, Degree(std::vector<int>{2}));
        Rational expect = n % 2 ? Rational(0)
                                : Rational::binomial(n / 2 - 1, 2);
        CHECK(v == expect);
        CHECK(extract_invariants(st, {{pinv, n}}, Degree(std::vector<int>{1})) ==
              (n == 0 ? Rational(1) : Rational(0)));
    }
}

TEST_CASE("cp2 degree-one displays and sanity invariants") {
    SmallShift small;
    TheoryState st = rebuild("cp2", 1, &small);

    Degree d1(std::vector<int>{1});
    auto l1 = st.shift.find(0, d1);
    REQUIRE(l1 != nullptr);
    REQUIRE(l1->size() == 1);
    CHECK((*l1)[0] == reference::cp2_shift_degree1());
    CHECK(st.products[1].at(d1) == reference::cp2_product_h_degree1());
    CHECK(st.products[2].at(d1) == reference::cp2_product_h2_degree1());
    CHECK(lax_residual(st).ok);
    CHECK(restriction_consistency(st, small).ok);

    fundamental_solution_T(st);
    CHECK(t_equations(st).ok);
    pairing_and_potential(st);
    CHECK(st.potential_core.at(Degree::zero(1)) == reference::cp2_potential(0));
    CHECK(st.potential_core.at(d1) == reference::cp2_potential(1));

    // <pt, pt>_{0,2,1} = 1 and the degree-one table block
    Target t = load_target("cp2");
    auto H = t.resolve_class("H"), pt = t.resolve_class("pt");
    CHECK(extract_invariants(st, {{pt, 2}}, d1) == Rational(1));
    auto table = reference::cp2_invariant_table(1);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(extract_invariants(st, {{H, i}, {pt, j}}, d1) ==
                  Rational(table[static_cast<size_t>(i)][static_cast<size_t>(j)]));
}

TEST_CASE("fl3 big reconstruction at low degree") {
    SmallShift small;
    TheoryState st = rebuild("fl3", 1, &small);
    CHECK(lax_residual(st).ok);
    CHECK(restriction_consistency(st, small).ok);
    fundamental_solution_T(st);
    CHECK(t_equations(st).ok);
    pairing_and_potential(st);
    // products commute degree-wise
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            CHECK(st.products[a] * st.products[b] == st.products[b] * st.products[a]);
}

TEST_CASE("assemble_ode exposes the expected structure") {
    SmallShift small;
    TheoryState st = rebuild("cp1", 2, &small);
    // degree 1: single block, equation dA_{1,0}/dt = -P^{-1} Omega_1
    auto as = assemble_ode(Degree(std::vector<int>{1}), 1, st);
    REQUIRE(as.blocks.size() == 1);
    CHECK(as.problem.dimension == 4);
    // L from the hand-computed coupling: m'=0, n'=n, p'=0, r'=r-m-n
    Matrix<Rational> L(4, 4);
    L(1, 1) = Rational(1);
    L(3, 0) = Rational(-1);
    L(3, 1) = Rational(-1);
    L(3, 3) = Rational(1);
    CHECK(as.problem.L == L);
    for (const auto& e : as.problem.B) CHECK(e.is_zero());
}

TEST_CASE("reference g_2 evaluates to 1 at the origin") {
    CHECK(reference::cp1_g(2).eval_zero(0) == ExpPoly(1).promoted(1));
}
