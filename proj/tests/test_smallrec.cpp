#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qk/reference_data.hpp"
#include "qk/smallrec.hpp"

using namespace qk;

namespace {

SmallShift small_for(const Target& t, int cutoff) {
    return small_shift_operators(birkhoff_factorize(build_M(t, cutoff)), t);
}

}  // namespace

TEST_CASE("build_M columns: degree zero is the identity, CP^N matches the closed form") {
    Target t = load_target("cpn:2");
    int cutoff = 3;
    auto M = build_M(t, cutoff);
    CHECK(M.at(Degree::zero(1)) == Matrix<QRat>::identity(3));

    // column alpha at degree d: 1/((1-q^d P^{-1})^{N+1-alpha} prod_{k<d}(1-q^k P^{-1})^{N+1})
    int N = 2;
    Matrix<QRat> Pinv = t.picard[0].map([](const Rational& x) { return QRat(x); });
    for (int d = 1; d <= cutoff; ++d) {
        for (int alpha = 0; alpha <= N; ++alpha) {
            // direct evaluation via unipotent resolvents
            auto resolvent = [&](long k, int power) {
                Matrix<QRat> acc = Matrix<QRat>::identity(3);
                Matrix<QRat> term = Matrix<QRat>::identity(3) -
                                    Pinv.map([&](const QRat& x) { return x.q_shifted(k); });
                // invert I - q^k P^{-1} by solving with the nilpotent expansion
                Matrix<Rational> Nh = Matrix<Rational>::identity(3) - t.picard[0];
                Matrix<QRat> inv(3, 3);
                Matrix<Rational> Np = Matrix<Rational>::identity(3);
                for (int j = 0; j <= 2; ++j) {
                    QRat c = QRat::one_minus_q_inverse(k, j + 1).q_shifted(k * j);
                    if (j % 2) c = -c;
                    inv += Np.map([&](const Rational& x) { return c.scaled(x); });
                    Np = Np * Nh;
                }
                for (int p = 0; p < power; ++p) acc = acc * inv;
                return acc;
            };
            Matrix<QRat> expect = resolvent(d, N + 1 - alpha);
            for (long k = 1; k < d; ++k) expect = expect * resolvent(k, N + 1);
            auto col = expect.column(0);
            for (int i = 0; i < 3; ++i) CHECK(M.at(Degree(std::vector<int>{d}))(i, alpha) == col[i]);
        }
    }
}

TEST_CASE("birkhoff: CP^N has trivial U and worked example splits") {
    Target t = load_target("cpn:3");
    auto f = birkhoff_factorize(build_M(t, 3));
    for (const auto& [d, m] : f.U.terms())
        CHECK(m == (d.is_zero() ? Matrix<QLaurent>::identity(4) : Matrix<QLaurent>(4, 4)));
    CHECK(f.T_small.at(Degree::zero(1)) == Matrix<QRat>::identity(4));

    // M = I + Q (q + 1/(1-q)) E -> T_1 = E/(1-q), U_1 = q E
    QRatMatrixSeries M(1, 1, QRatMatrix(2, 2));
    M.set(Degree::zero(1), Matrix<QRat>::identity(2));
    QRatMatrix E(2, 2);
    E(0, 1) = QRat::q() + QRat::one_minus_q_inverse(1);
    M.set(Degree(std::vector<int>{1}), E);
    auto g = birkhoff_factorize(M);
    CHECK(g.T_small.at(Degree(std::vector<int>{1}))(0, 1) == QRat::one_minus_q_inverse(1));
    CHECK(g.U.at(Degree(std::vector<int>{1}))(0, 1) == QLaurent::q());
    // recombination M = T U
    auto TU = g.T_small * g.U.map([](const LaurentMatrix& m) {
        return m.map([](const QLaurent& x) { return QRat(x); });
    });
    CHECK(TU == M);
}

TEST_CASE("small shift operator of CP^N matches the subdiagonal form") {
    for (int N = 1; N <= 3; ++N) {
        Target t = load_target("cpn:" + std::to_string(N));
        auto s = small_for(t, 4);
        // A = I - (subdiagonal ones + Q in the corner); constant in q.
        auto A = s.A[0];
        Matrix<QLaurent> expect0 = Matrix<QLaurent>::identity(N + 1);
        for (int a = 0; a + 1 <= N; ++a) expect0(a + 1, a) = QLaurent(-1);
        CHECK(A.at(Degree::zero(1)) == expect0);
        Matrix<QLaurent> expect1(N + 1, N + 1);
        expect1(0, N) = QLaurent(-1);
        CHECK(A.at(Degree(std::vector<int>{1})) == expect1);
        for (int d = 2; d <= 4; ++d) CHECK(A.at(Degree(std::vector<int>{d})).is_zero());
    }
}

TEST_CASE("small products of CP^N: the product corollary") {
    for (int N = 1; N <= 3; ++N) {
        Target t = load_target("cpn:" + std::to_string(N));
        auto s = small_for(t, 4);
        auto omega = small_products(s, t);
        for (int a = 0; a <= N; ++a)
            for (int b = 0; b <= N; ++b) {
                // h^a . h^b = h^{a+b} if a+b <= N; Q h^{a+b-N-1} otherwise
                std::vector<Rational> expect0(N + 1), expect1(N + 1);
                if (a + b <= N)
                    expect0[a + b] = Rational(1);
                else
                    expect1[a + b - N - 1] = Rational(1);
                for (int i = 0; i <= N; ++i) {
                    CHECK(omega[a].at(Degree::zero(1))(i, b) == expect0[i]);
                    CHECK(omega[a].at(Degree(std::vector<int>{1}))(i, b) == expect1[i]);
                    for (int d = 2; d <= 4; ++d)
                        CHECK(omega[a].at(Degree(std::vector<int>{d}))(i, b) == Rational(0));
                }
            }
    }
}

TEST_CASE("small pairing of CP^N is g + Q/(1-Q)") {
    for (int N = 1; N <= 3; ++N) {
        Target t = load_target("cpn:" + std::to_string(N));
        auto f = birkhoff_factorize(build_M(t, 4));
        auto G = small_pairing(f, t);
        CHECK(G.at(Degree::zero(1)) == t.g);
        Matrix<Rational> ones(N + 1, N + 1);
        for (int i = 0; i <= N; ++i)
            for (int j = 0; j <= N; ++j) ones(i, j) = Rational(1);
        for (int d = 1; d <= 4; ++d) CHECK(G.at(Degree(std::vector<int>{d})) == ones);
    }
}

TEST_CASE("fl3 shift operators equal the reference matrices") {
    Target t = load_target("fl3");
    auto s = small_for(t, 4);
    auto ref = reference::fl3_shift_operators(4);
    for (int i = 0; i < 2; ++i) {
        // reference matrices carry no q; compare against A_com and confirm
        // A itself is q-free
        CHECK(s.A_com[i] == ref[i]);
        for (const auto& [d, m] : s.A[i].terms())
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b) CHECK(m(a, b).is_constant());
    }
}

TEST_CASE("fl3 products: worked example and finiteness") {
    Target t = load_target("fl3");
    auto s = small_for(t, 6);
    auto omega = small_products(s, t);
    // Phi_1 . Phi_1 = Phi_2 + Q_1 (Phi_0 - Phi_3)
    CHECK(omega[1].at(Degree::zero(2))(2, 1) == Rational(1));
    Degree q1 = Degree::unit(2, 0);
    CHECK(omega[1].at(q1)(0, 1) == Rational(1));
    CHECK(omega[1].at(q1)(3, 1) == Rational(-1));
    for (int i : {1, 2, 4, 5}) CHECK(omega[1].at(q1)(i, 1) == Rational(0));

    auto rep = finiteness_report(s, t);
    CHECK(rep.max_degree == 2);
    CHECK(rep.all_stable);

    // classical at Q = 0
    for (int a = 0; a < 6; ++a) CHECK(omega[a].at(Degree::zero(2)) == t.mult[a]);
}

TEST_CASE("relations") {
    Target cp2 = load_target("cpn:2");
    auto s2 = small_for(cp2, 3);
    CHECK(check_relation(s2, cp2, "(1 - a)^3 - Q"));
    CHECK(!check_relation(s2, cp2, "(1 - a)^3"));

    Target fl = load_target("fl3");
    auto sf = small_for(fl, 4);
    CHECK(check_relation(sf, fl, "(1 - a1)^3 - Q1*(1 - a1*a2)"));
    CHECK(check_relation(sf, fl, "(1 - a2)^3 - Q2*(1 - a1*a2)"));
    CHECK(!check_relation(sf, fl, "(1 - a1)^3 - Q2*(1 - a1*a2)"));
}

TEST_CASE("semisimplicity probe") {
    Target cp2 = load_target("cpn:2");
    auto s = small_for(cp2, 3);
    auto rep = semisimplicity_probe(s, {{Rational(1)}, {Rational(0)}});
    REQUIRE(rep.entries.size() == 4);
    // At Q=1: squarefree; at Q=0 unipotent, not squarefree.
    CHECK(rep.entries[0].squarefree);
    CHECK(rep.entries[1].squarefree);  // single-operator family: combo = A
    CHECK(!rep.entries[2].squarefree);

    Target fl = load_target("fl3");
    auto sf = small_for(fl, 4);
    auto repf = semisimplicity_probe(sf, {{Rational(1), Rational(1)}});
    REQUIRE(repf.entries.size() == 3);
    // Individual operators have a triple eigenvalue at this point; the
    // ring-level combination witness is squarefree.
    CHECK(!repf.entries[0].squarefree);
    CHECK(!repf.entries[1].squarefree);
    CHECK(repf.entries[2].picard_index == -1);
    CHECK(repf.entries[2].squarefree);
}

TEST_CASE("commutation invariants at t = 0") {
    for (const char* name : {"cpn:2", "fl3"}) {
        Target t = load_target(name);
        auto s = small_for(t, 3);
        auto omega = small_products(s, t);
        int r = t.picard_rank;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                CHECK(s.A_com[i] * s.A_com[j] == s.A_com[j] * s.A_com[i]);
        for (int i = 0; i < r; ++i)
            for (int a = 0; a < t.rank; ++a)
                CHECK(s.A_com[i] * omega[a] == omega[a] * s.A_com[i]);
        // Omega_alpha Phi_0 = Phi_alpha exactly
        for (int a = 0; a < t.rank; ++a)
            for (const auto& [d, m] : omega[a].terms())
                for (int i = 0; i < t.rank; ++i)
                    CHECK(m(i, 0) == (d.is_zero() && i == a ? Rational(1) : Rational(0)));
        // Frobenius: G(Phi_a . Phi_b, Phi_c) = G(Phi_a, Phi_b . Phi_c)
        auto f = birkhoff_factorize(build_M(t, 3));
        auto G = small_pairing(f, t);
        for (int a = 0; a < t.rank && a < 3; ++a)
            for (int b = 0; b < t.rank && b < 3; ++b)
                for (int c = 0; c < t.rank && c < 3; ++c) {
                    RationalSeries lhs(t.picard_rank, 3), rhs(t.picard_rank, 3);
                    for (const Degree& d : all_degrees(t.picard_rank, 3)) {
                        Rational l, rr;
                        for (const auto& [d1, om] : omega[a].terms()) {
                            if (!d.contains(d1)) continue;
                            const auto& Gm = G.at(d - d1);
                            for (int x = 0; x < t.rank; ++x) l += Gm(x, c) * om(x, b);
                        }
                        for (const auto& [d1, om] : omega[b].terms()) {
                            if (!d.contains(d1)) continue;
                            const auto& Gm = G.at(d - d1);
                            for (int x = 0; x < t.rank; ++x) rr += Gm(a, x) * om(x, c);
                        }
                        lhs.set(d, l);
                        rhs.set(d, rr);
                    }
                    CHECK(lhs == rhs);
                }
    }
}
