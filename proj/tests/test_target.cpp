#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qk/target.hpp"

using namespace qk;

namespace {

std::vector<Rational> basis_vec(int rank, int i) {
    std::vector<Rational> v(rank);
    v[i] = Rational(1);
    return v;
}

// Euler characteristic oracle for the flag threefold realized as a (1,1)
// hypersurface in CP^2 x CP^2: chi(P1^{-a} P2^{-b}) via the Koszul sequence
// on the ambient space, with chi_{CP^2}(O(k)) = (k+1)(k+2)/2.
Rational flag3_chi_oracle(int a, int b) {
    auto c = [](long k) { return Rational((k + 1) * (k + 2), 2); };
    return c(-a) * c(-b) - c(-a - 1) * c(-b - 1);
}

// chi of a product of basis classes of fl3, computed without the
// multiplication table: expand both classes as polynomials in P1^{-1},
// P2^{-1} and apply the oracle termwise.
Rational flag3_pairing_oracle(int alpha, int beta) {
    // exponents of (1-P1^{-1}) and (1-P2^{-1}) for each basis class
    static const int px[6] = {0, 1, 2, 0, 0, 1};
    static const int py[6] = {0, 0, 0, 1, 2, 1};
    int ex = px[alpha] + px[beta], ey = py[alpha] + py[beta];
    Rational acc;
    for (int a = 0; a <= ex; ++a)
        for (int b = 0; b <= ey; ++b) {
            Rational c = Rational::binomial(ex, a) * Rational::binomial(ey, b);
            if ((a + b) % 2) c = -c;
            acc += c * flag3_chi_oracle(a, b);
        }
    return acc;
}

}  // namespace

TEST_CASE("cpn presets load and validate") {
    Target t = load_target("cpn:2");
    CHECK(t.rank == 3);
    CHECK(t.picard_rank == 1);
    // h^2 * h = 0 in QQ[h]/(h^3)
    auto h = basis_vec(3, 1), h2 = basis_vec(3, 2);
    CHECK(t.classical_mul(h2, h) == std::vector<Rational>(3));
    CHECK(t.classical_mul(h, h) == h2);
    // anything * Phi_0 = itself
    CHECK(t.classical_mul(basis_vec(3, 0), h2) == h2);
}

TEST_CASE("cpn pairing matches the closed form") {
    for (int N = 1; N <= 4; ++N) {
        Target t = load_target("cpn:" + std::to_string(N));
        for (int a = 0; a <= N; ++a)
            for (int b = 0; b <= N; ++b)
                CHECK(t.g(a, b) == (a + b <= N ? Rational(1) : Rational(0)));
        CHECK(t.pairing_g(basis_vec(N + 1, 0), basis_vec(N + 1, 0)) == Rational(1));
    }
}

TEST_CASE("fl3 ring relations hold in the basis") {
    Target t = load_target("fl3");
    CHECK(t.rank == 6);
    CHECK(t.picard_rank == 2);
    CHECK(t.pairing_g(basis_vec(6, 0), basis_vec(6, 0)) == Rational(1));

    // L1 = P1^{-1}, L2 = P1 P2^{-1}, L3 = P2 as matrices
    Matrix<Rational> P1inv = t.picard[0], P2inv = t.picard[1];
    Matrix<Rational> P1 = rational_matrix_inverse(P1inv);
    Matrix<Rational> P2 = rational_matrix_inverse(P2inv);
    Matrix<Rational> I6 = Matrix<Rational>::identity(6);
    Matrix<Rational> L1 = P1inv, L2 = P1 * P2inv, L3 = P2;
    Matrix<Rational> a1 = I6 - L1, a2 = I6 - L2, a3 = I6 - L3;
    CHECK((a1 + a2 + a3).is_zero());
    CHECK((a1 * a2 + a1 * a3 + a2 * a3).is_zero());
    CHECK((a1 * a2 * a3).is_zero());
}

TEST_CASE("fl3 pairing against the independent Euler-characteristic oracle") {
    Target t = load_target("fl3");
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) CHECK(t.g(a, b) == flag3_pairing_oracle(a, b));
}

TEST_CASE("j coefficients: degree zero and CP^1 degree one") {
    for (const char* name : {"cp1", "cp2", "fl3"}) {
        Target t = load_target(name);
        auto j0 = t.j_coefficient(Degree::zero(t.picard_rank));
        CHECK(j0[0] == QRat(QLaurent::one_minus_q(1)));
        for (int i = 1; i < t.rank; ++i) CHECK(j0[i].is_zero());
    }
    // CP^1, d=1: (1-q) [ (1-q)^{-2} Phi_0 - 2q (1-q)^{-3} h ]
    Target cp1 = load_target("cp1");
    auto j1 = cp1.j_coefficient(Degree(std::vector<int>{1}));
    QRat omq(QLaurent::one_minus_q(1));
    CHECK(j1[0] == omq * QRat::one_minus_q_inverse(1, 2));
    CHECK(j1[1] == omq * QRat::one_minus_q_inverse(1, 3).q_shifted(1).scaled(Rational(-2)));
}

TEST_CASE("CP^N small J-function satisfies its difference equation") {
    for (int N = 1; N <= 3; ++N) {
        Target t = load_target("cpn:" + std::to_string(N));
        int cutoff = 4;
        Matrix<QRat> Pinv = t.picard[0].map([](const Rational& x) { return QRat(x); });
        for (int d = 0; d <= cutoff; ++d) {
            auto jd = t.j_coefficient(Degree(std::vector<int>{d}));
            // lhs = sum_j binom(N+1,j) (-1)^j q^{jd} P^{-j} applied to J_d
            std::vector<QRat> lhs(t.rank);
            Matrix<QRat> Pj = Matrix<QRat>::identity(t.rank);
            for (int j = 0; j <= N + 1; ++j) {
                Rational c = Rational::binomial(N + 1, j);
                if (j % 2) c = -c;
                auto term = Pj.apply(jd);
                for (int i = 0; i < t.rank; ++i)
                    lhs[i] += term[i].scaled(c).q_shifted(static_cast<long>(j) * d);
                Pj = Pj * Pinv;
            }
            std::vector<QRat> rhs(t.rank);
            if (d >= 1) rhs = t.j_coefficient(Degree(std::vector<int>{d - 1}));
            for (int i = 0; i < t.rank; ++i) CHECK(lhs[i] == rhs[i]);
        }
    }
}

TEST_CASE("fl3 small J-function satisfies both difference equations") {
    Target t = load_target("fl3");
    int cutoff = 3;
    Matrix<QRat> P1 = t.picard[0].map([](const Rational& x) { return QRat(x); });
    Matrix<QRat> P2 = t.picard[1].map([](const Rational& x) { return QRat(x); });
    Matrix<QRat> P12 = P1 * P2;
    for (int eq = 0; eq < 2; ++eq) {
        const Matrix<QRat>& P = eq == 0 ? P1 : P2;
        for (const Degree& d : all_degrees(2, cutoff)) {
            auto jd = t.j_coefficient(d);
            int di = d[eq];
            // (1 - P_i^{-1} q^{Q_i d/dQ_i})^3 J at degree d
            std::vector<QRat> lhs(6);
            Matrix<QRat> Pj = Matrix<QRat>::identity(6);
            for (int j = 0; j <= 3; ++j) {
                Rational c = Rational::binomial(3, j);
                if (j % 2) c = -c;
                auto term = Pj.apply(jd);
                for (int i = 0; i < 6; ++i)
                    lhs[i] += term[i].scaled(c).q_shifted(static_cast<long>(j) * di);
                Pj = Pj * P;
            }
            // Q_i (1 - q P_1^{-1} P_2^{-1} q^{Q_1 d/dQ_1} q^{Q_2 d/dQ_2}) J at degree d
            std::vector<QRat> rhs(6);
            if (d[eq] >= 1) {
                Degree dp = d - Degree::unit(2, eq);
                auto jp = t.j_coefficient(dp);
                auto shifted = P12.apply(jp);
                for (int i = 0; i < 6; ++i)
                    rhs[i] = jp[i] - shifted[i].q_shifted(1 + dp[0] + dp[1]);
            }
            for (int i = 0; i < 6; ++i) CHECK(lhs[i] == rhs[i]);
        }
    }
}

TEST_CASE("change of basis") {
    Target cp1 = load_target("cp1");
    // identity change
    auto idc = change_basis(cp1, Matrix<Rational>::identity(2));
    CHECK(idc.target.mult[1] == cp1.mult[1]);
    CHECK(idc.coordinate_map(0, 0) == Rational(1));

    // {1, h} -> {1, P^{-1}}: columns of C express the new basis in the old
    Matrix<Rational> C(2, 2);
    C(0, 0) = Rational(1);
    C(0, 1) = Rational(1);
    C(1, 1) = Rational(-1);
    auto bc = change_basis(cp1, C);
    // multiplication by P^{-1} in the new basis: P^{-1} . P^{-1} = 2 P^{-1} - 1
    CHECK(bc.target.mult[1](0, 1) == Rational(-1));
    CHECK(bc.target.mult[1](1, 1) == Rational(2));
    CHECK(bc.coordinate_map(0, 0) == Rational(-1));

    // degenerate or identity-breaking changes are rejected
    Matrix<Rational> bad = C;
    bad(1, 1) = Rational(0);
    CHECK_THROWS_AS(change_basis(cp1, bad), Error);
    Matrix<Rational> notid(2, 2);
    notid(0, 0) = Rational(1);
    notid(1, 0) = Rational(1);
    notid(1, 1) = Rational(1);
    CHECK_THROWS_AS(change_basis(cp1, notid), Error);
}

TEST_CASE("custom target document round-trip") {
    // cp1 written out longhand
    std::string doc = R"({
      "name": "custom-cp1",
      "rank": 2,
      "picard_rank": 1,
      "basis_labels": ["1", "h"],
      "mult_table": [[0,0,0,"1"],[0,1,1,"1"],[1,0,1,"1"],[1,1,0,"0"]],
      "picard_matrices": [[["1","0"],["-1","1"]]],
      "chi": ["1","1"],
      "basis_monomials": [[[[0],"1"]],[[[0],"1"],[[1],"-1"]]],
      "j": {"preset": "cp1"}
    })";
    Target t = load_target_document(doc);
    CHECK(t.rank == 2);
    Target ref = load_target("cp1");
    CHECK(t.g == ref.g);
    CHECK(t.picard[0] == ref.picard[0]);

    std::string bad = doc;
    bad.replace(bad.find("\"chi\": [\"1\",\"1\"]"), 16, "\"chi\": [\"1\"]");
    CHECK_THROWS_AS(load_target_document(bad), Error);
}
