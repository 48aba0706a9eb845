#pragma once

#include <string>
#include <vector>

#include "qk/novikov.hpp"
#include "qk/target.hpp"

namespace qk {

using QRatMatrix = Matrix<QRat>;
using QRatMatrixSeries = NovikovSeries<QRatMatrix>;
using LaurentMatrix = Matrix<QLaurent>;
using LaurentMatrixSeries = NovikovSeries<LaurentMatrix>;
using RationalMatrixSeries = NovikovSeries<Matrix<Rational>>;
using RationalSeries = NovikovSeries<Rational>;

// M: column alpha is F_alpha(P_i^{-1} q^{Q_i dQ_i}) applied to J/(1-q) at
// t = 0, assembled degree by degree from the small J-function.
QRatMatrixSeries build_M(const Target& t, int cutoff);

// Unique splitting M = T_small * U: T entries are proper rational functions
// of q (poles at roots of unity, vanishing at q = infinity for d != 0), U
// entries are Laurent polynomials; both have identity leading term.
struct FactorizationResult {
    QRatMatrixSeries T_small;
    LaurentMatrixSeries U;
};
FactorizationResult birkhoff_factorize(const QRatMatrixSeries& M);

// Small q-shift operator matrices A_i = T^{-1} P_i^{-1} qshift_i(T) and
// their q = 1 specializations.
struct SmallShift {
    std::vector<LaurentMatrixSeries> A;
    std::vector<RationalMatrixSeries> A_com;
};
SmallShift small_shift_operators(const FactorizationResult& f, const Target& t);

// Quantum multiplication matrices by each basis class at t = 0, recovered
// from the commuting operators by the column-matrix equation
// Omega_alpha [F_beta(A_com) Phi_0] = [F_beta(A_com) Phi_alpha].
std::vector<RationalMatrixSeries> small_products(const SmallShift& s, const Target& t);

// G_{alpha beta}|_{t=0} = g(bar(T) Phi_alpha, T Phi_beta); the q-dependence
// must cancel exactly at every degree.
RationalMatrixSeries small_pairing(const FactorizationResult& f, const Target& t);

// Evaluates a polynomial relation in a_1..a_r (acting by A_{i,com}) and
// Q_1..Q_r on Phi_0 and tests vanishing up to the cutoff.
bool check_relation(const SmallShift& s, const Target& t, const std::string& expr);

struct FinitenessEntry {
    int alpha = 0, beta = 0;
    int max_degree = 0;  // maximal total degree with nonzero structure constant
    bool stable = false;
};
struct FinitenessReport {
    int cutoff = 0;
    std::vector<FinitenessEntry> entries;
    bool all_stable = false;
    int max_degree = 0;
};
FinitenessReport finiteness_report(const SmallShift& s, const Target& t);

struct SemisimplicityEntry {
    std::vector<Rational> specialization;  // Novikov values Q_1..Q_r
    int picard_index = 0;
    std::vector<Rational> charpoly;
    bool squarefree = false;
};
struct SemisimplicityReport {
    int cutoff = 0;
    std::vector<SemisimplicityEntry> entries;
};
SemisimplicityReport semisimplicity_probe(const SmallShift& s,
                                          const std::vector<std::vector<Rational>>& q_values);

// Shared helper: the quantum product matrices from commuting-operator data
// over any coefficient ring (Rational at t = 0, ExpPoly after the
// t-reconstruction, affine scalars during assembly).
template <class C>
std::vector<NovikovSeries<Matrix<C>>> products_from_commuting(
    const std::vector<NovikovSeries<Matrix<C>>>& acom, const Target& t);

// Specialize a Rational Novikov series matrix at numeric Novikov values.
Matrix<Rational> specialize(const RationalMatrixSeries& s, const std::vector<Rational>& qs);

template <class C>
std::vector<NovikovSeries<Matrix<C>>> products_from_commuting(
    const std::vector<NovikovSeries<Matrix<C>>>& acom, const Target& t) {
    require(static_cast<int>(acom.size()) == t.picard_rank, "DimensionMismatch",
            "one commuting operator per Picard generator expected");
    const int rank = t.rank;
    const int r = t.picard_rank;
    const int cutoff = acom[0].cutoff();
    Matrix<C> zmat = acom[0].zero_proto();
    NovikovSeries<Matrix<C>> B(r, cutoff, zmat);
    std::vector<NovikovSeries<Matrix<C>>> cols(rank, NovikovSeries<Matrix<C>>(r, cutoff, zmat));
    // B's beta-th column is F_beta(A_com) Phi_0; cols[alpha] collects
    // F_beta(A_com) Phi_alpha for all beta.
    for (int beta = 0; beta < rank; ++beta) {
        // F_beta evaluated on the commuting operators, degree by degree
        NovikovSeries<Matrix<C>> F(r, cutoff, zmat);
        Matrix<C> id = Matrix<C>::identity(rank, zmat.zero_like(), zmat.zero_like() + C(1));
        for (const auto& [mono, coeff] : t.basis_monomials[beta]) {
            NovikovSeries<Matrix<C>> term(r, cutoff, zmat);
            term.set(Degree::zero(r), id);
            for (int i = 0; i < r; ++i)
                for (int e = 0; e < mono[i]; ++e) term = term * acom[i];
            F += term.scaled(detail::coeff_from_rational<C>(coeff));
        }
        for (const auto& [d, mat] : F.terms()) {
            B.add_to(d, [&] {
                Matrix<C> m(rank, rank, zmat.zero_like());
                m.set_column(beta, mat.column(0));
                return m;
            }());
            for (int alpha = 0; alpha < rank; ++alpha) {
                Matrix<C> m(rank, rank, zmat.zero_like());
                m.set_column(beta, mat.column(alpha));
                cols[alpha].add_to(d, m);
            }
        }
    }
    // Omega_alpha = cols[alpha] * B^{-1}; B_0 is the classical basis matrix
    // (the identity in the canonical presentation).
    auto Binv = invert_matrix_series(B, [](const C& x) { return ring_inverse_constant(x); });
    std::vector<NovikovSeries<Matrix<C>>> omega;
    for (int alpha = 0; alpha < rank; ++alpha) omega.push_back(cols[alpha] * Binv);
    return omega;
}

}  // namespace qk
