#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qk/matrix.hpp"
#include "qk/novikov.hpp"
#include "qk/qrat.hpp"

namespace qk {

// Sparse polynomial in x_1..x_r with rational coefficients: the monomial
// presentation F_alpha(P_1^{-1}..P_r^{-1}) = Phi_alpha of a basis class.
using XPoly = std::map<Mono, Rational>;

// Finite model of the target space: basis, classical ring, Picard
// generators, Euler pairing and the small J-function provider. Immutable
// after load.
struct Target {
    std::string name;
    int rank = 0;         // N+1
    int picard_rank = 0;  // r
    std::vector<std::string> basis_labels;
    // mult[alpha] = matrix of classical multiplication by Phi_alpha
    std::vector<Matrix<Rational>> mult;
    // picard[i] = matrix of classical multiplication by P_i^{-1}
    std::vector<Matrix<Rational>> picard;
    std::vector<Rational> chi;        // chi(Phi_alpha)
    std::vector<XPoly> basis_monomials;  // F_alpha, empty after a basis change
    // basis indices whose classes are the divisor generators 1 - P_i^{-1};
    // reconstructed coefficients may carry exponentials only in these
    // coordinate directions
    std::vector<int> divisor_directions;
    // aliases for insertion classes ("H", "pt", "Pinv", ...) as coefficient vectors
    std::map<std::string, std::vector<Rational>> class_aliases;
    Matrix<Rational> g;  // pairing g_{alpha beta} = chi(Phi_alpha Phi_beta)

    std::function<std::vector<QRat>(const Degree&)> j_provider;

    std::vector<Rational> classical_mul(const std::vector<Rational>& a,
                                        const std::vector<Rational>& b) const;
    Rational pairing_g(const std::vector<Rational>& a, const std::vector<Rational>& b) const;
    Rational chi_of(const std::vector<Rational>& a) const;
    std::vector<QRat> j_coefficient(const Degree& d) const;
    bool has_basis_monomials() const { return !basis_monomials.empty(); }

    // Evaluate F_alpha on r commuting matrices over any ring.
    template <class T>
    Matrix<T> eval_basis_monomial(int alpha, const std::vector<Matrix<T>>& x) const;

    std::vector<Rational> resolve_class(const std::string& label) const;
};

// Presets "cpn:N" and "fl3" bypass the document; anything else is a path to
// a target document (see load_target_document).
Target load_target(const std::string& spec);
Target make_projective_space(int N);
Target make_flag3();
Target load_target_document(const std::string& json_text);

// Validation of all structural invariants; ValidationFailure names the
// violated one.
void validate_target(const Target& t);

// New basis Phi'_beta = sum_alpha C_{alpha beta} Phi_alpha. Returns the
// conjugated target together with the coordinate substitution t_old = C t_new
// restricted to the non-identity block (for re-expressing ExpPoly data).
struct BasisChange {
    Target target;
    Matrix<Rational> coordinate_map;  // (rank-1) x (rank-1), t_old = map * t_new
    Matrix<Rational> C;
    Matrix<Rational> C_inv;
};
BasisChange change_basis(const Target& t, const Matrix<Rational>& C);

std::vector<Degree> effective_degrees(const Target& t, int cutoff);

template <class T>
Matrix<T> Target::eval_basis_monomial(int alpha, const std::vector<Matrix<T>>& x) const {
    require(alpha >= 0 && alpha < rank && has_basis_monomials(), "ValidationFailure",
            "basis monomials unavailable");
    require(static_cast<int>(x.size()) == picard_rank, "DimensionMismatch",
            "wrong number of generator matrices");
    const int n = x.empty() ? 0 : x[0].rows();
    T zero = x.empty() ? T() : x[0].zero_like();
    T one = zero + T(1);
    Matrix<T> acc(n, n, zero);
    for (const auto& [mono, coeff] : basis_monomials[alpha]) {
        Matrix<T> term = Matrix<T>::identity(n, zero, one);
        for (int i = 0; i < picard_rank; ++i)
            for (int e = 0; e < mono[i]; ++e) term *= x[i];
        acc += term.scaled(detail::coeff_from_rational<T>(coeff));
    }
    return acc;
}

}  // namespace qk
