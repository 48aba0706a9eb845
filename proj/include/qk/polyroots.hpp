#pragma once

#include <utility>
#include <vector>

#include "qk/matrix.hpp"
#include "qk/rational.hpp"

namespace qk {

// Characteristic polynomial det(xI - M), coefficients ascending, monic.
std::vector<Rational> charpoly(const Matrix<Rational>& m);

struct RootList {
    std::vector<std::pair<Rational, long>> roots;  // (root, multiplicity)
    bool nontrivial_cofactor = false;              // degree >= 1 factor without rational roots
};

// All rational roots (with multiplicities) of a monic polynomial over Q,
// by the rational-root method after clearing denominators.
RootList rational_roots(const std::vector<Rational>& monic_coeffs);

// The complete set of rational eigenvalues of a rational matrix. Scaling by
// the common denominator reduces to integer eigenvalues of an integer
// matrix, which are scanned inside the Gershgorin bound; completeness does
// not depend on factoring the determinant.
std::vector<Rational> rational_eigenvalues_of_matrix(const Matrix<Rational>& m);

// True iff gcd(p, p') is constant.
bool is_squarefree(const std::vector<Rational>& coeffs);

// Polynomial gcd over Q (monic output), coefficients ascending.
std::vector<Rational> poly_gcd(std::vector<Rational> a, std::vector<Rational> b);

Rational poly_eval(const std::vector<Rational>& coeffs, const Rational& x);

}  // namespace qk
