#pragma once

#include <vector>

#include "qk/exppoly.hpp"
#include "qk/matrix.hpp"

namespace qk {

// Constant-coefficient linear ODE dY/dt = L Y + B(t) along one coordinate,
// with initial condition Y(0) = Y0. B and Y0 have ExpPoly entries; Y0 (and
// the coefficients of B) may involve the already-solved variables but not
// the active one.
struct OdeProblem {
    int dimension = 0;
    Matrix<Rational> L;
    std::vector<ExpPoly> B;
    std::vector<ExpPoly> Y0;
    int active = 0;  // 0-based variable index
};

// Unique exact solution via an exponential-polynomial ansatz over the
// frequencies of B joined with the rational eigenvalues of L. The result is
// verified by substitution before returning. AnsatzInsufficient if the
// linear system stays inconsistent after one degree escalation (an
// irrational-eigenvalue resonance).
std::vector<ExpPoly> solve_linear_ode(const OdeProblem& problem);

// Exact rational Gaussian elimination for A x = rhs where A is rational and
// the right-hand side lives in a torsion-free module over Q (ExpPoly
// vectors). Inconsistent systems return false; underdetermined systems pick
// the solution with free variables set to zero.
bool solve_rational_system(const Matrix<Rational>& A, std::vector<ExpPoly> rhs,
                           std::vector<ExpPoly>& solution);

}  // namespace qk
