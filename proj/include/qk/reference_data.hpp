#pragma once

#include <string>
#include <vector>

#include "qk/exppoly.hpp"
#include "qk/novikov.hpp"
#include "qk/smallrec.hpp"

namespace qk::reference {

// Published values used as exact golden data. Every item carries a
// provenance label reachable through citation(id); the comparisons are exact
// rational/symbolic equality.

// fl3: the two 6x6 shift operator matrices (q-free, polynomial in Q1, Q2).
std::vector<RationalMatrixSeries> fl3_shift_operators(int cutoff);

// cp1 displays in the {1, P^{-1}} presentation, one variable t.
Matrix<ExpPoly> cp1_shift_degree1();         // A_1 = Omega_1
Matrix<ExpPoly> cp1_shift_degree2_layer0();  // coefficient of (1-q)^0 Q^2
Matrix<ExpPoly> cp1_shift_degree2_layer1();  // coefficient of (1-q)^1 Q^2
Matrix<ExpPoly> cp1_product_degree2();       // Omega_2
ExpPoly cp1_y(int d);                        // d = 1..4
ExpPoly cp1_x(int d);                        // d = 1..4
ExpPoly cp1_g(int d);                        // d = 0..4

// cp2 displays in the canonical basis {1, h, h^2}, variables (t, s).
Matrix<Rational> cp2_shift_initial();     // A at t = s = 0, coefficient of Q
Matrix<ExpPoly> cp2_shift_degree1();      // A coefficient of Q
Matrix<ExpPoly> cp2_product_h_degree1();  // Omega coefficient of Q
Matrix<ExpPoly> cp2_product_h2_degree1();  // Xi coefficient of Q
ExpPoly cp2_potential(int qdeg);           // F_000 coefficients, qdeg = 0..3

// cp2 invariant tables; entry (i, j) = correlator of i hyperplane and j
// point insertions at the given degree.
std::vector<std::vector<long long>> cp2_invariant_table(int degree);  // 1..3

// Provenance label for a fixture id ("fl3.A1", "cp1.g2", "cp2.table3", ...).
std::string citation(const std::string& id);

}  // namespace qk::reference
