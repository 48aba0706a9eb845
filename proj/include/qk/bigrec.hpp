#pragma once

#include <map>
#include <string>
#include <vector>

#include "qk/odesolve.hpp"
#include "qk/smallrec.hpp"
#include "qk/target.hpp"

namespace qk {

using ExpMatrix = Matrix<ExpPoly>;
using ExpMatrixSeries = NovikovSeries<ExpMatrix>;
using ExpSeries = NovikovSeries<ExpPoly>;
using QExpMatrix = Matrix<QRatExpPoly>;
using QExpMatrixSeries = NovikovSeries<QExpMatrix>;

// q-shift operator coefficients A_{i,d,k}(t): for each Picard direction i
// and degree d with d_i > 0, the (1-q)^k layers k = 0..d_i-1. Entries are
// exponential polynomials in t^1..t^N (independent of t^0 by construction).
struct BigShift {
    int rank = 0;
    int picard_rank = 0;
    int cutoff = 0;
    // per i: degree -> layer matrices
    std::vector<std::map<Degree, std::vector<ExpMatrix>>> layers;

    const std::vector<ExpMatrix>* find(int i, const Degree& d) const {
        auto it = layers[i].find(d);
        return it == layers[i].end() ? nullptr : &it->second;
    }
    // A_{i,com}(t) = P_i^{-1} + sum_d A_{i,d,0}(t) Q^d
    std::vector<ExpMatrixSeries> commuting(const Target& t) const;
};

// Quantum multiplication matrices Omega_alpha(Q, t), alpha = 0..N.
using BigProducts = std::vector<ExpMatrixSeries>;

// Everything the reconstruction produces; the potential is carried as the
// series F_000(0, t') = G_00 together with the target's chi data.
struct TheoryState {
    Target target;
    int cutoff = 0;
    BigShift shift;
    BigProducts products;
    QExpMatrixSeries T_big;
    ExpMatrixSeries G_big;
    ExpSeries potential_core;  // G_00(0, t') per degree
    bool has_T = false;
    bool has_G = false;
};

// The per-degree, per-direction constant-coefficient ODE of the Lax
// recursion, plus bookkeeping to map the stacked unknown vector back to
// layer matrices.
struct OdeAssembly {
    OdeProblem problem;
    std::vector<std::pair<int, int>> blocks;  // (picard index, layer) per block
};

// Quantum products at exactly the degrees below d from commuting-operator
// data; C is Rational/ExpPoly/affine depending on the stage.
OdeAssembly assemble_ode(const Degree& d, int beta, const TheoryState& state);

// Degree-by-degree reconstruction of the big theory from the small shift
// operators: solves the Lax ODE cascade variable by variable, then rebuilds
// the products; the leftover q-free constraint layer is verified.
TheoryState reconstruct(const Target& t, const SmallShift& small, int cutoff);

// T with T|_{Q=0} = exp((t x)/(1-q)) and the q-difference equation
// P_i^{-1} qshift_i(T) = T A_i solved degree by degree (Sylvester step).
void fundamental_solution_T(TheoryState& state);

// G from bar(T)^T g T with exact q-cancellation, and the potential core
// G_00; the identity direction is restored as e^{t^0} at extraction time.
void pairing_and_potential(TheoryState& state);

// K-theoretic GW invariant <classes>_{0,n,d} by exact differentiation of
// the potential; insertion classes are coefficient vectors in the basis.
Rational extract_invariants(const TheoryState& state,
                            const std::vector<std::pair<std::vector<Rational>, int>>& insertions,
                            const Degree& d);

struct ResidualReport {
    bool ok = true;
    std::vector<std::string> failures;
    void check(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            failures.push_back(what);
        }
    }
};

// Verifies the Lax equation (1-q) dA_i = A_i Omega(q^{e_i} Q) - Omega A_i
// and the pairwise shift-operator commutation, identically up to the cutoff.
ResidualReport lax_residual(const TheoryState& state);

// Restriction at t = 0 agrees with the small-theory operators.
ResidualReport restriction_consistency(const TheoryState& state, const SmallShift& small);

// T-equations (1-q) d_alpha T = T Omega_alpha and P_i^{-1} qshift_i(T) = T A_i.
ResidualReport t_equations(const TheoryState& state);

// The scalar route for cp1: solve y g + x g' = g'' degree by degree in the
// {1, P^{-1}} presentation and compare with the pipeline potential.
struct Cp1Crosscheck {
    bool ok = true;
    std::vector<ExpPoly> scalar_g;    // per degree, variable tau
    std::vector<ExpPoly> pipeline_g;  // per degree
    std::vector<ExpPoly> y, x;        // product entries per degree
};
Cp1Crosscheck cp1_scalar_crosscheck(const TheoryState& state);

// A_i(q) viewed in (1-q)-layers for a fixed degree (layer index = power).
std::vector<ExpMatrix> shift_layers_at(const BigShift& s, const Target& t, int i,
                                       const Degree& d);

// Inverse of a matrix whose constant part (all t = 0) is invertible over
// QRat and whose variable part is nilpotent, e.g. T|_{Q=0} = exp((t x)/(1-q)).
QExpMatrix invert_unipotent(const QExpMatrix& m);
// S = T^{-1} as a Novikov series.
QExpMatrixSeries invert_fundamental_series(const QExpMatrixSeries& T);

}  // namespace qk
