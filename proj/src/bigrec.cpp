#include "qk/bigrec.hpp"

#include <algorithm>

namespace qk {

namespace {

ExpPoly restrict_vars(const ExpPoly& f, int keep) {
    ExpPoly r = f;
    for (int v = keep; v < f.nvar(); ++v) r = r.eval_zero(v);
    return r;
}

ExpMatrix restrict_vars(const ExpMatrix& m, int keep) {
    return m.map([&](const ExpPoly& f) { return restrict_vars(f, keep); });
}

ExpMatrix embed_const(const Matrix<Rational>& m, int nvar) {
    return m.map([&](const Rational& x) { return ExpPoly::from_rational(nvar, x); });
}

QExpMatrix embed_q(const Matrix<Rational>& m, int nvar) {
    return m.map([&](const Rational& x) { return QRatExpPoly::constant(nvar, QRat(x)); });
}

}  // namespace

std::vector<ExpMatrixSeries> BigShift::commuting(const Target& t) const {
    int nv = rank - 1;
    std::vector<ExpMatrixSeries> acom;
    for (int i = 0; i < picard_rank; ++i) {
        ExpMatrixSeries s(picard_rank, cutoff, ExpMatrix(rank, rank, ExpPoly::zero(nv)));
        s.set(Degree::zero(picard_rank), embed_const(t.picard[i], nv));
        for (const auto& [d, ls] : layers[i])
            if (!ls.empty()) s.add_to(d, ls[0]);
        acom.push_back(std::move(s));
    }
    return acom;
}

std::vector<ExpMatrix> shift_layers_at(const BigShift& s, const Target& t, int i,
                                       const Degree& d) {
    int nv = s.rank - 1;
    if (d.is_zero()) return {embed_const(t.picard[i], nv)};
    const auto* l = s.find(i, d);
    if (!l) return {};
    return *l;
}

namespace {

// Omega_{alpha,d} slices from commuting-operator data truncated at total(d).
std::vector<ExpMatrix> omega_slices(const Target& t, const std::vector<ExpMatrixSeries>& acom,
                                    const Degree& d) {
    auto omega = products_from_commuting(acom, t);
    std::vector<ExpMatrix> out;
    out.reserve(t.rank);
    for (int alpha = 0; alpha < t.rank; ++alpha) out.push_back(omega[alpha].at(d));
    return out;
}

struct LinearCoupling {
    // lin[alpha][j][c*rank+e] = the constant matrix multiplying the unknown
    // entry A_{j,d,0}(c,e) inside Omega_{alpha,d}.
    std::vector<std::vector<std::vector<Matrix<Rational>>>> lin;
};

// The linear coefficients are independent of all lower-degree data: by the
// degree-homogeneity of the product expressions, a term containing a
// top-degree unknown has only degree-zero (constant) companions. Extract
// them with the lower degrees zeroed.
LinearCoupling extract_linear_coupling(const Target& t, const Degree& d,
                                       const std::vector<int>& unknown_is) {
    const int rank = t.rank, r = t.picard_rank, nv = rank - 1;
    LinearCoupling out;
    out.lin.assign(
        rank, std::vector<std::vector<Matrix<Rational>>>(
                  r, std::vector<Matrix<Rational>>(static_cast<size_t>(rank) * rank,
                                                   Matrix<Rational>(rank, rank))));
    for (int j : unknown_is)
        for (int c = 0; c < rank; ++c)
            for (int e = 0; e < rank; ++e) {
                std::vector<ExpMatrixSeries> acom;
                for (int i = 0; i < r; ++i) {
                    ExpMatrixSeries s(r, d.total(), ExpMatrix(rank, rank, ExpPoly::zero(nv)));
                    s.set(Degree::zero(r), embed_const(t.picard[i], nv));
                    if (i == j) {
                        ExpMatrix unit(rank, rank, ExpPoly::zero(nv));
                        unit(c, e) = ExpPoly(1);
                        s.set(d, unit);
                    }
                    acom.push_back(std::move(s));
                }
                auto slices = omega_slices(t, acom, d);
                for (int alpha = 0; alpha < rank; ++alpha) {
                    Matrix<Rational> coeff(rank, rank);
                    for (int a = 0; a < rank; ++a)
                        for (int b = 0; b < rank; ++b) {
                            const ExpPoly& v = slices[alpha](a, b);
                            require(v.is_constant(), "InconsistentKnownData",
                                    "linear coupling coefficient is not constant");
                            coeff(a, b) = v.eval_all_zero();
                        }
                    out.lin[alpha][j][static_cast<size_t>(c) * rank + e] = std::move(coeff);
                }
            }
    return out;
}

struct DegreeContext {
    Degree d;
    std::vector<std::pair<int, int>> blocks;  // (i, layer k), k <= d_i - 1
    std::vector<int> unknown_is;
    LinearCoupling coupling;
};

DegreeContext make_context(const Target& t, const Degree& d) {
    DegreeContext ctx;
    ctx.d = d;
    for (int i = 0; i < t.picard_rank; ++i)
        if (d[i] > 0) {
            ctx.unknown_is.push_back(i);
            for (int k = 0; k < d[i]; ++k) ctx.blocks.emplace_back(i, k);
        }
    ctx.coupling = extract_linear_coupling(t, d, ctx.unknown_is);
    return ctx;
}

OdeAssembly assemble_for(const TheoryState& state, const DegreeContext& ctx, int beta_var) {
    const Target& t = state.target;
    const int rank = t.rank, r = t.picard_rank, nv = rank - 1;
    const Degree& d = ctx.d;
    const int bs = rank * rank;
    const int nblocks = static_cast<int>(ctx.blocks.size());
    const int n = nblocks * bs;
    const int keep = beta_var;  // variables t^1..t^{beta} stay active

    OdeAssembly out;
    out.blocks = ctx.blocks;
    out.problem.dimension = n;
    out.problem.active = beta_var - 1;
    out.problem.L = Matrix<Rational>(n, n);
    out.problem.B.assign(n, ExpPoly::zero(nv));

    const Matrix<Rational>& W = t.mult[beta_var];  // Omega_{beta,0}

    // Omega^{(2)}_{beta,d}: the top-degree unknowns set to zero, lower-degree
    // layers restricted to the active variable range.
    std::vector<ExpMatrixSeries> acom_restricted;
    for (int i = 0; i < r; ++i) {
        ExpMatrixSeries s(r, d.total(), ExpMatrix(rank, rank, ExpPoly::zero(nv)));
        s.set(Degree::zero(r), embed_const(t.picard[i], nv));
        for (const auto& [dd, ls] : state.shift.layers[i]) {
            if (dd == d || dd.total() > d.total() || ls.empty()) continue;
            s.add_to(dd, restrict_vars(ls[0], keep));
        }
        acom_restricted.push_back(std::move(s));
    }
    ExpMatrix omega2 = omega_slices(t, acom_restricted, d)[beta_var];

    auto block_offset = [&](int i, int k) -> int {
        for (int b = 0; b < nblocks; ++b)
            if (ctx.blocks[b] == std::make_pair(i, k)) return b * bs;
        fail("InternalError", "unknown block requested");
    };

    for (int b = 0; b < nblocks; ++b) {
        auto [i, km1] = ctx.blocks[b];
        const int k = km1 + 1;  // equation index: d/dt of layer k-1
        const int row0 = b * bs;
        Rational s_k = Rational::binomial(d[i], k);
        if (k % 2) s_k = -s_k;

        // commutator with the classical multiplication: [A_{i,d,k}, W]
        if (k <= d[i] - 1) {
            int col0 = block_offset(i, k);
            for (int a = 0; a < rank; ++a)
                for (int bb = 0; bb < rank; ++bb) {
                    int row = row0 + a * rank + bb;
                    for (int e = 0; e < rank; ++e) {
                        out.problem.L(row, col0 + a * rank + e) += W(e, bb);
                        out.problem.L(row, col0 + e * rank + bb) -= W(a, e);
                    }
                }
        }

        // coupling s_k P_i^{-1} Omega^{(1)}_{beta,d}(unknowns)
        for (int j : ctx.unknown_is) {
            int col0 = block_offset(j, 0);
            for (int c = 0; c < rank; ++c)
                for (int e = 0; e < rank; ++e) {
                    const Matrix<Rational>& lin =
                        ctx.coupling.lin[beta_var][j][static_cast<size_t>(c) * rank + e];
                    if (lin.is_zero()) continue;
                    Matrix<Rational> contrib = (t.picard[i] * lin).scaled(s_k);
                    for (int a = 0; a < rank; ++a)
                        for (int bb = 0; bb < rank; ++bb)
                            out.problem.L(row0 + a * rank + bb, col0 + c * rank + e) +=
                                contrib(a, bb);
                }
        }

        // known part of the d'' = d contribution
        ExpMatrix Bmat = (embed_const(t.picard[i], nv) * omega2).scaled(s_k);

        // middle decompositions d = d' + d'' with d', d'' both nonzero
        for (const Degree& dp : degrees_below(d)) {
            if (dp.is_zero() || dp == d) continue;
            Degree dpp = d - dp;
            ExpMatrix om = restrict_vars(state.products[beta_var].at(dpp), keep);
            if (om.is_zero()) continue;
            const auto* lsp = state.shift.find(i, dp);
            if (lsp && k <= dp[i] - 1 && k < static_cast<int>(lsp->size())) {
                ExpMatrix Ak = restrict_vars((*lsp)[static_cast<size_t>(k)], keep);
                Bmat += Ak * om - om * Ak;
            }
            for (int kpp = 1; kpp <= std::min(k, dpp[i]); ++kpp) {
                int kp = k - kpp;
                if (!lsp || kp > dp[i] - 1 || kp >= static_cast<int>(lsp->size())) continue;
                Rational c = Rational::binomial(dpp[i], kpp);
                if (kpp % 2) c = -c;
                Bmat += (restrict_vars((*lsp)[static_cast<size_t>(kp)], keep) * om).scaled(c);
            }
        }

        for (int a = 0; a < rank; ++a)
            for (int bb = 0; bb < rank; ++bb) out.problem.B[row0 + a * rank + bb] = Bmat(a, bb);
    }
    return out;
}

}  // namespace

OdeAssembly assemble_ode(const Degree& d, int beta, const TheoryState& state) {
    DegreeContext ctx = make_context(state.target, d);
    return assemble_for(state, ctx, beta);
}

TheoryState reconstruct(const Target& t, const SmallShift& small, int cutoff) {
    const int rank = t.rank, r = t.picard_rank, nv = rank - 1;
    TheoryState state;
    state.target = t;
    state.cutoff = cutoff;
    state.shift.rank = rank;
    state.shift.picard_rank = r;
    state.shift.cutoff = cutoff;
    state.shift.layers.assign(r, {});
    state.products.assign(rank,
                          ExpMatrixSeries(r, cutoff, ExpMatrix(rank, rank, ExpPoly::zero(nv))));
    for (int alpha = 0; alpha < rank; ++alpha)
        state.products[alpha].set(Degree::zero(r), embed_const(t.mult[alpha], nv));

    // initial conditions: (1-q)-layers of the small shift operators at t = 0
    std::vector<std::map<Degree, std::vector<Matrix<Rational>>>> small_layers(r);
    for (int i = 0; i < r; ++i)
        for (const auto& [d, m] : small.A[i].terms()) {
            if (d.is_zero()) continue;
            std::vector<Matrix<Rational>> ls(static_cast<size_t>(d[i]),
                                             Matrix<Rational>(rank, rank));
            for (int a = 0; a < rank; ++a)
                for (int b = 0; b < rank; ++b) {
                    auto exp = expand_one_minus_q(m(a, b));
                    require(static_cast<int>(exp.coeffs.size()) <= d[i], "ResidualNonzero",
                            "small shift operator exceeds its layer bound");
                    for (size_t k = 0; k < exp.coeffs.size(); ++k) ls[k](a, b) = exp.coeffs[k];
                }
            small_layers[i][d] = std::move(ls);
        }

    for (const Degree& d : all_degrees(r, cutoff)) {
        if (d.is_zero()) continue;
        DegreeContext ctx = make_context(t, d);
        const int nblocks = static_cast<int>(ctx.blocks.size());
        const int bs = rank * rank;
        const int n = nblocks * bs;

        // stacked initial values at t = 0
        std::vector<ExpPoly> Y(n, ExpPoly::zero(nv));
        for (int b = 0; b < nblocks; ++b) {
            auto [i, k] = ctx.blocks[b];
            auto it = small_layers[i].find(d);
            if (it == small_layers[i].end() || k >= static_cast<int>(it->second.size())) continue;
            const Matrix<Rational>& m = it->second[static_cast<size_t>(k)];
            for (int a = 0; a < rank; ++a)
                for (int bb = 0; bb < rank; ++bb)
                    Y[b * bs + a * rank + bb] = ExpPoly::from_rational(nv, m(a, bb));
        }

        // variable-by-variable cascade: later variables start at zero
        for (int beta = 1; beta <= nv; ++beta) {
            OdeAssembly as = assemble_for(state, ctx, beta);
            as.problem.Y0 = std::move(Y);
            Y = solve_linear_ode(as.problem);
        }

        // store layers and check the polynomiality structure
        for (int b = 0; b < nblocks; ++b) {
            auto [i, k] = ctx.blocks[b];
            auto& dest = state.shift.layers[i][d];
            if (dest.empty())
                dest.assign(static_cast<size_t>(d[i]), ExpMatrix(rank, rank, ExpPoly::zero(nv)));
            for (int a = 0; a < rank; ++a)
                for (int bb = 0; bb < rank; ++bb) {
                    ExpPoly v = Y[b * bs + a * rank + bb].promoted(nv);
                    require(v.integral_frequencies(), "ResidualNonzero",
                            "reconstructed coefficient has non-integral frequencies");
                    for (const auto& [fr, poly] : v.terms())
                        for (size_t slot = 0; slot < fr.size(); ++slot)
                            if (!fr[slot].is_zero())
                                require(std::find(t.divisor_directions.begin(),
                                                  t.divisor_directions.end(),
                                                  static_cast<int>(slot) + 1) !=
                                            t.divisor_directions.end(),
                                        "ResidualNonzero",
                                        "reconstructed coefficient uses exponentials outside "
                                        "the divisor directions");
                    dest[static_cast<size_t>(k)](a, bb) = std::move(v);
                }
        }

        // products at this degree from the commuting operators
        {
            std::vector<ExpMatrixSeries> acom;
            for (int i = 0; i < r; ++i) {
                ExpMatrixSeries s(r, d.total(), ExpMatrix(rank, rank, ExpPoly::zero(nv)));
                s.set(Degree::zero(r), embed_const(t.picard[i], nv));
                for (const auto& [dd, ls] : state.shift.layers[i])
                    if (dd.total() <= d.total() && !ls.empty()) s.add_to(dd, ls[0]);
                acom.push_back(std::move(s));
            }
            auto slices = omega_slices(t, acom, d);
            for (int alpha = 0; alpha < rank; ++alpha) state.products[alpha].set(d, slices[alpha]);
        }

        // leftover q-free constraint layer: 0 = sum [A_{i,d',0}, Omega_{alpha,d''}]
        for (int i = 0; i < r; ++i)
            for (int alpha = 1; alpha < rank; ++alpha) {
                ExpMatrix resid(rank, rank, ExpPoly::zero(nv));
                for (const Degree& dp : degrees_below(d)) {
                    Degree dpp = d - dp;
                    const ExpMatrix& om = state.products[alpha].at(dpp);
                    if (om.is_zero()) continue;
                    ExpMatrix A0(rank, rank, ExpPoly::zero(nv));
                    if (dp.is_zero()) {
                        A0 = embed_const(t.picard[i], nv);
                    } else {
                        const auto* ls = state.shift.find(i, dp);
                        if (!ls || ls->empty()) continue;
                        A0 = (*ls)[0];
                    }
                    resid += A0 * om - om * A0;
                }
                require(resid.is_zero(), "ResidualNonzero",
                        "q-free constraint layer failed at a reconstructed degree");
            }
    }
    return state;
}

void fundamental_solution_T(TheoryState& state) {
    const Target& t = state.target;
    const int rank = t.rank, r = t.picard_rank, nv = rank - 1;
    const int cutoff = state.cutoff;
    state.T_big = QExpMatrixSeries(r, cutoff, QExpMatrix(rank, rank, QRatExpPoly::zero(nv)));

    // T|_{Q=0} = exp((t x)/(1-q)): finite because multiplication by t is
    // nilpotent in the canonical basis (t^0 = 0 throughout).
    QExpMatrix tmul(rank, rank, QRatExpPoly::zero(nv));
    for (int alpha = 1; alpha < rank; ++alpha) {
        QRatExpPoly va = QRatExpPoly::zero(nv);
        va.add_term(Freq(nv, Rational(0)), [&] {
            Mono m(nv, 0);
            m[alpha - 1] = 1;
            return m;
        }(), QRat(1));
        tmul += embed_q(t.mult[alpha], nv).map([&](const QRatExpPoly& c) { return c * va; });
    }
    QExpMatrix T0 =
        QExpMatrix::identity(rank, QRatExpPoly::zero(nv), QRatExpPoly::constant(nv, QRat(1)));
    QExpMatrix power = T0;
    for (long j = 1;; ++j) {
        power = power * tmul;
        if (power.is_zero()) break;
        QRat c = QRat::one_minus_q_inverse(1, j).scaled(Rational::factorial(j).inverse());
        T0 += power.map([&](const QRatExpPoly& x) { return x.coeff_scaled(c); });
        require(j <= rank + 1, "ResidualNonzero", "t-multiplication is not nilpotent");
    }
    state.T_big.set(Degree::zero(r), T0);

    auto shift_matrix = [&](int i, const Degree& dd) {
        QExpMatrix m(rank, rank, QRatExpPoly::zero(nv));
        const auto* ls = state.shift.find(i, dd);
        if (!ls) return m;
        for (size_t k = 0; k < ls->size(); ++k) {
            QRat omq = QRat(QLaurent::one_minus_q(1)).pow(static_cast<long>(k));
            m += (*ls)[k].map(
                [&](const ExpPoly& f) { return embed_qrat(f).coeff_scaled(omq); });
        }
        return m;
    };

    for (const Degree& d : all_degrees(r, cutoff)) {
        if (d.is_zero()) continue;
        QExpMatrix solved(rank, rank, QRatExpPoly::zero(nv));
        bool have = false;
        for (int i = 0; i < r; ++i) {
            if (d[i] == 0) continue;
            // q^{d_i} P_i^{-1} T_d - T_d P_i^{-1} = sum_{d'' != 0} T_{d-d''} A_{i,d''}
            QExpMatrix rhs(rank, rank, QRatExpPoly::zero(nv));
            for (const Degree& dpp : degrees_below(d)) {
                if (dpp.is_zero()) continue;
                const QExpMatrix& Tm = state.T_big.at(d - dpp);
                if (Tm.is_zero()) continue;
                QExpMatrix Am = shift_matrix(i, dpp);
                if (Am.is_zero()) continue;
                rhs += Tm * Am;
            }
            // X -> cX + D(X) with c = q^{d_i} - 1 invertible and
            // D(X) = -q^{d_i} N X + X N nilpotent (N = 1 - P_i^{-1})
            QExpMatrix Nq = embed_q(Matrix<Rational>::identity(rank) - t.picard[i], nv);
            QRat cinv = QRat::one_minus_q_inverse(d[i]).scaled(Rational(-1));
            QExpMatrix X(rank, rank, QRatExpPoly::zero(nv));
            QExpMatrix term = rhs.map([&](const QRatExpPoly& x) { return x.coeff_scaled(cinv); });
            int guard = 0;
            while (!term.is_zero()) {
                X += term;
                QExpMatrix dterm =
                    (Nq * term.map([&](const QRatExpPoly& x) { return q_power_scaled(x, d[i]); }))
                        .map([](const QRatExpPoly& x) { return -x; }) +
                    term * Nq;
                term = dterm.map([&](const QRatExpPoly& x) { return x.coeff_scaled(-cinv); });
                require(++guard <= 3 * rank + 3, "SylvesterSingular",
                        "Sylvester expansion failed to terminate");
            }
            if (!have) {
                solved = X;
                have = true;
            } else {
                require(solved == X, "InconsistentAcrossPicardDirections",
                        "fundamental solution differs across Picard directions");
            }
        }
        state.T_big.set(d, solved);
    }
    state.has_T = true;
}

void pairing_and_potential(TheoryState& state) {
    require(state.has_T, "NotAvailable", "fundamental solution required before the pairing");
    const Target& t = state.target;
    const int rank = t.rank, r = t.picard_rank, nv = rank - 1;
    const int cutoff = state.cutoff;
    state.G_big = ExpMatrixSeries(r, cutoff, ExpMatrix(rank, rank, ExpPoly::zero(nv)));
    state.potential_core = ExpSeries(r, cutoff, ExpPoly::zero(nv));

    std::map<Degree, QExpMatrix> left;  // bar(T_{d'})^T g
    for (const auto& [dp, Tm] : state.T_big.terms())
        left.emplace(dp, Tm.map([](const QRatExpPoly& x) { return bar_q(x); }).transposed() *
                             embed_q(t.g, nv));

    for (const Degree& d : all_degrees(r, cutoff)) {
        QExpMatrix acc(rank, rank, QRatExpPoly::zero(nv));
        for (const auto& [dp, lm] : left) {
            if (!d.contains(dp)) continue;
            const QExpMatrix& Tm = state.T_big.at(d - dp);
            if (Tm.is_zero()) continue;
            acc += lm * Tm;
        }
        ExpMatrix Gd(rank, rank, ExpPoly::zero(nv));
        for (int a = 0; a < rank; ++a)
            for (int b = 0; b < rank; ++b) {
                try {
                    Gd(a, b) = strip_q(acc(a, b));
                } catch (const Error&) {
                    fail("QDependentPairing", "pairing failed to cancel the q-dependence");
                }
            }
        for (int a = 0; a < rank; ++a)
            for (int b = 0; b < a; ++b)
                require(Gd(a, b) == Gd(b, a), "ResidualNonzero", "pairing is not symmetric");
        state.G_big.set(d, Gd);
        state.potential_core.set(d, Gd(0, 0));
    }
    require(state.G_big.at(Degree::zero(r)).map([](const ExpPoly& f) {
        return f.eval_all_zero();
    }) == t.g,
            "ResidualNonzero", "pairing classical limit mismatch");
    state.has_G = true;
}

Rational extract_invariants(const TheoryState& state,
                            const std::vector<std::pair<std::vector<Rational>, int>>& insertions,
                            const Degree& d) {
    require(state.has_G, "NotAvailable", "potential required for invariants");
    require(d.rank() == state.target.picard_rank && d.total() <= state.cutoff,
            "DegreeBeyondCutoff", "degree outside the reconstructed range");
    const Target& t = state.target;
    const int rank = t.rank, nv = rank - 1;
    // Work in rank variables: slot 0 for t^0, slots 1..N the reconstructed
    // coordinates. F = e^{t^0} G_00(0,t') - (chi(O) + chi(t) + chi(t@t)/2);
    // the correction lives at Q = 0 only.
    Matrix<Rational> S(nv, rank);
    for (int a = 0; a < nv; ++a) S(a, a + 1) = Rational(1);

    ExpPoly F = state.potential_core.at(d).promoted(nv).substituted(S);
    {
        Freq e0(rank, Rational(0));
        e0[0] = Rational(1);
        F *= ExpPoly::exponential(rank, e0);
    }
    if (d.is_zero()) {
        std::vector<Rational> unit(rank);
        unit[0] = Rational(1);
        ExpPoly corr = ExpPoly::from_rational(rank, t.chi_of(unit));
        for (int alpha = 0; alpha < rank; ++alpha) {
            corr += ExpPoly::variable(rank, alpha).scaled(t.chi[alpha]);
            for (int beta = 0; beta < rank; ++beta)
                corr += (ExpPoly::variable(rank, alpha) * ExpPoly::variable(rank, beta))
                            .scaled(t.g(alpha, beta) * Rational(1, 2));
        }
        F -= corr;
    }
    for (const auto& [cls, count] : insertions) {
        require(static_cast<int>(cls.size()) == rank, "DimensionMismatch",
                "insertion class length");
        for (int c = 0; c < count; ++c) {
            ExpPoly dF = ExpPoly::zero(rank);
            for (int alpha = 0; alpha < rank; ++alpha)
                if (!cls[alpha].is_zero()) dF += F.differentiated(alpha).scaled(cls[alpha]);
            F = std::move(dF);
        }
    }
    return F.eval_all_zero();
}

namespace {

// A_i(q) at a fixed degree as (1-q)-power layers; all residual checks run in
// this q-free layer arithmetic.
using Layered = std::vector<ExpMatrix>;

void layered_add(Layered& a, const Layered& b, int offset = 0) {
    if (b.empty()) return;
    while (a.size() < b.size() + static_cast<size_t>(offset))
        a.push_back(ExpMatrix(b[0].rows(), b[0].cols(), b[0].zero_like()));
    for (size_t k = 0; k < b.size(); ++k) a[k + static_cast<size_t>(offset)] += b[k];
}

Layered layered_mul(const Layered& a, const Layered& b) {
    Layered r;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            layered_add(r, Layered{a[i] * b[j]}, static_cast<int>(i + j));
    return r;
}

Layered layered_scaled(const Layered& a, const Rational& c) {
    Layered r = a;
    for (auto& m : r) m = m.scaled(c);
    return r;
}

// multiply by q^{p} = (1 - (1-q))^{p}
Layered layered_qpow(const Layered& a, int p) {
    Layered r;
    for (int k = 0; k <= p; ++k) {
        Rational c = Rational::binomial(p, k);
        if (k % 2) c = -c;
        layered_add(r, layered_scaled(a, c), k);
    }
    return r;
}

bool layered_is_zero(const Layered& a) {
    for (const auto& m : a)
        if (!m.is_zero()) return false;
    return true;
}

}  // namespace

ResidualReport lax_residual(const TheoryState& state) {
    ResidualReport rep;
    const Target& t = state.target;
    const int rank = t.rank, r = t.picard_rank;

    for (const Degree& d : all_degrees(r, state.cutoff)) {
        for (int i = 0; i < r; ++i) {
            for (int alpha = 1; alpha < rank; ++alpha) {
                // (1-q) dA_i/dt^alpha - A_i Omega_alpha(q^{e_i}Q) + Omega_alpha A_i
                Layered resid;
                const auto* ls = state.shift.find(i, d);
                if (ls)
                    for (size_t k = 0; k < ls->size(); ++k)
                        layered_add(resid,
                                    Layered{(*ls)[k].map([&](const ExpPoly& f) {
                                        return f.differentiated(alpha - 1);
                                    })},
                                    static_cast<int>(k) + 1);
                for (const Degree& dp : degrees_below(d)) {
                    Degree dpp = d - dp;
                    const ExpMatrix& om = state.products[alpha].at(dpp);
                    if (om.is_zero()) continue;
                    Layered A = shift_layers_at(state.shift, t, i, dp);
                    if (A.empty()) continue;
                    layered_add(resid, layered_scaled(
                                           layered_qpow(layered_mul(A, Layered{om}), dpp[i]),
                                           Rational(-1)));
                    layered_add(resid, layered_mul(Layered{om}, A));
                }
                rep.check(layered_is_zero(resid),
                          "Lax residual nonzero (i=" + std::to_string(i) +
                              ", alpha=" + std::to_string(alpha) + ")");
            }
            // the shift operators commute: coefficients of
            // A_i(q,Q) A_j(q, q^{e_i}Q) are symmetric in (i, j)
            for (int j = i + 1; j < r; ++j) {
                Layered lhs, rhs;
                for (const Degree& dp : degrees_below(d)) {
                    Degree dpp = d - dp;
                    Layered Ai = shift_layers_at(state.shift, t, i, dp);
                    Layered Aj = shift_layers_at(state.shift, t, j, dpp);
                    if (!Ai.empty() && !Aj.empty())
                        layered_add(lhs, layered_mul(Ai, layered_qpow(Aj, dpp[i])));
                    Layered Aj2 = shift_layers_at(state.shift, t, j, dp);
                    Layered Ai2 = shift_layers_at(state.shift, t, i, dpp);
                    if (!Aj2.empty() && !Ai2.empty())
                        layered_add(rhs, layered_mul(Aj2, layered_qpow(Ai2, dpp[j])));
                }
                layered_add(lhs, layered_scaled(rhs, Rational(-1)));
                rep.check(layered_is_zero(lhs), "shift operators fail to commute");
            }
        }
    }
    return rep;
}

ResidualReport restriction_consistency(const TheoryState& state, const SmallShift& small) {
    ResidualReport rep;
    const Target& t = state.target;
    const int rank = t.rank, r = t.picard_rank, nv = rank - 1;
    auto at_zero = [&](const ExpPoly& f) {
        ExpPoly g = f;
        for (int v = 0; v < g.nvar(); ++v) g = g.eval_zero(v);
        return g.eval_all_zero();
    };
    for (int i = 0; i < r; ++i) {
        for (const auto& [d, m] : small.A[i].terms()) {
            if (d.is_zero()) continue;
            const auto* ls = state.shift.find(i, d);
            for (int a = 0; a < rank; ++a)
                for (int b = 0; b < rank; ++b) {
                    auto e = expand_one_minus_q(m(a, b));
                    for (int k = 0; k < d[i]; ++k) {
                        Rational expect =
                            k < static_cast<int>(e.coeffs.size()) ? e.coeffs[k] : Rational(0);
                        Rational got = ls && k < static_cast<int>(ls->size())
                                           ? at_zero((*ls)[static_cast<size_t>(k)](a, b))
                                           : Rational(0);
                        rep.check(got == expect,
                                  "restriction to t=0 disagrees with the small theory");
                    }
                }
        }
        for (const auto& [d, ls] : state.shift.layers[i]) {
            if (!small.A[i].at(d).is_zero()) continue;
            for (const auto& m : ls)
                for (int a = 0; a < rank; ++a)
                    for (int b = 0; b < rank; ++b)
                        rep.check(at_zero(m(a, b)).is_zero(),
                                  "restriction to t=0 has terms the small theory lacks");
        }
    }
    (void)nv;
    return rep;
}

ResidualReport t_equations(const TheoryState& state) {
    ResidualReport rep;
    require(state.has_T, "NotAvailable", "fundamental solution required");
    const Target& t = state.target;
    const int rank = t.rank, r = t.picard_rank, nv = rank - 1;
    QRat omq(QLaurent::one_minus_q(1));

    for (const Degree& d : all_degrees(r, state.cutoff)) {
        for (int alpha = 1; alpha < rank; ++alpha) {
            QExpMatrix lhs = state.T_big.at(d).map([&](const QRatExpPoly& x) {
                return x.differentiated(alpha - 1).coeff_scaled(omq);
            });
            QExpMatrix rhs(rank, rank, QRatExpPoly::zero(nv));
            for (const Degree& dp : degrees_below(d)) {
                const QExpMatrix& Tm = state.T_big.at(dp);
                const ExpMatrix& om = state.products[alpha].at(d - dp);
                if (Tm.is_zero() || om.is_zero()) continue;
                rhs += Tm * om.map([](const ExpPoly& f) { return embed_qrat(f); });
            }
            rep.check(lhs == rhs, "T differential equation fails");
        }
        for (int i = 0; i < r; ++i) {
            QExpMatrix lhs = embed_q(t.picard[i], nv) *
                             state.T_big.at(d).map([&](const QRatExpPoly& x) {
                                 return q_power_scaled(x, d[i]);
                             });
            QExpMatrix rhs(rank, rank, QRatExpPoly::zero(nv));
            for (const Degree& dp : degrees_below(d)) {
                const QExpMatrix& Tm = state.T_big.at(dp);
                if (Tm.is_zero()) continue;
                auto ls = shift_layers_at(state.shift, t, i, d - dp);
                if (ls.empty()) continue;
                QExpMatrix Am(rank, rank, QRatExpPoly::zero(nv));
                for (size_t k = 0; k < ls.size(); ++k) {
                    QRat c = QRat(QLaurent::one_minus_q(1)).pow(static_cast<long>(k));
                    Am += ls[k].map(
                        [&](const ExpPoly& f) { return embed_qrat(f).coeff_scaled(c); });
                }
                rhs += Tm * Am;
            }
            rep.check(lhs == rhs, "T difference equation fails");
        }
    }
    return rep;
}

QExpMatrix invert_unipotent(const QExpMatrix& m) {
    const int n = m.rows();
    const int nv = m.zero_like().nvar();
    Matrix<QRat> c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            QRatExpPoly v = m(i, j);
            for (int var = 0; var < v.nvar(); ++var) v = v.eval_zero(var);
            c(i, j) = v.eval_all_zero();
        }
    Matrix<QRat> cinv = matrix_inverse(c, qrat_ring_inverse);
    QExpMatrix cinv_e =
        cinv.map([&](const QRat& x) { return QRatExpPoly::constant(nv, x); });
    QExpMatrix id =
        QExpMatrix::identity(n, QRatExpPoly::zero(nv), QRatExpPoly::constant(nv, QRat(1)));
    QExpMatrix R = id - cinv_e * m;  // nilpotent when the variable part is
    QExpMatrix acc = id, power = R;
    int guard = 0;
    while (!power.is_zero()) {
        acc += power;
        power = power * R;
        require(++guard <= 3 * n + 3, "SingularLeadingTerm",
                "leading term is not unipotent over its constant part");
    }
    return acc * cinv_e;
}

QExpMatrixSeries invert_fundamental_series(const QExpMatrixSeries& T) {
    return invert_matrix_series_with(T, [](const QExpMatrix& m0) { return invert_unipotent(m0); });
}

Cp1Crosscheck cp1_scalar_crosscheck(const TheoryState& state) {
    const Target& t = state.target;
    require(t.rank == 2 && t.picard_rank == 1, "ValidationFailure",
            "scalar crosscheck is specific to cp1");
    require(state.has_G, "NotAvailable", "potential required for the crosscheck");
    Cp1Crosscheck out;
    const int cutoff = state.cutoff;

    // presentation change {1, h} -> {1, P^{-1}}; the presentation coordinate
    // tau satisfies t_canonical = -tau
    Matrix<Rational> C(2, 2);
    C(0, 0) = Rational(1);
    C(0, 1) = Rational(1);
    C(1, 1) = Rational(-1);
    Matrix<Rational> Cinv = rational_matrix_inverse(C);
    Matrix<Rational> Sub(1, 1);
    Sub(0, 0) = Rational(-1);

    for (int d = 0; d <= cutoff; ++d) {
        // multiplication by P^{-1} = 1 - h, conjugated into the new basis
        ExpMatrix om = state.products[1].at(Degree(std::vector<int>{d}));
        ExpMatrix pd(2, 2, ExpPoly::zero(1));
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                pd(a, b) = -om(a, b).promoted(1).substituted(Sub);
                if (d == 0 && a == b) pd(a, b) += ExpPoly(1);
            }
        ExpMatrix paper(2, 2, ExpPoly::zero(1));
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                ExpPoly acc = ExpPoly::zero(1);
                for (int u = 0; u < 2; ++u)
                    for (int v = 0; v < 2; ++v)
                        if (!Cinv(a, u).is_zero() && !C(v, b).is_zero())
                            acc += pd(u, v).scaled(Cinv(a, u) * C(v, b));
                paper(a, b) = acc;
            }
        out.y.push_back(paper(0, 1));
        out.x.push_back(paper(1, 1));
        bool col0_ok = paper(0, 0).is_zero() &&
                       paper(1, 0) == (d == 0 ? ExpPoly(1) : ExpPoly(0L)).promoted(1);
        out.ok = out.ok && col0_ok;
    }

    // scalar route: g'' = y g + x g' degree by degree with g_d(0) = 1 and
    // g_d'(0) = 0 (both from the small pairing)
    Matrix<Rational> L(2, 2);
    L(0, 1) = Rational(1);
    L(1, 0) = Rational(-1);
    L(1, 1) = Rational(2);
    std::vector<ExpPoly> gs, dgs;
    for (int d = 0; d <= cutoff; ++d) {
        ExpPoly rhs = ExpPoly::zero(1);
        for (int dp = 1; dp <= d; ++dp)
            rhs += out.y[static_cast<size_t>(dp)] * gs[static_cast<size_t>(d - dp)] +
                   out.x[static_cast<size_t>(dp)] * dgs[static_cast<size_t>(d - dp)];
        OdeProblem p;
        p.dimension = 2;
        p.L = L;
        p.B = {ExpPoly::zero(1), rhs};
        p.Y0 = {ExpPoly(1), ExpPoly(0L)};
        p.active = 0;
        auto Y = solve_linear_ode(p);
        gs.push_back(Y[0]);
        dgs.push_back(Y[0].differentiated(0));
        out.scalar_g.push_back(Y[0]);
    }

    // pipeline route: g(tau) = e^{tau} G_00(0, -tau)
    for (int d = 0; d <= cutoff; ++d) {
        ExpPoly core =
            state.potential_core.at(Degree(std::vector<int>{d})).promoted(1).substituted(Sub);
        ExpPoly g = core * ExpPoly::exponential(1, Freq{Rational(1)});
        out.pipeline_g.push_back(g);
        out.ok = out.ok && g == out.scalar_g[static_cast<size_t>(d)];
    }
    return out;
}

}  // namespace qk
