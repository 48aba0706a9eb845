#include "qk/smallrec.hpp"

#include "qk/exprparse.hpp"
#include "qk/polyroots.hpp"

namespace qk {

QRatMatrixSeries build_M(const Target& t, int cutoff) {
    require(t.has_basis_monomials(), "ValidationFailure",
            "build_M needs the basis monomial presentation");
    const int rank = t.rank, r = t.picard_rank;
    QRatMatrixSeries M(r, cutoff, QRatMatrix(rank, rank));
    QRat omq_inv = QRat::one_minus_q_inverse(1);
    std::vector<Matrix<QRat>> picard;
    for (const auto& p : t.picard)
        picard.push_back(p.map([](const Rational& x) { return QRat(x); }));

    for (const Degree& d : all_degrees(r, cutoff)) {
        std::vector<QRat> v = t.j_coefficient(d);
        for (auto& x : v) x = x * omq_inv;  // J/(1-q)
        QRatMatrix mat(rank, rank);
        for (int alpha = 0; alpha < rank; ++alpha) {
            std::vector<QRat> col(rank);
            for (const auto& [mono, coeff] : t.basis_monomials[alpha]) {
                // x_i acts as P_i^{-1} q^{Q_i dQ_i}: the coefficient at Q^d
                // picks up q^{m_i d_i} P_i^{-m_i}.
                long shift = 0;
                std::vector<QRat> w = v;
                for (int i = 0; i < r; ++i) {
                    shift += static_cast<long>(mono[i]) * d[i];
                    for (int e = 0; e < mono[i]; ++e) w = picard[i].apply(w);
                }
                for (int i = 0; i < rank; ++i) col[i] += w[i].q_shifted(shift).scaled(coeff);
            }
            for (int i = 0; i < rank; ++i) mat(i, alpha) = col[i];
        }
        M.set(d, mat);
    }
    return M;
}

FactorizationResult birkhoff_factorize(const QRatMatrixSeries& M) {
    const int r = M.rank(), cutoff = M.cutoff();
    const int rank = M.zero_proto().rows();
    require(M.at(Degree::zero(r)) == Matrix<QRat>::identity(rank), "ValidationFailure",
            "Birkhoff factorization needs identity leading term");
    FactorizationResult out;
    out.T_small = QRatMatrixSeries(r, cutoff, QRatMatrix(rank, rank));
    out.U = LaurentMatrixSeries(r, cutoff, LaurentMatrix(rank, rank));
    for (const Degree& d : all_degrees(r, cutoff)) {
        if (d.is_zero()) {
            out.T_small.set(d, Matrix<QRat>::identity(rank));
            out.U.set(d, Matrix<QLaurent>::identity(rank));
            continue;
        }
        // R_d = M_d - sum_{d'+d''=d, d',d'' != 0} T_{d'} U_{d''}
        QRatMatrix R = M.at(d);
        for (const auto& [dp, Tm] : out.T_small.terms()) {
            if (dp.is_zero() || !d.contains(dp) || dp == d) continue;
            Degree dpp = d - dp;
            if (dpp.is_zero()) continue;
            const LaurentMatrix& Um = out.U.at(dpp);
            if (Um.is_zero()) continue;
            R -= Tm * Um.map([](const QLaurent& x) { return QRat(x); });
        }
        QRatMatrix Td(rank, rank);
        LaurentMatrix Ud(rank, rank);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) {
                SplitResult s = split_laurent_proper(R(i, j));
                require(QRat(s.laurent) + s.proper == R(i, j), "SplitLeavesResidue",
                        "Laurent/proper split failed to recombine");
                Td(i, j) = s.proper;
                Ud(i, j) = s.laurent;
            }
        out.T_small.set(d, Td);
        out.U.set(d, Ud);
    }
    return out;
}

SmallShift small_shift_operators(const FactorizationResult& f, const Target& t) {
    const int r = f.T_small.rank(), cutoff = f.T_small.cutoff(), rank = t.rank;
    SmallShift out;
    for (int i = 0; i < r; ++i) {
        QRatMatrixSeries shifted = qshift(f.T_small, i, +1);
        Matrix<QRat> Pinv = t.picard[i].map([](const Rational& x) { return QRat(x); });
        QRatMatrixSeries mid(r, cutoff, QRatMatrix(rank, rank));
        for (const auto& [d, m] : shifted.terms()) mid.set(d, Pinv * m);
        // A_i = T^{-1} (P_i^{-1} qshift_i(T)): solve T A_i = mid by forward
        // substitution in the degree grading (T_0 = identity); the A-blocks
        // are small Laurent matrices, which keeps the products cheap.
        QRatMatrixSeries Aq(r, cutoff, QRatMatrix(rank, rank));
        for (const Degree& d : all_degrees(r, cutoff)) {
            QRatMatrix acc = mid.at(d);
            for (const auto& [dp, Tm] : f.T_small.terms()) {
                if (dp.is_zero() || !d.contains(dp)) continue;
                const QRatMatrix& lower = Aq.at(d - dp);
                if (!lower.is_zero()) acc -= Tm * lower;
            }
            Aq.set(d, acc);
        }

        LaurentMatrixSeries Ai(r, cutoff, LaurentMatrix(rank, rank));
        for (const auto& [d, m] : Aq.terms()) {
            LaurentMatrix lm(rank, rank);
            for (int a = 0; a < rank; ++a)
                for (int b = 0; b < rank; ++b) lm(a, b) = m(a, b).as_laurent();
            // Taylor shape in (1-q): polynomial of degree <= d_i - 1 for
            // d_i > 0, absent otherwise.
            if (!d.is_zero()) {
                require(d[i] > 0, "ResidualNonzero",
                        "shift operator has a term with vanishing d_i");
                for (int a = 0; a < rank; ++a)
                    for (int b = 0; b < rank; ++b)
                        if (!lm(a, b).is_zero())
                            require(lm(a, b).min_exp() >= 0 && lm(a, b).max_exp() <= d[i] - 1,
                                    "ResidualNonzero", "shift operator q-degree bound violated");
            }
            lm.is_zero() ? void() : Ai.set(d, lm);
        }
        require(Ai.at(Degree::zero(r)) ==
                    t.picard[i].map([](const Rational& x) { return QLaurent(x); }),
                "ResidualNonzero", "shift operator leading term is not P_i^{-1}");
        RationalMatrixSeries Acom(r, cutoff, Matrix<Rational>(rank, rank));
        for (const auto& [d, m] : Ai.terms())
            Acom.set(d, m.map([](const QLaurent& x) { return x.eval(Rational(1)); }));
        out.A.push_back(std::move(Ai));
        out.A_com.push_back(std::move(Acom));
    }
    return out;
}

std::vector<RationalMatrixSeries> small_products(const SmallShift& s, const Target& t) {
    return products_from_commuting(s.A_com, t);
}

RationalMatrixSeries small_pairing(const FactorizationResult& f, const Target& t) {
    const int r = f.T_small.rank(), cutoff = f.T_small.cutoff(), rank = t.rank;
    Matrix<QRat> g = t.g.map([](const Rational& x) { return QRat(x); });
    // bar(T_{d'})^T g, computed once per degree
    std::map<Degree, Matrix<QRat>> left;
    for (const auto& [dp, Tm] : f.T_small.terms())
        left.emplace(dp, Tm.map([](const QRat& x) { return x.bar(); }).transposed() * g);
    RationalMatrixSeries G(r, cutoff, Matrix<Rational>(rank, rank));
    for (const Degree& d : all_degrees(r, cutoff)) {
        Matrix<QRat> acc(rank, rank);
        for (const auto& [dp, lm] : left) {
            if (!d.contains(dp)) continue;
            const QRatMatrix& Tpp = f.T_small.at(d - dp);
            if (Tpp.is_zero()) continue;
            acc += lm * Tpp;
        }
        Matrix<Rational> Gd(rank, rank);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) {
                require(acc(i, j).is_q_constant(), "QDependentPairing",
                        "pairing failed to cancel the q-dependence");
                Gd(i, j) = acc(i, j).numerator().constant_term();
            }
        G.set(d, Gd);
    }
    return G;
}

bool check_relation(const SmallShift& s, const Target& t, const std::string& expr) {
    const int r = static_cast<int>(s.A_com.size());
    const int rank = t.rank;
    const int cutoff = s.A_com[0].cutoff();
    using S = RationalMatrixSeries;
    ExprOps<S> ops;
    ops.integer = [&](long n) {
        S v(r, cutoff, Matrix<Rational>(rank, rank));
        v.set(Degree::zero(r), Matrix<Rational>::identity(rank).scaled(Rational(n)));
        return v;
    };
    ops.symbol = [&](const std::string& name) -> S {
        for (int i = 0; i < r; ++i) {
            if (name == "a" + std::to_string(i + 1) || (r == 1 && name == "a")) return s.A_com[i];
            if (name == "Q" + std::to_string(i + 1) || (r == 1 && name == "Q")) {
                S v(r, cutoff, Matrix<Rational>(rank, rank));
                v.set(Degree::unit(r, i), Matrix<Rational>::identity(rank));
                return v;
            }
        }
        fail("ParseError", "unknown symbol '" + name + "' in relation");
    };
    S value = parse_expression(expr, ops);
    // apply to Phi_0 and test vanishing
    for (const auto& [d, m] : value.terms())
        for (int i = 0; i < rank; ++i)
            if (!m(i, 0).is_zero()) return false;
    return true;
}

FinitenessReport finiteness_report(const SmallShift& s, const Target& t) {
    auto products = small_products(s, t);
    FinitenessReport rep;
    rep.cutoff = s.A_com[0].cutoff();
    rep.all_stable = true;
    for (int alpha = 0; alpha < t.rank; ++alpha)
        for (int beta = alpha; beta < t.rank; ++beta) {
            FinitenessEntry e;
            e.alpha = alpha;
            e.beta = beta;
            for (const auto& [d, m] : products[alpha].terms()) {
                bool nonzero = false;
                for (int i = 0; i < t.rank; ++i)
                    if (!m(i, beta).is_zero()) nonzero = true;
                if (nonzero) e.max_degree = std::max(e.max_degree, d.total());
            }
            e.stable = e.max_degree <= rep.cutoff / 2;
            rep.all_stable = rep.all_stable && e.stable;
            rep.max_degree = std::max(rep.max_degree, e.max_degree);
            rep.entries.push_back(e);
        }
    return rep;
}

Matrix<Rational> specialize(const RationalMatrixSeries& s, const std::vector<Rational>& qs) {
    require(static_cast<int>(qs.size()) == s.rank(), "DimensionMismatch",
            "one value per Novikov variable expected");
    Matrix<Rational> acc = s.zero_proto();
    for (const auto& [d, m] : s.terms()) {
        Rational c(1);
        for (int i = 0; i < s.rank(); ++i) c *= qs[i].pow(d[i]);
        acc += m.scaled(c);
    }
    return acc;
}

SemisimplicityReport semisimplicity_probe(const SmallShift& s,
                                          const std::vector<std::vector<Rational>>& q_values) {
    SemisimplicityReport rep;
    rep.cutoff = s.A_com[0].cutoff();
    for (const auto& qs : q_values) {
        Matrix<Rational> combo;
        for (size_t i = 0; i < s.A_com.size(); ++i) {
            SemisimplicityEntry e;
            e.specialization = qs;
            e.picard_index = static_cast<int>(i);
            Matrix<Rational> Ai = specialize(s.A_com[i], qs);
            combo = i == 0 ? Ai : combo + Ai.scaled(Rational(static_cast<long>(i) + 1));
            e.charpoly = charpoly(Ai);
            e.squarefree = is_squarefree(e.charpoly);
            rep.entries.push_back(std::move(e));
        }
        // A single operator of a commuting family may have repeated
        // eigenvalues even when the family is jointly separating; the
        // ring-level witness is the combination sum_i i A_{i,com}.
        SemisimplicityEntry e;
        e.specialization = qs;
        e.picard_index = -1;
        e.charpoly = charpoly(combo);
        e.squarefree = is_squarefree(e.charpoly);
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

}  // namespace qk
