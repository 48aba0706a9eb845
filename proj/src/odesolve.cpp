#include "qk/odesolve.hpp"

#include <map>
#include <set>

#include "qk/polyroots.hpp"

namespace qk {

bool solve_rational_system(const Matrix<Rational>& A, std::vector<ExpPoly> rhs,
                           std::vector<ExpPoly>& solution) {
    int rows = A.rows(), cols = A.cols();
    Matrix<Rational> a = A;
    std::vector<int> pivot_col(rows, -1);
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int i = rank; i < rows; ++i)
            if (!a(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != rank) {
            for (int j = 0; j < cols; ++j) std::swap(a(piv, j), a(rank, j));
            std::swap(rhs[piv], rhs[rank]);
        }
        Rational pinv = a(rank, col).inverse();
        for (int j = col; j < cols; ++j) a(rank, j) *= pinv;
        rhs[rank] = rhs[rank].scaled(pinv);
        for (int i = 0; i < rows; ++i) {
            if (i == rank || a(i, col).is_zero()) continue;
            Rational f = a(i, col);
            for (int j = col; j < cols; ++j) a(i, j) -= f * a(rank, j);
            rhs[i] -= rhs[rank].scaled(f);
        }
        pivot_col[rank] = col;
        ++rank;
    }
    for (int i = rank; i < rows; ++i)
        if (!rhs[i].is_zero()) return false;
    solution.assign(cols, ExpPoly());
    for (int i = 0; i < rank; ++i) solution[pivot_col[i]] = rhs[i];
    return true;
}

namespace {

struct ModeData {
    Rational freq;
    // Forward recursion y_{k+1} = ((L - freq) y_k + B_k) / (k+1): y_k is the
    // affine function C_k y_0 + c_k of the free initial vector y_0.
    std::vector<Matrix<Rational>> C;
    std::vector<std::vector<ExpPoly>> c;
};

std::vector<ExpPoly> attempt(const OdeProblem& p, const std::set<Rational>& freqs, int degree_cap,
                             bool& ok) {
    int n = p.dimension;
    const int active = p.active;

    // Split B into per-frequency polynomial blocks in the active variable.
    std::map<Rational, std::vector<std::vector<ExpPoly>>> bparts;  // freq -> coeff[k][entry]
    for (const Rational& f : freqs) bparts[f].assign(degree_cap + 2, std::vector<ExpPoly>(n));
    for (int e = 0; e < n; ++e)
        for (const auto& [key, val] : p.B[e].decompose(active)) {
            auto it = bparts.find(key.first);
            require(it != bparts.end(), "InternalError", "B frequency missing from ansatz");
            require(key.second <= degree_cap, "InternalError", "B degree above ansatz cap");
            it->second[key.second][e] = val;
        }

    std::vector<ModeData> modes;
    for (const Rational& f : freqs) {
        ModeData md;
        md.freq = f;
        Matrix<Rational> M = p.L;
        for (int i = 0; i < n; ++i) M(i, i) -= f;
        md.C.push_back(Matrix<Rational>::identity(n));
        md.c.push_back(std::vector<ExpPoly>(n));
        const auto& bp = bparts[f];
        for (int k = 0; k < degree_cap; ++k) {
            Rational inv = Rational(k + 1).inverse();
            md.C.push_back((M * md.C.back()).scaled(inv));
            std::vector<ExpPoly> next(n);
            std::vector<ExpPoly> mc(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (!M(i, j).is_zero()) mc[i] += md.c.back()[j].scaled(M(i, j));
            for (int i = 0; i < n; ++i) next[i] = (mc[i] + bp[k][i]).scaled(inv);
            md.c.push_back(std::move(next));
        }
        modes.push_back(std::move(md));
    }

    // Stack: per mode the tail constraint M(C_D y_0 + c_D) + B_D = 0, plus the
    // shared initial condition sum_f y_{f,0} = Y0.
    int nmodes = static_cast<int>(modes.size());
    int cols = nmodes * n;
    int rows = nmodes * n + n;
    Matrix<Rational> A(rows, cols);
    std::vector<ExpPoly> rhs(rows);
    for (int mi = 0; mi < nmodes; ++mi) {
        const ModeData& md = modes[mi];
        Matrix<Rational> M = p.L;
        for (int i = 0; i < n; ++i) M(i, i) -= md.freq;
        Matrix<Rational> MC = M * md.C[degree_cap];
        const auto& bp = bparts[md.freq];
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) A(mi * n + i, mi * n + j) = MC(i, j);
            ExpPoly r;
            for (int j = 0; j < n; ++j)
                if (!M(i, j).is_zero()) r += md.c[degree_cap][j].scaled(M(i, j));
            rhs[mi * n + i] = -(r + bp[degree_cap][i]);
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int mi = 0; mi < nmodes; ++mi) A(nmodes * n + i, mi * n + i) = Rational(1);
        rhs[nmodes * n + i] = p.Y0[i];
    }

    std::vector<ExpPoly> x;
    if (!solve_rational_system(A, std::move(rhs), x)) {
        ok = false;
        return {};
    }

    // Assemble Y = sum_f e^{f t} sum_k t^k (C_k y_{f,0} + c_k).
    int nvar = 0;
    for (const auto& e : p.B) nvar = std::max(nvar, e.nvar());
    for (const auto& e : p.Y0) nvar = std::max(nvar, e.nvar());
    for (const auto& e : x) nvar = std::max(nvar, e.nvar());
    nvar = std::max(nvar, active + 1);

    std::vector<ExpPoly> Y(n, ExpPoly::zero(nvar));
    for (int mi = 0; mi < nmodes; ++mi) {
        const ModeData& md = modes[mi];
        Freq fr(nvar, Rational(0));
        fr[active] = md.freq;
        for (int k = 0; k <= degree_cap; ++k) {
            Mono mono(nvar, 0);
            mono[active] = k;
            ExpPoly tk = ExpPoly::zero(nvar);
            tk.add_term(fr, mono, Rational(1));
            for (int i = 0; i < n; ++i) {
                ExpPoly coeff = md.c[k][i];
                for (int j = 0; j < n; ++j)
                    if (!md.C[k](i, j).is_zero()) coeff += x[mi * n + j].scaled(md.C[k](i, j));
                if (!coeff.is_zero()) Y[i] += tk * coeff;
            }
        }
    }
    ok = true;
    return Y;
}

}  // namespace

std::vector<ExpPoly> solve_linear_ode(const OdeProblem& p) {
    int n = p.dimension;
    require(p.L.rows() == n && p.L.cols() == n && static_cast<int>(p.B.size()) == n &&
                static_cast<int>(p.Y0.size()) == n,
            "DimensionMismatch", "ODE problem shapes disagree");
    for (const auto& e : p.Y0)
        require(!e.depends_on(p.active), "DimensionMismatch",
                "initial condition depends on the active variable");

    std::set<Rational> freqs;
    int maxdeg = 0;
    for (const auto& e : p.B) {
        auto fs = e.frequencies(p.active);
        freqs.insert(fs.begin(), fs.end());
        maxdeg = std::max(maxdeg, e.max_degree(p.active));
    }
    for (const auto& ev : rational_eigenvalues_of_matrix(p.L)) freqs.insert(ev);
    if (freqs.empty()) freqs.insert(Rational(0));

    for (int escalation = 0; escalation < 2; ++escalation) {
        int cap = maxdeg + n * (escalation + 1);
        bool ok = false;
        std::vector<ExpPoly> Y = attempt(p, freqs, cap, ok);
        if (!ok) continue;
        // Residual check dY/dt - L Y - B = 0 and Y(0) = Y0, always run.
        for (int i = 0; i < n; ++i) {
            ExpPoly resid = Y[i].differentiated(p.active) - p.B[i];
            for (int j = 0; j < n; ++j)
                if (!p.L(i, j).is_zero()) resid -= Y[j].scaled(p.L(i, j));
            require(resid.is_zero(), "ResidualNonzero", "ODE solution residual is nonzero");
            require(Y[i].eval_zero(p.active) == p.Y0[i].promoted(Y[i].nvar()), "ResidualNonzero",
                    "ODE solution misses the initial condition");
        }
        return Y;
    }
    fail("AnsatzInsufficient",
         "exponential-polynomial ansatz inconsistent after degree escalation; "
         "irrational eigenvalue resonance suspected");
}

}  // namespace qk
