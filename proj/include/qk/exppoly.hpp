#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qk/matrix.hpp"
#include "qk/qrat.hpp"
#include "qk/rational.hpp"

namespace qk {

using Mono = std::vector<int>;       // exponents of t^1..t^N
using Freq = std::vector<Rational>;  // exponential frequency vector

namespace detail {
template <class C>
C coeff_from_rational(const Rational& r) {
    return C(r);
}
template <>
inline Rational coeff_from_rational<Rational>(const Rational& r) {
    return r;
}
}  // namespace detail

// Exponential polynomial sum_lambda e^{lambda . t} p_lambda(t) in the
// coordinates t^1..t^N, with coefficients in an exact ring C (Rational for
// structure constants, QRat when entries also carry q). Frequencies are
// exact rationals; no zero polynomials or zero coefficients are stored.
// Values with different variable counts interoperate by zero-padding.
template <class C>
class ExpPolyT {
public:
    using Poly = std::map<Mono, C>;

    ExpPolyT() : nvar_(0) {}
    ExpPolyT(long c) : nvar_(0) { add_term(Freq{}, Mono{}, detail::coeff_from_rational<C>(Rational(c))); }
    static ExpPolyT zero(int nvar) {
        ExpPolyT f;
        f.nvar_ = nvar;
        return f;
    }

    static ExpPolyT constant(int nvar, const C& c) {
        ExpPolyT f = ExpPolyT::zero(nvar);
        f.add_term(Freq(nvar, Rational(0)), Mono(nvar, 0), c);
        return f;
    }
    static ExpPolyT from_rational(int nvar, const Rational& r) {
        return constant(nvar, detail::coeff_from_rational<C>(r));
    }
    // t^{idx} (0-based index into t^1..t^N)
    static ExpPolyT variable(int nvar, int idx) {
        ExpPolyT f = ExpPolyT::zero(nvar);
        Mono m(nvar, 0);
        m[idx] = 1;
        f.add_term(Freq(nvar, Rational(0)), m, detail::coeff_from_rational<C>(Rational(1)));
        return f;
    }
    // e^{freq . t}
    static ExpPolyT exponential(int nvar, Freq freq) {
        ExpPolyT f = ExpPolyT::zero(nvar);
        freq.resize(nvar, Rational(0));
        f.add_term(freq, Mono(nvar, 0), detail::coeff_from_rational<C>(Rational(1)));
        return f;
    }

    int nvar() const { return nvar_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Freq, Poly>& terms() const { return terms_; }

    bool is_constant() const {
        if (terms_.empty()) return true;
        if (terms_.size() != 1) return false;
        const auto& [f, p] = *terms_.begin();
        if (!std::all_of(f.begin(), f.end(), [](const Rational& x) { return x.is_zero(); }))
            return false;
        return p.size() == 1 &&
               std::all_of(p.begin()->first.begin(), p.begin()->first.end(),
                           [](int e) { return e == 0; });
    }

    void add_term(Freq f, Mono m, const C& c) {
        if (c.is_zero()) return;
        f.resize(std::max<size_t>(nvar_, f.size()), Rational(0));
        m.resize(std::max<size_t>(nvar_, m.size()), 0);
        if (static_cast<int>(f.size()) > nvar_) promote(static_cast<int>(f.size()));
        auto& poly = terms_[f];
        auto it = poly.find(m);
        if (it == poly.end()) {
            poly.emplace(std::move(m), c);
        } else {
            it->second += c;
            if (it->second.is_zero()) {
                poly.erase(it);
                if (poly.empty()) terms_.erase(f);
            }
        }
    }

    void promote(int nvar) {
        if (nvar <= nvar_) return;
        std::map<Freq, Poly> old;
        old.swap(terms_);
        nvar_ = nvar;
        for (auto& [f, poly] : old) {
            Freq f2 = f;
            f2.resize(nvar, Rational(0));
            for (auto& [m, c] : poly) {
                Mono m2 = m;
                m2.resize(nvar, 0);
                terms_[f2][m2] = c;
            }
        }
    }

    ExpPolyT promoted(int nvar) const {
        ExpPolyT r = *this;
        r.promote(nvar);
        return r;
    }

    ExpPolyT operator-() const {
        ExpPolyT r = *this;
        for (auto& [f, poly] : r.terms_)
            for (auto& [m, c] : poly) c = -c;
        return r;
    }

    ExpPolyT& operator+=(const ExpPolyT& o) {
        if (o.nvar_ > nvar_) promote(o.nvar_);
        for (const auto& [f, poly] : o.terms_)
            for (const auto& [m, c] : poly) add_term(f, m, c);
        return *this;
    }
    ExpPolyT& operator-=(const ExpPolyT& o) {
        if (o.nvar_ > nvar_) promote(o.nvar_);
        for (const auto& [f, poly] : o.terms_)
            for (const auto& [m, c] : poly) add_term(f, m, -c);
        return *this;
    }
    friend ExpPolyT operator+(ExpPolyT a, const ExpPolyT& b) { return a += b; }
    friend ExpPolyT operator-(ExpPolyT a, const ExpPolyT& b) { return a -= b; }

    friend ExpPolyT operator*(const ExpPolyT& a, const ExpPolyT& b) {
        int nv = std::max(a.nvar_, b.nvar_);
        ExpPolyT av = a.promoted(nv), bv = b.promoted(nv);
        ExpPolyT r = ExpPolyT::zero(nv);
        for (const auto& [fa, pa] : av.terms_)
            for (const auto& [fb, pb] : bv.terms_) {
                Freq f(nv);
                for (int i = 0; i < nv; ++i) f[i] = fa[i] + fb[i];
                for (const auto& [ma, ca] : pa)
                    for (const auto& [mb, cb] : pb) {
                        Mono m(nv);
                        for (int i = 0; i < nv; ++i) m[i] = ma[i] + mb[i];
                        r.add_term(f, m, ca * cb);
                    }
            }
        return r;
    }
    ExpPolyT& operator*=(const ExpPolyT& o) { return *this = *this * o; }

    friend bool operator==(const ExpPolyT& a, const ExpPolyT& b) {
        int nv = std::max(a.nvar_, b.nvar_);
        return a.promoted(nv).terms_ == b.promoted(nv).terms_;
    }
    friend bool operator!=(const ExpPolyT& a, const ExpPolyT& b) { return !(a == b); }

    ExpPolyT scaled(const Rational& r) const {
        if (r.is_zero()) return ExpPolyT::zero(nvar_);
        ExpPolyT out = *this;
        C f = detail::coeff_from_rational<C>(r);
        for (auto& [fr, poly] : out.terms_)
            for (auto& [m, c] : poly) c = c * f;
        return out;
    }
    ExpPolyT coeff_scaled(const C& k) const {
        ExpPolyT out = ExpPolyT::zero(nvar_);
        for (const auto& [fr, poly] : terms_)
            for (const auto& [m, c] : poly) out.add_term(fr, m, c * k);
        return out;
    }

    // Exact Leibniz rule in direction t^{alpha} (0-based).
    ExpPolyT differentiated(int alpha) const {
        if (alpha >= nvar_) return ExpPolyT::zero(nvar_);
        ExpPolyT r = ExpPolyT::zero(nvar_);
        for (const auto& [f, poly] : terms_)
            for (const auto& [m, c] : poly) {
                if (!f[alpha].is_zero()) r.add_term(f, m, c * detail::coeff_from_rational<C>(f[alpha]));
                if (m[alpha] > 0) {
                    Mono m2 = m;
                    --m2[alpha];
                    r.add_term(f, m2, c * detail::coeff_from_rational<C>(Rational(m[alpha])));
                }
            }
        return r;
    }

    // Substitute t^{alpha} = 0.
    ExpPolyT eval_zero(int alpha) const {
        if (alpha >= nvar_) return *this;
        ExpPolyT r = ExpPolyT::zero(nvar_);
        for (const auto& [f, poly] : terms_) {
            Freq f2 = f;
            f2[alpha] = Rational(0);
            for (const auto& [m, c] : poly)
                if (m[alpha] == 0) r.add_term(f2, m, c);
        }
        return r;
    }

    C eval_all_zero() const {
        C acc = zero_coeff();
        for (const auto& [f, poly] : terms_) {
            auto it = poly.find(Mono(nvar_, 0));
            if (it != poly.end()) acc += it->second;
        }
        return acc;
    }

    // Linear substitution t_old = S t_new (S is nvar_old x nvar_new).
    ExpPolyT substituted(const Matrix<Rational>& S) const {
        int nout = S.cols();
        require(S.rows() == nvar_, "DimensionMismatch", "coordinate substitution shape");
        ExpPolyT r = ExpPolyT::zero(nout);
        for (const auto& [f, poly] : terms_) {
            Freq f2(nout, Rational(0));
            for (int b = 0; b < nout; ++b)
                for (int a = 0; a < nvar_; ++a) f2[b] += f[a] * S(a, b);
            for (const auto& [m, c] : poly) {
                ExpPolyT term = ExpPolyT::zero(nout);
                term.add_term(f2, Mono(nout, 0), c);
                for (int a = 0; a < nvar_; ++a) {
                    if (m[a] == 0) continue;
                    ExpPolyT lin = ExpPolyT::zero(nout);
                    for (int b = 0; b < nout; ++b)
                        if (!S(a, b).is_zero())
                            lin += ExpPolyT::from_rational(nout, S(a, b)) * ExpPolyT::variable(nout, b);
                    for (int e = 0; e < m[a]; ++e) term *= lin;
                }
                r += term;
            }
        }
        return r;
    }

    // View as a polynomial in the active variable: (freq, power) -> the
    // coefficient with the active slot cleared.
    std::map<std::pair<Rational, int>, ExpPolyT> decompose(int active) const {
        std::map<std::pair<Rational, int>, ExpPolyT> out;
        if (active >= nvar_) {
            if (!is_zero()) out.emplace(std::make_pair(Rational(0), 0), *this);
            return out;
        }
        for (const auto& [f, poly] : terms_) {
            Freq f2 = f;
            f2[active] = Rational(0);
            for (const auto& [m, c] : poly) {
                Mono m2 = m;
                m2[active] = 0;
                auto key = std::make_pair(f[active], m[active]);
                auto it = out.find(key);
                if (it == out.end()) it = out.emplace(key, ExpPolyT::zero(nvar_)).first;
                it->second.add_term(f2, m2, c);
            }
        }
        return out;
    }

    std::set<Rational> frequencies(int active) const {
        std::set<Rational> s;
        if (active >= nvar_) {
            if (!is_zero()) s.insert(Rational(0));
            return s;
        }
        for (const auto& [f, poly] : terms_) s.insert(f[active]);
        return s;
    }
    int max_degree(int active) const {
        int d = 0;
        if (active >= nvar_) return 0;
        for (const auto& [f, poly] : terms_)
            for (const auto& [m, c] : poly) d = std::max(d, m[active]);
        return d;
    }
    bool depends_on(int alpha) const {
        if (alpha >= nvar_) return false;
        for (const auto& [f, poly] : terms_) {
            if (!f[alpha].is_zero()) return true;
            for (const auto& [m, c] : poly)
                if (m[alpha] > 0) return true;
        }
        return false;
    }
    bool integral_frequencies() const {
        for (const auto& [f, poly] : terms_)
            for (const auto& x : f)
                if (!x.is_integer()) return false;
        return true;
    }

    template <class F>
    void for_each_coeff(F f) {
        for (auto& [fr, poly] : terms_)
            for (auto& [m, c] : poly) f(c);
    }

    C zero_coeff() const {
        for (const auto& [f, poly] : terms_)
            for (const auto& [m, c] : poly) {
                C z = c;
                z -= c;
                return z;
            }
        return C();
    }

    std::string str(const std::vector<std::string>& names = {}) const;

private:
    int nvar_;
    std::map<Freq, Poly> terms_;
};

using ExpPoly = ExpPolyT<Rational>;
using QRatExpPoly = ExpPolyT<QRat>;

namespace detail {
template <>
inline ExpPoly coeff_from_rational<ExpPoly>(const Rational& r) {
    return ExpPoly::from_rational(0, r);
}
template <>
inline QRatExpPoly coeff_from_rational<QRatExpPoly>(const Rational& r) {
    return QRatExpPoly::from_rational(0, r);
}
}  // namespace detail

// Rational scaling as a free function usable in generic matrix code.
template <class C>
ExpPolyT<C> operator*(const ExpPolyT<C>& f, const Rational& r) {
    return f.scaled(r);
}

// Ring inverses for Gauss-Jordan pivots; only constants are invertible in
// the exponential-polynomial ring.
inline Rational ring_inverse_constant(const Rational& x) { return x.inverse(); }
inline QRat ring_inverse_constant(const QRat& x) { return x.inverse(); }
inline ExpPoly ring_inverse_constant(const ExpPoly& x) {
    require(x.is_constant(), "SingularLeadingTerm", "pivot is not a constant exponential polynomial");
    return ExpPoly::from_rational(x.nvar(), x.eval_all_zero().inverse());
}
inline QRatExpPoly ring_inverse_constant(const QRatExpPoly& x) {
    require(x.is_constant(), "SingularLeadingTerm", "pivot is not a constant exponential polynomial");
    return QRatExpPoly::constant(x.nvar(), x.eval_all_zero().inverse());
}

// --- q-aware helpers on QRat-coefficient values ---

inline QRatExpPoly embed_qrat(const ExpPoly& f) {
    QRatExpPoly r = QRatExpPoly::zero(f.nvar());
    for (const auto& [fr, poly] : f.terms())
        for (const auto& [m, c] : poly) r.add_term(fr, m, QRat(c));
    return r;
}

inline QRatExpPoly q_power_scaled(const QRatExpPoly& f, long e) {
    QRatExpPoly r = QRatExpPoly::zero(f.nvar());
    for (const auto& [fr, poly] : f.terms())
        for (const auto& [m, c] : poly) r.add_term(fr, m, c.q_shifted(e));
    return r;
}

inline QRatExpPoly bar_q(const QRatExpPoly& f) {
    QRatExpPoly r = QRatExpPoly::zero(f.nvar());
    for (const auto& [fr, poly] : f.terms())
        for (const auto& [m, c] : poly) r.add_term(fr, m, c.bar());
    return r;
}

// Exact q-cancellation: every coefficient must be constant in q.
inline ExpPoly strip_q(const QRatExpPoly& f) {
    ExpPoly r = ExpPoly::zero(f.nvar());
    for (const auto& [fr, poly] : f.terms())
        for (const auto& [m, c] : poly) r.add_term(fr, m, c.as_constant());
    return r;
}

std::string render_exppoly(const ExpPoly& f, const std::vector<std::string>& names);
std::string render_exppoly(const QRatExpPoly& f, const std::vector<std::string>& names);

template <>
inline std::string ExpPolyT<Rational>::str(const std::vector<std::string>& names) const {
    return render_exppoly(*this, names);
}
template <>
inline std::string ExpPolyT<QRat>::str(const std::vector<std::string>& names) const {
    return render_exppoly(*this, names);
}

}  // namespace qk
