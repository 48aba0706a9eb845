#pragma once

#include <map>
#include <vector>

#include "qk/exppoly.hpp"
#include "qk/matrix.hpp"
#include "qk/qrat.hpp"

namespace qk {

// Curve degree in the nef-coordinate cone: d = (d_1..d_r), graded by total
// degree (the ample class sum p_i).
struct Degree {
    std::vector<int> d;

    Degree() = default;
    explicit Degree(std::vector<int> v) : d(std::move(v)) {}
    static Degree zero(int r) { return Degree(std::vector<int>(r, 0)); }
    static Degree unit(int r, int i) {
        Degree x = zero(r);
        x.d[i] = 1;
        return x;
    }

    int rank() const { return static_cast<int>(d.size()); }
    int total() const {
        int t = 0;
        for (int x : d) t += x;
        return t;
    }
    int operator[](int i) const { return d[i]; }
    bool is_zero() const { return total() == 0; }

    friend Degree operator+(const Degree& a, const Degree& b) {
        Degree r = a;
        for (size_t i = 0; i < r.d.size(); ++i) r.d[i] += b.d[i];
        return r;
    }
    // Componentwise difference; valid only when b <= a componentwise.
    friend Degree operator-(const Degree& a, const Degree& b) {
        Degree r = a;
        for (size_t i = 0; i < r.d.size(); ++i) r.d[i] -= b.d[i];
        return r;
    }
    bool contains(const Degree& b) const {
        for (size_t i = 0; i < d.size(); ++i)
            if (b.d[i] > d[i]) return false;
        return true;
    }

    // Graded lexicographic: by total degree, ties lexicographically.
    friend bool operator<(const Degree& a, const Degree& b) {
        int ta = a.total(), tb = b.total();
        if (ta != tb) return ta < tb;
        return a.d < b.d;
    }
    friend bool operator==(const Degree& a, const Degree& b) { return a.d == b.d; }
    friend bool operator!=(const Degree& a, const Degree& b) { return !(a == b); }
};

// All degrees with total <= cutoff, in graded-lex order.
std::vector<Degree> all_degrees(int r, int cutoff);
// All degrees d' <= d componentwise (the divisor lattice of d), graded-lex.
std::vector<Degree> degrees_below(const Degree& d);

// Multivariate power series in Q_1..Q_r truncated at a total-degree cutoff,
// coefficients in a generic exact ring C. Arithmetic silently truncates
// above the cutoff; no zero coefficients are stored.
template <class C>
class NovikovSeries {
public:
    NovikovSeries() : r_(0), cutoff_(0) {}
    NovikovSeries(int r, int cutoff, C zero = C())
        : r_(r), cutoff_(cutoff), zero_(std::move(zero)) {}

    int rank() const { return r_; }
    int cutoff() const { return cutoff_; }
    const C& zero_proto() const { return zero_; }
    const std::map<Degree, C>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    const C& at(const Degree& d) const {
        auto it = terms_.find(d);
        return it == terms_.end() ? zero_ : it->second;
    }
    void set(const Degree& d, const C& c) {
        require(d.rank() == r_, "CutoffMismatch", "degree rank mismatch");
        if (d.total() > cutoff_) return;
        if (c.is_zero()) {
            terms_.erase(d);
        } else {
            auto& slot = terms_[d];
            slot = c;
            normalize_value(slot);
        }
    }
    void add_to(const Degree& d, const C& c) {
        if (d.total() > cutoff_ || c.is_zero()) return;
        auto it = terms_.find(d);
        if (it == terms_.end()) {
            auto& slot = terms_[d];
            slot = c;
            normalize_value(slot);
        } else {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
            else
                normalize_value(it->second);
        }
    }

    NovikovSeries operator-() const {
        NovikovSeries r = *this;
        for (auto& [d, c] : r.terms_) c = -c;
        return r;
    }
    NovikovSeries& operator+=(const NovikovSeries& o) {
        check(o);
        for (const auto& [d, c] : o.terms_) add_to(d, c);
        return *this;
    }
    NovikovSeries& operator-=(const NovikovSeries& o) {
        check(o);
        for (const auto& [d, c] : o.terms_) add_to(d, -c);
        return *this;
    }
    friend NovikovSeries operator+(NovikovSeries a, const NovikovSeries& b) { return a += b; }
    friend NovikovSeries operator-(NovikovSeries a, const NovikovSeries& b) { return a -= b; }

    friend NovikovSeries operator*(const NovikovSeries& a, const NovikovSeries& b) {
        a.check(b);
        NovikovSeries r(a.r_, a.cutoff_, a.zero_);
        // raw accumulation; one normalization pass per stored degree
        for (const auto& [da, ca] : a.terms_)
            for (const auto& [db, cb] : b.terms_) {
                if (da.total() + db.total() > a.cutoff_) continue;
                Degree d = da + db;
                auto it = r.terms_.find(d);
                if (it == r.terms_.end())
                    r.terms_.emplace(std::move(d), ca * cb);
                else
                    it->second += ca * cb;
            }
        for (auto it = r.terms_.begin(); it != r.terms_.end();) {
            if (it->second.is_zero()) {
                it = r.terms_.erase(it);
            } else {
                normalize_value(it->second);
                ++it;
            }
        }
        return r;
    }
    NovikovSeries& operator*=(const NovikovSeries& o) { return *this = *this * o; }

    friend bool operator==(const NovikovSeries& a, const NovikovSeries& b) {
        return a.r_ == b.r_ && a.cutoff_ == b.cutoff_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const NovikovSeries& a, const NovikovSeries& b) { return !(a == b); }

    template <class S>
    NovikovSeries scaled(const S& s) const {
        NovikovSeries r(r_, cutoff_, zero_);
        for (const auto& [d, c] : terms_) {
            if constexpr (requires { c.scaled(s); })
                r.add_to(d, c.scaled(s));
            else
                r.add_to(d, c * s);
        }
        return r;
    }

    // Entry-wise map into another coefficient ring.
    template <class F>
    auto map(F&& f) const {
        using U = decltype(f(zero_));
        NovikovSeries<U> r(r_, cutoff_, f(zero_));
        for (const auto& [d, c] : terms_) r.set(d, f(c));
        return r;
    }

    NovikovSeries truncated(int new_cutoff) const {
        NovikovSeries r(r_, new_cutoff, zero_);
        for (const auto& [d, c] : terms_)
            if (d.total() <= new_cutoff) r.set(d, c);
        return r;
    }

private:
    void check(const NovikovSeries& o) const {
        require(r_ == o.r_ && cutoff_ == o.cutoff_, "CutoffMismatch",
                "Novikov series rank/cutoff mismatch");
    }

    int r_ = 0;
    int cutoff_ = 0;
    C zero_;
    std::map<Degree, C> terms_;
};

// --- normalization at storage boundaries: QRat-bearing coefficients defer
// factor cancellation until a value comes to rest in a series ---
template <class C>
inline void normalize_value(C&) {}
inline void normalize_value(QRat& x) { x.normalize(); }
template <class T>
inline void normalize_value(Matrix<T>& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) normalize_value(m(i, j));
}
inline void normalize_value(QRatExpPoly& f) {
    f.for_each_coeff([](QRat& c) { c.normalize(); });
}

// --- coefficient rings that carry q: multiplication by q^e ---
inline void mul_q_power(QRat& c, long e) { c = c.q_shifted(e); }
inline void mul_q_power(QLaurent& c, long e) { c = c.shifted(e); }
inline void mul_q_power(QRatExpPoly& c, long e) { c = q_power_scaled(c, e); }
template <class T>
void mul_q_power(Matrix<T>& m, long e) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) mul_q_power(m(i, j), e);
}

// Q_i -> q^{power} Q_i: the coefficient at degree d picks up q^{power*d_i}.
template <class C>
NovikovSeries<C> qshift(const NovikovSeries<C>& a, int i, long power) {
    NovikovSeries<C> r(a.rank(), a.cutoff(), a.zero_proto());
    for (const auto& [d, c] : a.terms()) {
        C v = c;
        mul_q_power(v, power * d[i]);
        r.set(d, v);
    }
    return r;
}

// Graded inversion N_d = M_0^{-1}(delta_{d,0} - sum_{0<d'<=d} M_{d'} N_{d-d'});
// SingularLeadingTerm if the degree-zero term is not invertible.
template <class T, class MatInv>
NovikovSeries<Matrix<T>> invert_matrix_series_with(const NovikovSeries<Matrix<T>>& m,
                                                   MatInv invert_leading) {
    const Matrix<T>& m0 = m.at(Degree::zero(m.rank()));
    Matrix<T> m0inv = invert_leading(m0);
    NovikovSeries<Matrix<T>> inv(m.rank(), m.cutoff(), m.zero_proto());
    for (const Degree& d : all_degrees(m.rank(), m.cutoff())) {
        if (d.is_zero()) {
            inv.set(d, m0inv);
            continue;
        }
        Matrix<T> acc = m.zero_proto();
        for (const auto& [dp, mp] : m.terms()) {
            if (dp.is_zero() || !d.contains(dp)) continue;
            const Matrix<T>& lower = inv.at(d - dp);
            if (!lower.is_zero()) acc += mp * lower;
        }
        inv.set(d, -(m0inv * acc));
    }
    return inv;
}

template <class T, class InvFn>
NovikovSeries<Matrix<T>> invert_matrix_series(const NovikovSeries<Matrix<T>>& m,
                                              InvFn ring_inverse) {
    return invert_matrix_series_with(
        m, [&](const Matrix<T>& m0) { return matrix_inverse(m0, ring_inverse); });
}

inline QRat qrat_ring_inverse(const QRat& x) { return x.inverse(); }

}  // namespace qk
