#pragma once

#include <map>
#include <string>
#include <vector>

#include "qk/rational.hpp"

namespace qk {

// Laurent polynomial in the formal variable q with Rational coefficients.
// No zero coefficients are stored.
class QLaurent {
public:
    QLaurent() = default;
    QLaurent(long c) { set(0, Rational(c)); }
    explicit QLaurent(const Rational& c) { set(0, c); }

    // c * q^e
    static QLaurent monomial(const Rational& c, long e) {
        QLaurent p;
        p.set(e, c);
        return p;
    }
    static QLaurent q(long e = 1) { return monomial(Rational(1), e); }
    // 1 - q^m
    static QLaurent one_minus_q(long m);

    bool is_zero() const { return coeffs_.empty(); }
    bool is_constant() const {
        return coeffs_.empty() || (coeffs_.size() == 1 && coeffs_.begin()->first == 0);
    }
    Rational constant_term() const { return coeff(0); }
    bool is_polynomial() const { return coeffs_.empty() || min_exp() >= 0; }

    long min_exp() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    long max_exp() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

    Rational coeff(long e) const {
        auto it = coeffs_.find(e);
        return it == coeffs_.end() ? Rational() : it->second;
    }
    void set(long e, const Rational& c) {
        if (c.is_zero())
            coeffs_.erase(e);
        else
            coeffs_[e] = c;
    }
    void add_to(long e, const Rational& c) {
        auto it = coeffs_.find(e);
        if (it == coeffs_.end()) {
            if (!c.is_zero()) coeffs_[e] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    const std::map<long, Rational>& terms() const { return coeffs_; }

    QLaurent operator-() const;
    QLaurent& operator+=(const QLaurent& o);
    QLaurent& operator-=(const QLaurent& o);
    friend QLaurent operator+(QLaurent a, const QLaurent& b) { return a += b; }
    friend QLaurent operator-(QLaurent a, const QLaurent& b) { return a -= b; }
    friend QLaurent operator*(const QLaurent& a, const QLaurent& b);
    QLaurent& operator*=(const QLaurent& o) { return *this = *this * o; }
    friend bool operator==(const QLaurent& a, const QLaurent& b) { return a.coeffs_ == b.coeffs_; }

    QLaurent scaled(const Rational& c) const;
    // multiply by q^e
    QLaurent shifted(long e) const;
    // substitute q -> q^{-1}
    QLaurent bar() const;
    QLaurent pow(long e) const;

    // Exact division; fails with NotDivisible if the remainder is nonzero.
    QLaurent divided_by(const QLaurent& d) const;
    bool divisible_by(const QLaurent& d) const;
    // Division-free test for the factors the denominator carries.
    bool divisible_by_one_minus_qm(long m) const;

    // Exact evaluation at a rational value (EvalAtPole if value = 0 meets a
    // negative exponent).
    Rational eval(const Rational& value) const;

    std::string str(const std::string& var = "q") const;

private:
    std::map<long, Rational> coeffs_;
};

// Finite expansion sum_k c_k (1-q)^k of a polynomial in q.
// Trailing coefficient is nonzero (or the list is empty).
struct OneMinusQExpansion {
    std::vector<Rational> coeffs;

    QLaurent to_polynomial() const;
};

// Exact rewrite of a true polynomial in powers of (1-q).
// Fails with NotPolynomialInQ on negative exponents.
OneMinusQExpansion expand_one_minus_q(const QLaurent& p);

}  // namespace qk
