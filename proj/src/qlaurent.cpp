#include "qk/qlaurent.hpp"

#include <sstream>

namespace qk {

QLaurent QLaurent::one_minus_q(long m) {
    QLaurent p(1);
    p.add_to(m, Rational(-1));
    return p;
}

QLaurent QLaurent::operator-() const {
    QLaurent r;
    for (const auto& [e, c] : coeffs_) r.coeffs_[e] = -c;
    return r;
}

QLaurent& QLaurent::operator+=(const QLaurent& o) {
    for (const auto& [e, c] : o.coeffs_) add_to(e, c);
    return *this;
}

QLaurent& QLaurent::operator-=(const QLaurent& o) {
    for (const auto& [e, c] : o.coeffs_) add_to(e, -c);
    return *this;
}

namespace {

// Dense integer image of a polynomial: numerators scaled by the common
// denominator. Keeps the convolution inside mpz arithmetic (no gcds).
struct DenseZ {
    long lo = 0;
    mpz_class den = 1;
    std::vector<mpz_class> c;
};

DenseZ densify(const std::map<long, Rational>& coeffs, long lo, long hi) {
    DenseZ d;
    d.lo = lo;
    for (const auto& [e, x] : coeffs)
        mpz_lcm(d.den.get_mpz_t(), d.den.get_mpz_t(), x.denominator().get_mpz_t());
    d.c.assign(static_cast<size_t>(hi - lo) + 1, mpz_class(0));
    for (const auto& [e, x] : coeffs)
        d.c[static_cast<size_t>(e - lo)] = x.numerator() * (d.den / x.denominator());
    return d;
}

}  // namespace

QLaurent operator*(const QLaurent& a, const QLaurent& b) {
    QLaurent r;
    if (a.is_zero() || b.is_zero()) return r;
    DenseZ da = densify(a.coeffs_, a.min_exp(), a.max_exp());
    DenseZ db = densify(b.coeffs_, b.min_exp(), b.max_exp());
    std::vector<mpz_class> acc(da.c.size() + db.c.size() - 1);
    for (size_t i = 0; i < da.c.size(); ++i) {
        if (da.c[i] == 0) continue;
        for (size_t j = 0; j < db.c.size(); ++j) {
            if (db.c[j] == 0) continue;
            acc[i + j] += da.c[i] * db.c[j];
        }
    }
    mpz_class den = da.den * db.den;
    long lo = da.lo + db.lo;
    for (size_t i = 0; i < acc.size(); ++i) {
        if (acc[i] == 0) continue;
        mpq_class v(std::move(acc[i]), den);
        v.canonicalize();
        r.coeffs_.emplace_hint(r.coeffs_.end(), lo + static_cast<long>(i), Rational(v));
    }
    return r;
}

QLaurent QLaurent::scaled(const Rational& c) const {
    QLaurent r;
    if (c.is_zero()) return r;
    for (const auto& [e, v] : coeffs_) r.coeffs_[e] = v * c;
    return r;
}

QLaurent QLaurent::shifted(long k) const {
    QLaurent r;
    for (const auto& [e, v] : coeffs_) r.coeffs_[e + k] = v;
    return r;
}

QLaurent QLaurent::bar() const {
    QLaurent r;
    for (const auto& [e, v] : coeffs_) r.coeffs_[-e] = v;
    return r;
}

QLaurent QLaurent::pow(long e) const {
    require(e >= 0, "DomainError", "negative power of QLaurent");
    QLaurent acc(1), base = *this;
    long n = e;
    while (n) {
        if (n & 1) acc *= base;
        if (n >>= 1) base *= base;
    }
    return acc;
}

bool QLaurent::divisible_by_one_minus_qm(long m) const {
    if (is_zero()) return true;
    // P is divisible by (1-q^m) iff the exponent fold of P modulo m
    // vanishes; this is division-free.
    std::vector<Rational> fold(static_cast<size_t>(m));
    for (const auto& [e, c] : coeffs_) {
        long r = e % m;
        if (r < 0) r += m;
        fold[static_cast<size_t>(r)] += c;
    }
    for (const auto& x : fold)
        if (!x.is_zero()) return false;
    return true;
}

QLaurent QLaurent::divided_by(const QLaurent& d) const {
    require(!d.is_zero(), "InversionOfZero", "division of QLaurent by zero");
    if (is_zero()) return QLaurent();
    // Reduce to true polynomial division by stripping q-power content.
    QLaurent num = shifted(-min_exp());
    QLaurent den = d.shifted(-d.min_exp());
    QLaurent quot;
    Rational lead = den.coeffs_.rbegin()->second;
    long dexp = den.max_exp();
    while (!num.is_zero()) {
        long e = num.max_exp() - dexp;
        require(e >= 0, "NotDivisible", "inexact QLaurent division");
        Rational c = num.coeffs_.rbegin()->second / lead;
        quot.add_to(e, c);
        num -= den.scaled(c).shifted(e);
    }
    return quot.shifted(min_exp() - d.min_exp());
}

bool QLaurent::divisible_by(const QLaurent& d) const {
    if (is_zero()) return true;
    if (d.is_zero()) return false;
    QLaurent num = shifted(-min_exp());
    QLaurent den = d.shifted(-d.min_exp());
    Rational lead = den.coeffs_.rbegin()->second;
    long dexp = den.max_exp();
    while (!num.is_zero()) {
        long e = num.max_exp() - dexp;
        if (e < 0) return false;
        Rational c = num.coeffs_.rbegin()->second / lead;
        num -= den.scaled(c).shifted(e);
    }
    return true;
}

Rational QLaurent::eval(const Rational& value) const {
    if (is_zero()) return Rational();
    require(!value.is_zero() || min_exp() >= 0, "EvalAtPole",
            "evaluating negative q-power at q = 0");
    Rational acc;
    for (const auto& [e, c] : coeffs_) acc += c * value.pow(e);
    return acc;
}

std::string QLaurent::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : coeffs_) {
        if (!first) os << (c.sign() > 0 ? " + " : " - ");
        Rational a = first ? c : c.abs();
        first = false;
        if (e == 0) {
            os << a.str();
        } else {
            if (!a.is_one()) os << a.str() << "*";
            os << var;
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

QLaurent OneMinusQExpansion::to_polynomial() const {
    QLaurent omq = QLaurent::one_minus_q(1);
    QLaurent acc, pw(1);
    for (const auto& c : coeffs) {
        acc += pw.scaled(c);
        pw *= omq;
    }
    return acc;
}

OneMinusQExpansion expand_one_minus_q(const QLaurent& p) {
    require(p.is_polynomial(), "NotPolynomialInQ",
            "(1-q)-expansion of a Laurent polynomial with negative exponents");
    // q^j = sum_k binom(j,k) (-1)^k (1-q)^k
    OneMinusQExpansion out;
    if (p.is_zero()) return out;
    long maxk = p.max_exp();
    out.coeffs.assign(static_cast<size_t>(maxk) + 1, Rational());
    for (const auto& [j, c] : p.terms())
        for (long k = 0; k <= j; ++k) {
            Rational t = c * Rational::binomial(j, k);
            if (k % 2) t = -t;
            out.coeffs[static_cast<size_t>(k)] += t;
        }
    while (!out.coeffs.empty() && out.coeffs.back().is_zero()) out.coeffs.pop_back();
    return out;
}

}  // namespace qk
