#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qk/error.hpp"

namespace qk {

// Exact rational number. Thin wrapper around GMP's mpq_class that keeps the
// canonical form invariant (gcd(|num|, den) = 1, den > 0) and renders as
// "p/q" (or "p" for integers) everywhere the CLI emits numbers.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long n, long d) : v_(n, d) { normalize(); }
    explicit Rational(const mpq_class& v) : v_(v) { normalize(); }
    explicit Rational(const mpz_class& v) : v_(v) {}

    // Parses "p", "-p" or "p/q".
    static Rational parse(const std::string& s);

    static Rational binomial(long n, long k);
    static Rational factorial(long n);

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        require(!o.is_zero(), "InversionOfZero", "division of Rational by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }

    Rational inverse() const {
        require(!is_zero(), "InversionOfZero", "inverse of zero Rational");
        return Rational(mpq_class(1) / v_);
    }

    Rational pow(long e) const;
    Rational abs() const { return Rational(mpq_class(::abs(v_))); }

    std::string str() const;

private:
    void normalize() { v_.canonicalize(); }
    mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// lcm of denominators of a list of rationals.
mpz_class common_denominator(const std::vector<Rational>& xs);

}  // namespace qk
