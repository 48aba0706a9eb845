#include "qk/rational.hpp"

#include <ostream>

namespace qk {

Rational Rational::parse(const std::string& s) {
    require(!s.empty(), "ParseError", "empty rational literal");
    try {
        mpq_class v(s, 10);
        v.canonicalize();
        require(sgn(v.get_den()) > 0, "ParseError", "zero denominator in '" + s + "'");
        return Rational(v);
    } catch (const std::invalid_argument&) {
        fail("ParseError", "bad rational literal '" + s + "'");
    }
}

Rational Rational::binomial(long n, long k) {
    if (k < 0) return Rational();
    mpz_class b;
    if (n >= 0) {
        if (k > n) return Rational();
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        return Rational(b);
    }
    // binom(n,k) = (-1)^k binom(k-n-1, k) for n < 0
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(k - n - 1), static_cast<unsigned long>(k));
    if (k % 2) b = -b;
    return Rational(b);
}

Rational Rational::factorial(long n) {
    require(n >= 0, "DomainError", "factorial of negative integer");
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(f);
}

Rational Rational::pow(long e) const {
    if (e == 0) return Rational(1);
    Rational base = e > 0 ? *this : inverse();
    long n = e > 0 ? e : -e;
    Rational acc(1);
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

std::string Rational::str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

mpz_class common_denominator(const std::vector<Rational>& xs) {
    mpz_class l = 1;
    for (const auto& x : xs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.denominator().get_mpz_t());
    return l;
}

}  // namespace qk
