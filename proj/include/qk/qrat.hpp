#pragma once

#include <map>
#include <string>
#include <utility>

#include "qk/qlaurent.hpp"

namespace qk {

// Rational function of q whose finite poles sit only at roots of unity and at
// q = 0: a QLaurent numerator over a factored denominator prod (1-q^m)^mult.
// The denominator is never expanded; canonical form cancels full (1-q^m)
// factors by exact division and keeps all q-power content in the numerator.
class QRat {
public:
    QRat() = default;
    QRat(long c) : num_(c) {}
    explicit QRat(const Rational& c) : num_(c) {}
    explicit QRat(QLaurent n) : num_(std::move(n)) {}
    QRat(QLaurent n, std::map<long, long> den) : num_(std::move(n)), den_(std::move(den)) {
        canonicalize();
    }

    // 1 / (1-q^m)^mult
    static QRat one_minus_q_inverse(long m, long mult = 1);
    static QRat q(long e = 1) { return QRat(QLaurent::q(e)); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return canon_ ? den_.empty() : normalized().is_laurent(); }
    bool is_q_constant() const {
        return canon_ ? den_.empty() && num_.is_constant() : normalized().is_q_constant();
    }

    // Raw accessors: callers needing the canonical shape go through
    // normalized() first (addition and multiplication defer cancellation).
    const QLaurent& numerator() const { return num_; }
    const std::map<long, long>& denominator_factors() const { return den_; }
    bool is_canonical() const { return canon_; }

    // Cancel full (1-q^m) factors; idempotent, cheap when already canonical.
    QRat& normalize() {
        if (!canon_) {
            canonicalize();
            canon_ = true;
        }
        return *this;
    }
    QRat normalized() const {
        QRat c = *this;
        c.normalize();
        return c;
    }

    // Conversion to QLaurent; NotLaurent if a denominator factor survives.
    QLaurent as_laurent() const;
    // Conversion to a constant; QDependentScalar if q survives.
    Rational as_constant() const;

    QRat operator-() const;
    QRat& operator+=(const QRat& o);
    QRat& operator-=(const QRat& o) { return *this += -o; }
    friend QRat operator+(QRat a, const QRat& b) { return a += b; }
    friend QRat operator-(QRat a, const QRat& b) { return a -= b; }
    friend QRat operator*(const QRat& a, const QRat& b);
    QRat& operator*=(const QRat& o) { return *this = *this * o; }

    // Value equality (cross-multiplication; independent of representation).
    friend bool operator==(const QRat& a, const QRat& b);
    friend bool operator!=(const QRat& a, const QRat& b) { return !(a == b); }

    QRat scaled(const Rational& c) const {
        QRat r = *this;
        r.num_ = num_.scaled(c);
        if (c.is_zero()) {
            r.den_.clear();
            r.canon_ = true;
        }
        return r;
    }
    // multiply by q^e
    QRat q_shifted(long e) const {
        QRat r = *this;
        r.num_ = num_.shifted(e);
        return r;
    }

    // The involution q -> q^{-1}, renormalized so denominator factors are
    // again of the (1-q^m) form via 1-q^{-m} = -q^{-m}(1-q^m).
    QRat bar() const;

    // Multiplicative inverse. InversionOfZero on zero; NotInvertible when the
    // numerator has a zero away from roots of unity and q = 0 (the result
    // would leave the representable class).
    QRat inverse() const;

    QRat pow(long e) const;

    // Exact evaluation at a rational q-value (away from poles).
    Rational eval(const Rational& value) const;

    std::string str() const;

private:
    void canonicalize();
    QLaurent den_expanded() const;

    QLaurent num_;
    std::map<long, long> den_;  // m -> multiplicity
    bool canon_ = true;
};

// Unique decomposition f = laurent + proper where `laurent` is a Laurent
// polynomial and `proper` vanishes at q = infinity, is regular at q = 0 and
// has poles only at roots of unity.
struct SplitResult {
    QLaurent laurent;
    QRat proper;
};
SplitResult split_laurent_proper(const QRat& f);

}  // namespace qk
