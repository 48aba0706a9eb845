#include "qk/qrat.hpp"

#include <sstream>

namespace qk {

QRat QRat::one_minus_q_inverse(long m, long mult) {
    QRat r(1);
    r.den_[m] = mult;
    return r;
}

void QRat::canonicalize() {
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    if (den_.empty()) return;
    // One densification to integers; divisibility tests are exponent folds
    // and each cancellation is a synthetic division, all in mpz.
    const long lo = num_.min_exp(), hi = num_.max_exp();
    mpz_class den = 1;
    for (const auto& [e, x] : num_.terms())
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.denominator().get_mpz_t());
    std::vector<mpz_class> c(static_cast<size_t>(hi - lo) + 1);
    for (const auto& [e, x] : num_.terms())
        c[static_cast<size_t>(e - lo)] = x.numerator() * (den / x.denominator());

    bool changed = false;
    // Larger factors first: cancelling (1-q^m) can strip the (1-q) content
    // that a later smaller-factor cancellation would otherwise need.
    for (auto it = den_.rbegin(); it != den_.rend();) {
        const long m = it->first;
        while (it->second > 0) {
            if (static_cast<long>(c.size()) <= m) break;
            std::vector<mpz_class> fold(static_cast<size_t>(m));
            for (size_t i = 0; i < c.size(); ++i) fold[i % static_cast<size_t>(m)] += c[i];
            bool divisible = true;
            for (const auto& x : fold)
                if (x != 0) {
                    divisible = false;
                    break;
                }
            if (!divisible) break;
            // synthetic division by (1 - q^m): p = (1-q^m) r gives
            // r_i = p_i + r_{i-m}
            std::vector<mpz_class> r(c.size() - static_cast<size_t>(m));
            for (size_t i = 0; i < r.size(); ++i) {
                r[i] = c[i];
                if (i >= static_cast<size_t>(m)) r[i] += r[i - static_cast<size_t>(m)];
            }
            c = std::move(r);
            --it->second;
            changed = true;
        }
        if (it->second == 0)
            it = decltype(it)(den_.erase(std::next(it).base()));
        else
            ++it;
    }
    if (changed) {
        QLaurent rebuilt;
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            mpq_class v(std::move(c[i]), den);
            v.canonicalize();
            rebuilt.set(lo + static_cast<long>(i), Rational(v));
        }
        num_ = std::move(rebuilt);
    }
}

QLaurent QRat::den_expanded() const {
    QLaurent d(1);
    for (const auto& [m, mult] : den_) d *= QLaurent::one_minus_q(m).pow(mult);
    return d;
}

QLaurent QRat::as_laurent() const {
    if (!canon_) return normalized().as_laurent();
    require(den_.empty(), "NotLaurent", "QRat with uncancelled denominator: " + str());
    return num_;
}

Rational QRat::as_constant() const {
    if (!canon_) return normalized().as_constant();
    require(den_.empty() && num_.is_constant(), "QDependentScalar",
            "QRat is not constant in q: " + str());
    return num_.constant_term();
}

QRat QRat::operator-() const {
    QRat r = *this;
    r.num_ = -num_;
    return r;
}

QRat& QRat::operator+=(const QRat& o) {
    // Common denominator: per-factor maximum multiplicity. Cancellation is
    // deferred to normalize().
    if (den_ == o.den_) {
        num_ += o.num_;
        if (num_.is_zero()) {
            den_.clear();
            canon_ = true;
        } else if (!den_.empty()) {
            canon_ = false;
        }
        return *this;
    }
    std::map<long, long> den;
    for (const auto& [m, k] : den_) den[m] = k;
    for (const auto& [m, k] : o.den_) {
        auto it = den.find(m);
        if (it == den.end() || it->second < k) den[m] = k;
    }
    QLaurent a = num_, b = o.num_;
    for (const auto& [m, k] : den) {
        long ka = 0, kb = 0;
        if (auto it = den_.find(m); it != den_.end()) ka = it->second;
        if (auto it = o.den_.find(m); it != o.den_.end()) kb = it->second;
        if (k > ka) a *= QLaurent::one_minus_q(m).pow(k - ka);
        if (k > kb) b *= QLaurent::one_minus_q(m).pow(k - kb);
    }
    num_ = a + b;
    den_ = std::move(den);
    canon_ = num_.is_zero() || den_.empty();
    if (num_.is_zero()) den_.clear();
    return *this;
}

QRat operator*(const QRat& a, const QRat& b) {
    if (a.is_zero() || b.is_zero()) return QRat();
    QRat r;
    r.num_ = a.num_ * b.num_;
    r.den_ = a.den_;
    for (const auto& [m, k] : b.den_) r.den_[m] += k;
    r.canon_ = r.den_.empty();
    return r;
}

bool operator==(const QRat& a, const QRat& b) {
    if (!a.canon_) return a.normalized() == b;
    if (!b.canon_) return a == b.normalized();
    // Representations are canonical but not unique; compare by
    // cross-multiplying over the union denominator.
    QLaurent an = a.num_, bn = b.num_;
    for (const auto& [m, k] : b.den_) {
        long ka = 0;
        if (auto it = a.den_.find(m); it != a.den_.end()) ka = it->second;
        if (k > ka) an *= QLaurent::one_minus_q(m).pow(k - ka);
    }
    for (const auto& [m, k] : a.den_) {
        long kb = 0;
        if (auto it = b.den_.find(m); it != b.den_.end()) kb = it->second;
        if (k > kb) bn *= QLaurent::one_minus_q(m).pow(k - kb);
    }
    return an == bn;
}

QRat QRat::bar() const {
    QLaurent n = num_.bar();
    long shift = 0;
    long sign = 0;
    for (const auto& [m, k] : den_) {
        shift += m * k;
        sign += k;
    }
    n = n.shifted(shift);
    if (sign % 2) n = -n;
    return QRat(n, den_);
}

namespace {

const QLaurent& cyclotomic(long n) {
    static std::map<long, QLaurent> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // Phi_n = (q^n - 1) / prod_{d | n, d < n} Phi_d
    QLaurent p = QLaurent::q(n) - QLaurent(1);
    for (long d = 1; d < n; ++d)
        if (n % d == 0) p = p.divided_by(cyclotomic(d));
    return cache.emplace(n, std::move(p)).first->second;
}

}  // namespace

QRat QRat::inverse() const {
    require(!is_zero(), "InversionOfZero", "inverse of zero QRat");
    // Factor the numerator over the multiplicative group generated by q and
    // the (1-q^m): strip q-content, factor into cyclotomics, then convert
    // cyclotomic exponents to signed (1-q^m) exponents via q^m - 1 =
    // prod_{d|m} Phi_d.
    long a = num_.min_exp();
    QLaurent p = num_.shifted(-a);
    std::map<long, long> cyc;  // n -> exponent
    long bound = 2 * p.max_exp() * p.max_exp() + 2;
    for (long n = 1; n <= bound && !p.is_constant(); ++n) {
        if (cyclotomic(n).max_exp() > p.max_exp()) continue;
        while (p.divisible_by(cyclotomic(n))) {
            p = p.divided_by(cyclotomic(n));
            ++cyc[n];
        }
    }
    require(p.is_constant(), "NotInvertible",
            "QRat numerator has zeros away from roots of unity: " + str());

    std::map<long, long> g;  // signed exponents of (1-q^m)
    long maxn = cyc.empty() ? 0 : cyc.rbegin()->first;
    for (long n = maxn; n >= 1; --n) {
        long e = 0;
        if (auto it = cyc.find(n); it != cyc.end()) e = it->second;
        for (const auto& [m, gm] : g)
            if (m > n && m % n == 0) e -= gm;
        if (e != 0) g[n] = e;
    }

    // numerator factors with positive exponent become the inverse's
    // denominator; negative ones multiply into the inverse's numerator
    // together with the old denominator.
    std::map<long, long> invden;
    QLaurent invnum = den_expanded();
    for (const auto& [m, e] : g) {
        if (e > 0)
            invden[m] = e;
        else
            invnum *= QLaurent::one_minus_q(m).pow(-e);
    }
    // Fix the constant: this * candidate == 1 up to a rational scalar.
    QRat candidate(invnum.shifted(-a), invden);
    QRat prod = *this * candidate;
    Rational c = prod.as_constant();
    return candidate.scaled(c.inverse());
}

QRat QRat::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    QRat acc(1), base = *this;
    long n = e;
    while (n) {
        if (n & 1) acc *= base;
        if (n >>= 1) base *= base;
    }
    return acc;
}

Rational QRat::eval(const Rational& value) const {
    Rational d(1);
    for (const auto& [m, k] : den_) {
        Rational f = Rational(1) - value.pow(m);
        require(!f.is_zero(), "EvalAtPole", "QRat evaluated at a pole");
        d *= f.pow(k);
    }
    return num_.eval(value) / d;
}

std::string QRat::str() const {
    if (den_.empty()) return num_.str();
    std::ostringstream os;
    os << "(" << num_.str() << ")/(";
    bool first = true;
    for (const auto& [m, k] : den_) {
        if (!first) os << "*";
        first = false;
        os << "(1-q";
        if (m != 1) os << "^" << m;
        os << ")";
        if (k != 1) os << "^" << k;
    }
    os << ")";
    return os.str();
}

SplitResult split_laurent_proper(const QRat& f) {
    if (!f.is_canonical()) return split_laurent_proper(f.normalized());
    SplitResult out;
    if (f.is_zero()) return out;
    if (f.is_laurent()) {
        out.laurent = f.numerator();
        return out;
    }
    // f = A(q) / (q^a C(q)) with C(0) = 1 and root-of-unity zeros only.
    const QLaurent& num = f.numerator();
    long a = std::max(0L, -num.min_exp());
    QLaurent A = num.shifted(a);
    QLaurent C(1);
    for (const auto& [m, k] : f.denominator_factors())
        C *= QLaurent::one_minus_q(m).pow(k);
    long degC = C.max_exp();

    auto mod_C = [&](QLaurent x) {
        while (!x.is_zero() && x.max_exp() >= degC) {
            long e = x.max_exp() - degC;
            Rational c = x.coeff(x.max_exp()) / C.coeff(degC);
            x -= C.scaled(c).shifted(e);
        }
        return x;
    };

    // q^{-1} = (1 - C)/q mod C, valid because C(0) = 1.
    QLaurent u = (QLaurent(1) - C).shifted(-1);
    QLaurent B = mod_C(A);
    for (long i = 0; i < a; ++i) B = mod_C(B * u);

    out.proper = QRat(B, f.denominator_factors());
    out.laurent = (A - B.shifted(a)).divided_by(C).shifted(-a);
    return out;
}

}  // namespace qk
