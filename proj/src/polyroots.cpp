#include "qk/polyroots.hpp"

#include <algorithm>
#include <map>

namespace qk {

std::vector<Rational> charpoly(const Matrix<Rational>& m) {
    require(m.rows() == m.cols(), "DimensionMismatch", "charpoly of non-square matrix");
    // Faddeev-LeVerrier: M_1 = M, c_{n-1} = -tr(M_1),
    // M_{k+1} = M(M_k + c_{n-k} I), c_{n-k-1} = -tr(M_{k+1})/(k+1).
    int n = m.rows();
    std::vector<Rational> c(static_cast<size_t>(n) + 1);
    c[n] = Rational(1);
    Matrix<Rational> mk = Matrix<Rational>::identity(n);
    for (int k = 1; k <= n; ++k) {
        mk = m * mk;
        Rational tr;
        for (int i = 0; i < n; ++i) tr += mk(i, i);
        Rational ck = -(tr / Rational(k));
        c[n - k] = ck;
        for (int i = 0; i < n; ++i) mk(i, i) += ck;
    }
    return c;
}

Rational poly_eval(const std::vector<Rational>& coeffs, const Rational& x) {
    Rational acc;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

namespace {

// Synthetic division by (x - r); remainder must vanish.
std::vector<Rational> deflate(const std::vector<Rational>& p, const Rational& r) {
    std::vector<Rational> q(p.size() - 1);
    Rational carry;
    for (size_t i = p.size(); i-- > 1;) {
        carry = p[i] + carry * r;
        q[i - 1] = carry;
    }
    return q;
}

void factor_into(mpz_class n, std::map<mpz_class, long>& out);

// Pollard rho with Brent cycling; n odd composite > 1.
mpz_class pollard_rho(const mpz_class& n) {
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(2654435769UL);
    while (true) {
        mpz_class y = rng.get_z_range(n - 1) + 1, c = rng.get_z_range(n - 1) + 1;
        mpz_class x = y, d = 1, q = 1, ys = y;
        long r = 1;
        const long m = 128;
        while (d == 1) {
            x = y;
            for (long i = 0; i < r; ++i) y = (y * y + c) % n;
            long k = 0;
            while (k < r && d == 1) {
                ys = y;
                long lim = std::min(m, r - k);
                for (long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * ((x - y) % n + n) % n;
                }
                mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += lim;
            }
            r <<= 1;
        }
        if (d == n) {
            d = 1;
            while (d == 1) {
                ys = (ys * ys + c) % n;
                mpz_class diff = ((x - ys) % n + n) % n;
                mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (d != n) return d;
    }
}

void factor_into(mpz_class n, std::map<mpz_class, long>& out) {
    if (n <= 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 32)) {
        ++out[n];
        return;
    }
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++out[p];
            n /= p;
        }
        if (n == 1) return;
    }
    if (mpz_probab_prime_p(n.get_mpz_t(), 32)) {
        ++out[n];
        return;
    }
    mpz_class d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

void divisors_of(const mpz_class& n, std::vector<mpz_class>& out) {
    std::map<mpz_class, long> f;
    factor_into(n, f);
    out = {1};
    for (const auto& [p, e] : f) {
        size_t base = out.size();
        mpz_class pw = 1;
        for (long i = 1; i <= e; ++i) {
            pw *= p;
            for (size_t j = 0; j < base; ++j) out.push_back(out[j] * pw);
        }
    }
}

}  // namespace

RootList rational_roots(const std::vector<Rational>& monic_coeffs) {
    RootList out;
    std::vector<Rational> p = monic_coeffs;
    while (p.size() > 1 && p.back().is_zero()) p.pop_back();
    require(!p.empty() && p.back().is_one(), "DomainError", "rational_roots expects a monic polynomial");
    // Roots at zero first.
    long zero_mult = 0;
    while (p.size() > 1 && p[0].is_zero()) {
        ++zero_mult;
        p.erase(p.begin());
    }
    if (zero_mult) out.roots.emplace_back(Rational(0), zero_mult);
    if (p.size() <= 1) return out;

    // Clear denominators with x = y/D: candidates are divisors of the
    // constant term of the resulting monic integer polynomial, over D.
    mpz_class den = common_denominator(p);
    Rational D{den};
    std::vector<Rational> q(p.size());
    Rational scale(1);
    for (size_t i = p.size(); i-- > 0;) {
        q[i] = p[i] * scale;
        scale *= D;
    }
    std::vector<mpz_class> divs;
    divisors_of(abs(q[0].numerator()), divs);
    std::vector<Rational> candidates;
    for (const auto& d : divs) {
        candidates.push_back(Rational(mpz_class(d)) / D);
        candidates.push_back(Rational(mpz_class(-d)) / D);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    for (const auto& r : candidates) {
        if (!poly_eval(p, r).is_zero()) continue;
        long mult = 0;
        while (p.size() > 1 && poly_eval(p, r).is_zero()) {
            p = deflate(p, r);
            ++mult;
        }
        out.roots.emplace_back(r, mult);
        if (p.size() <= 1) break;
    }
    std::sort(out.roots.begin(), out.roots.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.nontrivial_cofactor = p.size() > 1;
    return out;
}

std::vector<Rational> rational_eigenvalues_of_matrix(const Matrix<Rational>& m) {
    require(m.rows() == m.cols(), "DimensionMismatch", "eigenvalues of non-square matrix");
    int n = m.rows();
    if (n == 0) return {};
    std::vector<Rational> entries;
    entries.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) entries.push_back(m(i, j));
    mpz_class den = common_denominator(entries);
    Rational D{den};

    // Integer matrix D*m has integer rational eigenvalues; Gershgorin bounds
    // them, so a finite scan is complete.
    mpz_class bound = 0;
    for (int i = 0; i < n; ++i) {
        mpz_class row = 0;
        for (int j = 0; j < n; ++j) {
            Rational e = m(i, j) * D;
            mpz_class a = abs(e.numerator());
            mpz_class r = (a + e.denominator() - 1) / e.denominator();
            row += r;
        }
        if (row > bound) bound = row;
    }

    // Bareiss fraction-free elimination on D*m - mu*I detects singularity.
    auto singular = [&](const mpz_class& mu) {
        std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rational e = m(i, j) * D;
                a[i][j] = e.numerator();
                if (i == j) a[i][j] -= mu;
            }
        mpz_class prev = 1;
        for (int k = 0; k < n; ++k) {
            int piv = -1;
            for (int i = k; i < n; ++i)
                if (a[i][k] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return true;
            if (piv != k) std::swap(a[piv], a[k]);
            for (int i = k + 1; i < n; ++i) {
                for (int j = k + 1; j < n; ++j)
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        return a[n - 1][n - 1] == 0;
    };

    std::vector<Rational> out;
    for (mpz_class mu = -bound; mu <= bound; ++mu)
        if (singular(mu)) out.push_back(Rational(mu) / D);
    return out;
}

std::vector<Rational> poly_gcd(std::vector<Rational> a, std::vector<Rational> b) {
    auto trim = [](std::vector<Rational>& p) {
        while (!p.empty() && p.back().is_zero()) p.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        while (a.size() >= b.size() && !a.empty()) {
            Rational f = a.back() / b.back();
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
            trim(a);
            if (a.size() < b.size()) break;
        }
        std::swap(a, b);
        trim(b);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

bool is_squarefree(const std::vector<Rational>& coeffs) {
    std::vector<Rational> d;
    for (size_t i = 1; i < coeffs.size(); ++i) d.push_back(coeffs[i] * Rational(static_cast<long>(i)));
    return poly_gcd(coeffs, d).size() <= 1;
}

}  // namespace qk
