#include "qk/target.hpp"

#include <memory>

#include <json.hpp>

namespace qk {

using json = nlohmann::json;

std::vector<Rational> Target::classical_mul(const std::vector<Rational>& a,
                                            const std::vector<Rational>& b) const {
    require(static_cast<int>(a.size()) == rank && static_cast<int>(b.size()) == rank,
            "DimensionMismatch", "classical product operand length");
    std::vector<Rational> out(rank);
    for (int alpha = 0; alpha < rank; ++alpha) {
        if (a[alpha].is_zero()) continue;
        for (int gamma = 0; gamma < rank; ++gamma) {
            Rational acc;
            for (int beta = 0; beta < rank; ++beta)
                if (!b[beta].is_zero()) acc += mult[alpha](gamma, beta) * b[beta];
            out[gamma] += a[alpha] * acc;
        }
    }
    return out;
}

Rational Target::chi_of(const std::vector<Rational>& a) const {
    Rational acc;
    for (int i = 0; i < rank; ++i) acc += chi[i] * a[i];
    return acc;
}

Rational Target::pairing_g(const std::vector<Rational>& a, const std::vector<Rational>& b) const {
    return chi_of(classical_mul(a, b));
}

std::vector<QRat> Target::j_coefficient(const Degree& d) const {
    require(static_cast<bool>(j_provider), "NotAvailable", "target has no J-function provider");
    return j_provider(d);
}

std::vector<Rational> Target::resolve_class(const std::string& label) const {
    if (auto it = class_aliases.find(label); it != class_aliases.end()) return it->second;
    for (int i = 0; i < rank; ++i)
        if (basis_labels[i] == label) {
            std::vector<Rational> v(rank);
            v[i] = Rational(1);
            return v;
        }
    fail("UnknownClass", "unknown insertion class '" + label + "'");
}

namespace {

// (I - q^k U)^{-1} for unipotent U = I - N: sum_j (-1)^j q^{kj} N^j / (1-q^k)^{j+1}.
Matrix<QRat> unipotent_resolvent(const Matrix<Rational>& U, long k) {
    int n = U.rows();
    Matrix<Rational> N = Matrix<Rational>::identity(n) - U;
    Matrix<QRat> acc(n, n);
    Matrix<Rational> Npow = Matrix<Rational>::identity(n);
    for (int j = 0;; ++j) {
        if (Npow.is_zero()) break;
        QRat c = QRat::one_minus_q_inverse(k, j + 1).q_shifted(k * j);
        if (j % 2) c = -c;
        acc += Npow.map([&](const Rational& x) { return c.scaled(x); });
        Npow = Npow * N;
        require(j <= n, "ValidationFailure", "resolvent expansion of non-unipotent matrix");
    }
    return acc;
}

void finish_target(Target& t) {
    // J-function leading term: (1-q) Phi_0 at degree zero.
    if (t.j_provider) {
        auto j0 = t.j_provider(Degree::zero(t.picard_rank));
        require(static_cast<int>(j0.size()) == t.rank &&
                    j0[0] == QRat(QLaurent::one_minus_q(1)),
                "ValidationFailure", "J-function degree-0 coefficient must be (1-q) Phi_0");
        for (int i = 1; i < t.rank; ++i)
            require(j0[static_cast<size_t>(i)].is_zero(), "ValidationFailure",
                    "J-function degree-0 coefficient must be (1-q) Phi_0");
    }
    // Pairing from the multiplication table and chi.
    t.g = Matrix<Rational>(t.rank, t.rank);
    for (int a = 0; a < t.rank; ++a)
        for (int b = 0; b < t.rank; ++b) {
            Rational acc;
            for (int c = 0; c < t.rank; ++c) acc += t.chi[c] * t.mult[a](c, b);
            t.g(a, b) = acc;
        }
    validate_target(t);
}

}  // namespace

Target make_projective_space(int N) {
    require(N >= 1, "ValidationFailure", "cpn:N needs N >= 1");
    Target t;
    t.name = "cpn:" + std::to_string(N);
    t.rank = N + 1;
    t.picard_rank = 1;
    // Basis (1-P^{-1})^alpha; multiplication by h = 1-P^{-1} shifts it.
    Matrix<Rational> Nh(t.rank, t.rank);
    for (int a = 0; a + 1 <= N; ++a) Nh(a + 1, a) = Rational(1);
    for (int a = 0; a <= N; ++a) {
        t.basis_labels.push_back(a == 0 ? "1" : (a == 1 ? "h" : "h^" + std::to_string(a)));
        t.mult.push_back(Nh.pow(a));
        t.chi.push_back(Rational(1));
        XPoly F;
        for (int j = 0; j <= a; ++j) {
            Rational c = Rational::binomial(a, j);
            if (j % 2) c = -c;
            F[Mono{j}] = c;
        }
        t.basis_monomials.push_back(F);
    }
    t.picard.push_back(Matrix<Rational>::identity(t.rank) - Nh);
    t.divisor_directions = {1};

    t.class_aliases["H"] = [&] {
        std::vector<Rational> v(t.rank);
        v[1] = Rational(1);
        return v;
    }();
    t.class_aliases["pt"] = [&] {
        std::vector<Rational> v(t.rank);
        v[N] = Rational(1);
        return v;
    }();
    t.class_aliases["Pinv"] = [&] {
        std::vector<Rational> v(t.rank);
        v[0] = Rational(1);
        v[1] = Rational(-1);
        return v;
    }();

    Matrix<Rational> Pinv = t.picard[0];
    int rank = t.rank;
    t.j_provider = [Pinv, rank, N](const Degree& d) {
        // Degree-d coefficient of (1-q) sum_d Q^d / prod_{k<=d} (1-P^{-1}q^k)^{N+1}
        int deg = d[0];
        std::vector<QRat> v(rank);
        v[0] = QRat(1);
        for (int k = 1; k <= deg; ++k) {
            Matrix<QRat> f = unipotent_resolvent(Pinv, k);
            for (int p = 0; p <= N; ++p) v = f.apply(v);
        }
        QRat omq(QLaurent::one_minus_q(1));
        for (auto& x : v) x = x * omq;
        return v;
    };

    finish_target(t);
    return t;
}

Target make_flag3() {
    Target t;
    t.name = "fl3";
    t.rank = 6;
    t.picard_rank = 2;
    t.basis_labels = {"1", "x", "x^2", "y", "y^2", "xy"};
    // x = 1-P_1^{-1}, y = 1-P_2^{-1}; ring relations give
    // x^2 y = x y^2 = x^2 + y^2 - xy and x^3 = y^3 = x^2 y^2 = 0.
    auto col = [](std::initializer_list<long> v) {
        std::vector<Rational> c;
        for (long x : v) c.emplace_back(x);
        return c;
    };
    std::vector<Rational> w = col({0, 0, 1, 0, 1, -1});  // x^2 + y^2 - xy
    auto as_matrix = [&](std::vector<std::vector<Rational>> cols) {
        Matrix<Rational> m(6, 6);
        for (int j = 0; j < 6; ++j)
            for (int i = 0; i < 6; ++i) m(i, j) = cols[j][i];
        return m;
    };
    std::vector<Rational> zero = col({0, 0, 0, 0, 0, 0});
    std::vector<Rational> e1 = col({0, 1, 0, 0, 0, 0});
    std::vector<Rational> e2 = col({0, 0, 1, 0, 0, 0});
    std::vector<Rational> e3 = col({0, 0, 0, 1, 0, 0});
    std::vector<Rational> e4 = col({0, 0, 0, 0, 1, 0});
    std::vector<Rational> e5 = col({0, 0, 0, 0, 0, 1});
    t.mult.push_back(Matrix<Rational>::identity(6));
    t.mult.push_back(as_matrix({e1, e2, zero, e5, w, w}));          // x .
    t.mult.push_back(as_matrix({e2, zero, zero, w, zero, zero}));   // x^2 .
    t.mult.push_back(as_matrix({e3, e5, w, e4, zero, w}));          // y .
    t.mult.push_back(as_matrix({e4, w, zero, zero, zero, zero}));   // y^2 .
    t.mult.push_back(as_matrix({e5, w, zero, w, zero, zero}));      // xy .
    t.picard.push_back(Matrix<Rational>::identity(6) - t.mult[1]);
    t.picard.push_back(Matrix<Rational>::identity(6) - t.mult[3]);
    t.chi.assign(6, Rational(1));
    t.basis_monomials = {
        XPoly{{Mono{0, 0}, Rational(1)}},
        XPoly{{Mono{0, 0}, Rational(1)}, {Mono{1, 0}, Rational(-1)}},
        XPoly{{Mono{0, 0}, Rational(1)}, {Mono{1, 0}, Rational(-2)}, {Mono{2, 0}, Rational(1)}},
        XPoly{{Mono{0, 0}, Rational(1)}, {Mono{0, 1}, Rational(-1)}},
        XPoly{{Mono{0, 0}, Rational(1)}, {Mono{0, 1}, Rational(-2)}, {Mono{0, 2}, Rational(1)}},
        XPoly{{Mono{0, 0}, Rational(1)},
              {Mono{1, 0}, Rational(-1)},
              {Mono{0, 1}, Rational(-1)},
              {Mono{1, 1}, Rational(1)}},
    };
    t.divisor_directions = {1, 3};
    t.class_aliases["P1inv"] = col({1, -1, 0, 0, 0, 0});
    t.class_aliases["P2inv"] = col({1, 0, 0, -1, 0, 0});

    Matrix<Rational> P1 = t.picard[0], P2 = t.picard[1];
    t.j_provider = [P1, P2](const Degree& d) {
        int d1 = d[0], d2 = d[1];
        Matrix<Rational> P12 = P1 * P2;
        std::vector<QRat> v(6);
        v[0] = QRat(1);
        for (int r = 1; r <= d1 + d2; ++r) {
            // I - q^r P_1^{-1} P_2^{-1}
            Matrix<QRat> f =
                Matrix<QRat>::identity(6) - P12.map([&](const Rational& x) {
                    return QRat(QLaurent::monomial(x, r));
                });
            v = f.apply(v);
        }
        for (int r = 1; r <= d1; ++r) {
            Matrix<QRat> f = unipotent_resolvent(P1, r);
            for (int p = 0; p < 3; ++p) v = f.apply(v);
        }
        for (int r = 1; r <= d2; ++r) {
            Matrix<QRat> f = unipotent_resolvent(P2, r);
            for (int p = 0; p < 3; ++p) v = f.apply(v);
        }
        QRat omq(QLaurent::one_minus_q(1));
        for (auto& x : v) x = x * omq;
        return v;
    };

    finish_target(t);
    return t;
}

Target load_target_document(const std::string& text) {
    json doc = json::parse(text);
    Target t;
    t.name = doc.at("name").get<std::string>();
    t.rank = doc.at("rank").get<int>();
    t.picard_rank = doc.at("picard_rank").get<int>();
    require(t.rank >= 1 && t.picard_rank >= 1 && t.picard_rank < t.rank, "ValidationFailure",
            "rank/picard_rank out of range");
    t.basis_labels = doc.at("basis_labels").get<std::vector<std::string>>();
    require(static_cast<int>(t.basis_labels.size()) == t.rank, "ValidationFailure",
            "basis_labels length != rank");

    t.mult.assign(t.rank, Matrix<Rational>(t.rank, t.rank));
    for (const auto& triple : doc.at("mult_table")) {
        int a = triple.at(0).get<int>(), b = triple.at(1).get<int>(), c = triple.at(2).get<int>();
        require(a >= 0 && a < t.rank && b >= 0 && b < t.rank && c >= 0 && c < t.rank,
                "ValidationFailure", "mult_table index out of range");
        t.mult[a](c, b) = Rational::parse(triple.at(3).get<std::string>());
    }
    for (const auto& mat : doc.at("picard_matrices")) {
        Matrix<Rational> m(t.rank, t.rank);
        for (int i = 0; i < t.rank; ++i)
            for (int j = 0; j < t.rank; ++j)
                m(i, j) = Rational::parse(mat.at(i).at(j).get<std::string>());
        t.picard.push_back(m);
    }
    require(static_cast<int>(t.picard.size()) == t.picard_rank, "ValidationFailure",
            "picard_matrices count != picard_rank");
    for (const auto& x : doc.at("chi")) t.chi.push_back(Rational::parse(x.get<std::string>()));
    require(static_cast<int>(t.chi.size()) == t.rank, "ValidationFailure", "chi length != rank");

    if (doc.contains("divisor_directions")) {
        t.divisor_directions = doc.at("divisor_directions").get<std::vector<int>>();
    } else {
        for (int i = 1; i <= t.picard_rank; ++i) t.divisor_directions.push_back(i);
    }
    if (doc.contains("basis_monomials")) {
        for (const auto& poly : doc.at("basis_monomials")) {
            XPoly F;
            for (const auto& term : poly) {
                Mono m = term.at(0).get<Mono>();
                require(static_cast<int>(m.size()) == t.picard_rank, "ValidationFailure",
                        "basis monomial exponent length");
                F[m] = Rational::parse(term.at(1).get<std::string>());
            }
            t.basis_monomials.push_back(F);
        }
        require(static_cast<int>(t.basis_monomials.size()) == t.rank, "ValidationFailure",
                "basis_monomials count != rank");
    }

    const auto& j = doc.at("j");
    if (j.contains("preset")) {
        std::string preset = j.at("preset").get<std::string>();
        Target p = load_target(preset);
        require(p.rank == t.rank, "ValidationFailure", "preset J-function rank mismatch");
        t.j_provider = p.j_provider;
    } else {
        auto table = std::make_shared<std::map<Degree, std::vector<QRat>>>();
        for (const auto& entry : j.at("table")) {
            Degree d(entry.at("d").get<std::vector<int>>());
            std::vector<QRat> coeffs;
            for (const auto& c : entry.at("coeffs")) {
                QLaurent num;
                for (const auto& term : c.at("num"))
                    num.add_to(term.at(0).get<long>(),
                               Rational::parse(term.at(1).get<std::string>()));
                std::map<long, long> den;
                for (const auto& fac : c.at("den")) den[fac.at(0).get<long>()] = fac.at(1).get<long>();
                coeffs.emplace_back(num, den);
            }
            (*table)[d] = coeffs;
        }
        t.j_provider = [table](const Degree& d) {
            auto it = table->find(d);
            require(it != table->end(), "NotAvailable",
                    "J-function table has no entry for the requested degree");
            return it->second;
        };
    }

    finish_target(t);
    return t;
}

Target load_target(const std::string& spec) {
    if (spec.rfind("cpn:", 0) == 0) return make_projective_space(std::stoi(spec.substr(4)));
    if (spec == "cp1") return make_projective_space(1);
    if (spec == "cp2") return make_projective_space(2);
    if (spec == "fl3") return make_flag3();
    // Otherwise a path to a target document.
    FILE* f = fopen(spec.c_str(), "rb");
    require(f != nullptr, "ValidationFailure", "cannot open target document '" + spec + "'");
    std::string text;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
    fclose(f);
    return load_target_document(text);
}

void validate_target(const Target& t) {
    require(static_cast<int>(t.mult.size()) == t.rank, "ValidationFailure",
            "multiplication table incomplete");
    require(t.mult[0] == Matrix<Rational>::identity(t.rank), "ValidationFailure",
            "Phi_0 is not the multiplicative identity");
    // Commutativity and associativity of the classical ring.
    for (int a = 0; a < t.rank; ++a)
        for (int b = a; b < t.rank; ++b) {
            for (int c = 0; c < t.rank; ++c)
                require(t.mult[a](c, b) == t.mult[b](c, a), "ValidationFailure",
                        "classical multiplication not commutative");
            Matrix<Rational> ab = t.mult[a] * t.mult[b];
            Matrix<Rational> by_product(t.rank, t.rank);
            for (int c = 0; c < t.rank; ++c) {
                Rational coeff = t.mult[a](c, b);
                if (!coeff.is_zero()) by_product += t.mult[c].scaled(coeff);
            }
            require(ab == by_product, "ValidationFailure",
                    "classical multiplication not associative");
        }
    for (int i = 0; i < t.picard_rank; ++i) {
        // Unipotent: (I - P_i^{-1}) nilpotent implies classical invertibility.
        Matrix<Rational> N = Matrix<Rational>::identity(t.rank) - t.picard[i];
        Matrix<Rational> p = N;
        int steps = 0;
        while (!p.is_zero() && steps <= t.rank) {
            p = p * N;
            ++steps;
        }
        require(p.is_zero(), "ValidationFailure", "1 - P_i^{-1} is not nilpotent");
    }
    for (int a = 0; a < t.rank; ++a)
        for (int b = 0; b < a; ++b)
            require(t.g(a, b) == t.g(b, a), "ValidationFailure", "pairing g not symmetric");
    // Nondegeneracy via inversion.
    rational_matrix_inverse(t.g);
    if (t.has_basis_monomials()) {
        require(t.basis_monomials[0] == XPoly{{Mono(t.picard_rank, 0), Rational(1)}},
                "ValidationFailure", "F_0 != 1");
        Matrix<Rational> B(t.rank, t.rank);
        for (int a = 0; a < t.rank; ++a) {
            Matrix<Rational> Fa = t.eval_basis_monomial(a, t.picard);
            for (int i = 0; i < t.rank; ++i) B(i, a) = Fa(i, 0);
        }
        Matrix<Rational> expected(t.rank, t.rank);
        for (int a = 0; a < t.rank; ++a) expected(a, a) = Rational(1);
        require(B == expected, "ValidationFailure",
                "F_alpha(P^{-1}) does not reproduce the basis");
    }
}

BasisChange change_basis(const Target& t, const Matrix<Rational>& C) {
    require(C.rows() == t.rank && C.cols() == t.rank, "DimensionMismatch", "basis change shape");
    for (int i = 0; i < t.rank; ++i)
        require(C(i, 0) == (i == 0 ? Rational(1) : Rational(0)), "IdentityNotPreserved",
                "first new basis vector must stay Phi_0");
    Matrix<Rational> Cinv;
    try {
        Cinv = rational_matrix_inverse(C);
    } catch (const Error&) {
        fail("SingularBasisChange", "basis change matrix is singular");
    }

    BasisChange out;
    out.C = C;
    out.C_inv = Cinv;
    Target& n = out.target;
    n.name = t.name + "@basis";
    n.rank = t.rank;
    n.picard_rank = t.picard_rank;
    for (int a = 0; a < t.rank; ++a) n.basis_labels.push_back("b" + std::to_string(a));
    for (int b = 0; b < t.rank; ++b) {
        Matrix<Rational> by(t.rank, t.rank);
        for (int g = 0; g < t.rank; ++g)
            if (!C(g, b).is_zero()) by += t.mult[g].scaled(C(g, b));
        n.mult.push_back(Cinv * by * C);
    }
    for (int i = 0; i < t.picard_rank; ++i) n.picard.push_back(Cinv * t.picard[i] * C);
    for (int a = 0; a < t.rank; ++a) {
        Rational acc;
        for (int g = 0; g < t.rank; ++g) acc += C(g, a) * t.chi[g];
        n.chi.push_back(acc);
    }
    if (t.j_provider) {
        auto prov = t.j_provider;
        n.j_provider = [prov, Cinv](const Degree& d) {
            std::vector<QRat> v = prov(d);
            std::vector<QRat> out(v.size());
            for (size_t i = 0; i < v.size(); ++i)
                for (size_t j = 0; j < v.size(); ++j)
                    if (!Cinv(i, j).is_zero()) out[i] += v[j].scaled(Cinv(i, j));
            return out;
        };
    }
    finish_target(n);

    // t_old = C t_new on the non-identity block (column 0 of C is e_0).
    out.coordinate_map = Matrix<Rational>(t.rank - 1, t.rank - 1);
    for (int a = 1; a < t.rank; ++a)
        for (int b = 1; b < t.rank; ++b) out.coordinate_map(a - 1, b - 1) = C(a, b);
    return out;
}

std::vector<Degree> effective_degrees(const Target& t, int cutoff) {
    return all_degrees(t.picard_rank, cutoff);
}

}  // namespace qk
