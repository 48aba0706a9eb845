#include "qk/exprparse.hpp"

#include "qk/exppoly.hpp"
#include "qk/novikov.hpp"

namespace qk {

// Fixture notation for exponential polynomials: variables t (and s), the
// exponential E = e^{t} with E^k allowed for any integer k, and rational
// constants written a/b.
ExpPoly parse_exppoly_fixture(const std::string& text, int nvar) {
    ExprOps<ExpPoly> ops;
    ops.integer = [](long n) { return ExpPoly(n); };
    ops.symbol = [nvar](const std::string& name) -> ExpPoly {
        if (name == "t") return ExpPoly::variable(nvar, 0);
        if (name == "s") {
            require(nvar >= 2, "ParseError", "variable s needs two coordinates");
            return ExpPoly::variable(nvar, 1);
        }
        if (name == "E") return ExpPoly::exponential(nvar, Freq{Rational(1)});
        fail("ParseError", "unknown symbol '" + name + "' in fixture");
    };
    ops.symbol_pow = [nvar](const std::string& name, long e) -> ExpPoly {
        if (name == "E") return ExpPoly::exponential(nvar, Freq{Rational(e)});
        require(e >= 0, "ParseError", "negative exponent on '" + name + "'");
        ExpPoly base = name == "t" ? ExpPoly::variable(nvar, 0) : ExpPoly::variable(nvar, 1);
        require(name == "t" || name == "s", "ParseError", "unknown symbol '" + name + "'");
        ExpPoly acc(1);
        for (long i = 0; i < e; ++i) acc *= base;
        return acc;
    };
    ops.div = [](const ExpPoly& a, const ExpPoly& b) -> ExpPoly {
        require(b.is_constant(), "ParseError", "fixture division must be by a constant");
        Rational c = b.eval_all_zero();
        return a.scaled(c.inverse());
    };
    return parse_expression(text, ops);
}

// Fixture notation for polynomials in the Novikov variables Q1..Qr.
NovikovSeries<Rational> parse_novikov_fixture(const std::string& text, int r, int cutoff) {
    using S = NovikovSeries<Rational>;
    ExprOps<S> ops;
    ops.integer = [r, cutoff](long n) {
        S s(r, cutoff);
        s.set(Degree::zero(r), Rational(n));
        return s;
    };
    ops.symbol = [r, cutoff](const std::string& name) -> S {
        for (int i = 0; i < r; ++i)
            if (name == "Q" + std::to_string(i + 1) || (r == 1 && name == "Q")) {
                S s(r, cutoff);
                s.set(Degree::unit(r, i), Rational(1));
                return s;
            }
        fail("ParseError", "unknown symbol '" + name + "' in Novikov fixture");
    };
    ops.div = [](const S& a, const S& b) -> S {
        Rational c = b.at(Degree::zero(b.rank()));
        require(!c.is_zero() && b.terms().size() == 1, "ParseError",
                "Novikov fixture division must be by a constant");
        return a.scaled(c.inverse());
    };
    return parse_expression(text, ops);
}

}  // namespace qk
