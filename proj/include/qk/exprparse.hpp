#pragma once

#include <cctype>
#include <functional>
#include <string>

#include "qk/error.hpp"
#include "qk/exppoly.hpp"
#include "qk/novikov.hpp"

namespace qk {

// Small recursive-descent evaluator over an arbitrary exact ring V, shared
// by relation checking on operator matrices and by embedded reference data.
// Grammar: expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
// factor := '-' factor | atom ('^' int)?; atom := integer | symbol | '(' expr ')'.
template <class V>
struct ExprOps {
    std::function<V(long)> integer;
    std::function<V(const std::string&)> symbol;
    // optional: symbol raised to a (possibly negative) power, e.g. E^-2
    std::function<V(const std::string&, long)> symbol_pow;
    // optional: exact division
    std::function<V(const V&, const V&)> div;
};

template <class V>
class ExprParser {
public:
    ExprParser(const std::string& text, const ExprOps<V>& ops) : s_(text), ops_(ops) {}

    V parse() {
        V v = expr();
        skip();
        require(pos_ == s_.size(), "ParseError", "trailing input in expression: " + s_);
        return v;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    long integer_literal() {
        skip();
        bool neg = eat('-');
        require(pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])), "ParseError",
                "expected integer in expression");
        long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            v = v * 10 + (s_[pos_++] - '0');
        return neg ? -v : v;
    }

    V expr() {
        V v = term();
        while (true) {
            if (eat('+'))
                v = v + term();
            else if (eat('-'))
                v = v - term();
            else
                return v;
        }
    }

    V term() {
        V v = factor();
        while (true) {
            if (eat('*')) {
                v = v * factor();
            } else if (eat('/')) {
                require(static_cast<bool>(ops_.div), "ParseError", "division not supported here");
                v = ops_.div(v, factor());
            } else {
                return v;
            }
        }
    }

    V pow_of(const V& base, long e) {
        require(e >= 0, "ParseError", "negative exponent needs a symbol base");
        V acc = ops_.integer(1);
        for (long i = 0; i < e; ++i) acc = acc * base;
        return acc;
    }

    V factor() {
        if (eat('-')) return -factor();
        skip();
        if (peek() == '(') {
            eat('(');
            V v = expr();
            require(eat(')'), "ParseError", "missing ')'");
            if (eat('^')) return pow_of(v, integer_literal());
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            long n = integer_literal();
            if (eat('^')) return pow_of(ops_.integer(n), integer_literal());
            return ops_.integer(n);
        }
        // identifier
        std::string name;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            name += s_[pos_++];
        require(!name.empty(), "ParseError", "unexpected character in expression: " + s_);
        if (eat('^')) {
            long e = integer_literal();
            if (ops_.symbol_pow) return ops_.symbol_pow(name, e);
            return pow_of(ops_.symbol(name), e);
        }
        return ops_.symbol(name);
    }

    const std::string& s_;
    const ExprOps<V>& ops_;
    size_t pos_ = 0;
};

template <class V>
V parse_expression(const std::string& text, const ExprOps<V>& ops) {
    return ExprParser<V>(text, ops).parse();
}

// Fixture notation helpers: exponential polynomials over t (and s) with
// E = e^{t}, and polynomials in the Novikov variables Q1..Qr.
ExpPoly parse_exppoly_fixture(const std::string& text, int nvar);
NovikovSeries<Rational> parse_novikov_fixture(const std::string& text, int r, int cutoff);

}  // namespace qk
