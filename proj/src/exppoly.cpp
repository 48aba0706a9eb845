#include "qk/exppoly.hpp"

#include <sstream>

namespace qk {

namespace {

std::string var_name(const std::vector<std::string>& names, size_t i) {
    if (i < names.size()) return names[i];
    return "t" + std::to_string(i + 1);
}

std::string freq_label(const Freq& f, const std::vector<std::string>& names) {
    // e^{2t-s} style exponent label
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i].is_zero()) continue;
        Rational a = f[i];
        if (first) {
            if (a == Rational(-1))
                os << "-";
            else if (a != Rational(1))
                os << a.str() << "*";
        } else {
            os << (a.sign() > 0 ? "+" : "-");
            Rational aa = a.abs();
            if (!aa.is_one()) os << aa.str() << "*";
        }
        os << var_name(names, i);
        first = false;
    }
    return os.str();
}

template <class C, class CoeffStr>
std::string render(const ExpPolyT<C>& f, const std::vector<std::string>& names, CoeffStr cstr) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first_group = true;
    for (const auto& [freq, poly] : f.terms()) {
        if (!first_group) os << " + ";
        first_group = false;
        std::string label = freq_label(freq, names);
        std::ostringstream ps;
        bool first = true;
        for (const auto& [m, c] : poly) {
            std::string cs = cstr(c);
            bool neg = !cs.empty() && cs[0] == '-';
            if (!first)
                ps << (neg ? " - " : " + ");
            else if (neg)
                ps << "-";
            first = false;
            if (neg) cs = cs.substr(1);
            bool has_var = false;
            std::ostringstream ms;
            for (size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                if (has_var) ms << "*";
                has_var = true;
                ms << var_name(names, i);
                if (m[i] != 1) ms << "^" << m[i];
            }
            bool unit = cs == "1";
            if (!has_var || !unit) {
                if (cs.find_first_of("+-/(") != std::string::npos && cs.size() > 1 && has_var)
                    ps << "(" << cs << ")";
                else
                    ps << cs;
            }
            if (has_var) {
                if (!unit) ps << "*";
                ps << ms.str();
            }
        }
        if (label.empty()) {
            os << ps.str();
        } else {
            os << "e^{" << label << "}*(" << ps.str() << ")";
        }
    }
    return os.str();
}

}  // namespace

std::string render_exppoly(const ExpPoly& f, const std::vector<std::string>& names) {
    return render<Rational>(f, names, [](const Rational& c) { return c.str(); });
}

std::string render_exppoly(const QRatExpPoly& f, const std::vector<std::string>& names) {
    return render<QRat>(f, names, [](const QRat& c) { return c.str(); });
}

}  // namespace qk
