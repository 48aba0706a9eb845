#pragma once

#include <json.hpp>

#include "qk/bigrec.hpp"

namespace qk {

using json = nlohmann::ordered_json;

// Canonical JSON forms. Rationals render as "p/q" (integers as "p");
// Novikov terms are sorted lexicographically by degree vector for
// byte-stable output.

json to_json(const Rational& x);
json to_json(const QLaurent& p);   // {"num": [[exp, "p/q"]...], "den": []}
json to_json(const QRat& f);       // {"num": [[exp, "p/q"]...], "den": [[m, mult]...]}
json to_json(const ExpPoly& f);    // [{"lambda": [...], "poly": [[[degvec], "p/q"]...]}...]
json to_json(const QRatExpPoly& f);

ExpPoly exppoly_from_json(const json& j, int nvar);

template <class T>
json to_json(const Matrix<T>& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class C>
json series_to_json(const NovikovSeries<C>& s) {
    json out;
    out["cutoff"] = s.cutoff();
    json terms = json::array();
    std::vector<Degree> keys;
    for (const auto& [d, c] : s.terms()) keys.push_back(d);
    std::sort(keys.begin(), keys.end(),
              [](const Degree& a, const Degree& b) { return a.d < b.d; });
    for (const auto& d : keys) {
        json term;
        term["d"] = d.d;
        term["c"] = to_json(s.at(d));
        terms.push_back(std::move(term));
    }
    out["terms"] = std::move(terms);
    return out;
}

// BigShift round-trip for the optional on-disk cache.
json shift_to_json(const BigShift& s);
BigShift shift_from_json(const json& j);

}  // namespace qk
