#include "qk/json_io.hpp"

namespace qk {

json to_json(const Rational& x) { return x.str(); }

namespace {
json laurent_terms(const QLaurent& p) {
    json out = json::array();
    for (const auto& [e, c] : p.terms()) out.push_back(json::array({e, c.str()}));
    return out;
}
}  // namespace

json to_json(const QLaurent& p) {
    json out;
    out["num"] = laurent_terms(p);
    out["den"] = json::array();
    return out;
}

json to_json(const QRat& f) {
    QRat c = f.normalized();
    json out;
    out["num"] = laurent_terms(c.numerator());
    json den = json::array();
    for (const auto& [m, mult] : c.denominator_factors()) den.push_back(json::array({m, mult}));
    out["den"] = std::move(den);
    return out;
}

namespace {
template <class C, class F>
json exppoly_json(const ExpPolyT<C>& f, F&& coeff) {
    json out = json::array();
    for (const auto& [freq, poly] : f.terms()) {
        json group;
        json lambda = json::array();
        for (const auto& x : freq) lambda.push_back(x.str());
        group["lambda"] = std::move(lambda);
        json terms = json::array();
        for (const auto& [mono, c] : poly) terms.push_back(json::array({mono, coeff(c)}));
        group["poly"] = std::move(terms);
        out.push_back(std::move(group));
    }
    return out;
}
}  // namespace

json to_json(const ExpPoly& f) {
    return exppoly_json(f, [](const Rational& c) { return to_json(c); });
}

json to_json(const QRatExpPoly& f) {
    return exppoly_json(f, [](const QRat& c) { return to_json(c); });
}

ExpPoly exppoly_from_json(const json& j, int nvar) {
    ExpPoly f = ExpPoly::zero(nvar);
    for (const auto& group : j) {
        Freq freq;
        for (const auto& x : group.at("lambda"))
            freq.push_back(Rational::parse(x.get<std::string>()));
        for (const auto& term : group.at("poly")) {
            Mono mono = term.at(0).get<Mono>();
            f.add_term(freq, mono, Rational::parse(term.at(1).get<std::string>()));
        }
    }
    return f;
}

json shift_to_json(const BigShift& s) {
    json out;
    out["rank"] = s.rank;
    out["picard_rank"] = s.picard_rank;
    out["cutoff"] = s.cutoff;
    json per = json::array();
    for (int i = 0; i < s.picard_rank; ++i) {
        json entries = json::array();
        for (const auto& [d, ls] : s.layers[static_cast<size_t>(i)]) {
            json e;
            e["d"] = d.d;
            json layers = json::array();
            for (const auto& m : ls) layers.push_back(to_json(m));
            e["layers"] = std::move(layers);
            entries.push_back(std::move(e));
        }
        per.push_back(std::move(entries));
    }
    out["layers"] = std::move(per);
    return out;
}

BigShift shift_from_json(const json& j) {
    BigShift s;
    s.rank = j.at("rank").get<int>();
    s.picard_rank = j.at("picard_rank").get<int>();
    s.cutoff = j.at("cutoff").get<int>();
    int nv = s.rank - 1;
    s.layers.assign(static_cast<size_t>(s.picard_rank), {});
    for (int i = 0; i < s.picard_rank; ++i)
        for (const auto& e : j.at("layers").at(static_cast<size_t>(i))) {
            Degree d(e.at("d").get<std::vector<int>>());
            std::vector<ExpMatrix> ls;
            for (const auto& lm : e.at("layers")) {
                int rows = static_cast<int>(lm.size());
                ExpMatrix m(rows, rows, ExpPoly::zero(nv));
                for (int a = 0; a < rows; ++a)
                    for (int b = 0; b < rows; ++b)
                        m(a, b) = exppoly_from_json(
                            lm.at(static_cast<size_t>(a)).at(static_cast<size_t>(b)), nv);
                ls.push_back(std::move(m));
            }
            s.layers[static_cast<size_t>(i)][d] = std::move(ls);
        }
    return s;
}

}  // namespace qk
