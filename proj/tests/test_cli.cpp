#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qk/json_io.hpp"
#include "qk/verify.hpp"

using namespace qk;

TEST_CASE("json forms are canonical and byte-stable") {
    // QRat: {"num": [[exp, "p/q"]...], "den": [[m, mult]...]}
    QRat f = QRat(QLaurent::monomial(Rational(-1), 1), {{1, 2}});
    json j = to_json(f);
    CHECK(j.dump() == R"({"num":[[1,"-1"]],"den":[[1,2]]})");

    // raw (unnormalized) values serialize in canonical form
    QRat raw = QRat::one_minus_q_inverse(1) * QRat(QLaurent::one_minus_q(1));
    CHECK(to_json(raw).dump() == R"({"num":[[0,"1"]],"den":[]})");

    ExpPoly p = (ExpPoly(1) + ExpPoly::variable(1, 0)) *
                ExpPoly::exponential(1, Freq{Rational(-2)});
    json pj = to_json(p);
    CHECK(pj.dump() == R"([{"lambda":["-2"],"poly":[[[0],"1"],[[1],"1"]]}])");
    CHECK(exppoly_from_json(pj, 1) == p);

    NovikovSeries<Matrix<Rational>> s(2, 2, Matrix<Rational>(1, 1));
    Matrix<Rational> m(1, 1);
    m(0, 0) = Rational(3, 2);
    s.set(Degree(std::vector<int>{1, 1}), m);
    s.set(Degree(std::vector<int>{0, 2}), m);
    std::string a = series_to_json(s).dump();
    std::string b = series_to_json(s).dump();
    CHECK(a == b);
    // lexicographic degree order: (0,2) before (1,1)
    CHECK(a.find("[0,2]") < a.find("[1,1]"));
}

TEST_CASE("shift cache round-trip") {
    Target t = load_target("cp1");
    auto small = small_shift_operators(birkhoff_factorize(build_M(t, 2)), t);
    TheoryState st = reconstruct(t, small, 2);
    json j = shift_to_json(st.shift);
    BigShift back = shift_from_json(j);
    CHECK(back.rank == st.shift.rank);
    CHECK(back.cutoff == st.shift.cutoff);
    for (int i = 0; i < st.shift.picard_rank; ++i) {
        REQUIRE(back.layers[i].size() == st.shift.layers[i].size());
        for (const auto& [d, ls] : st.shift.layers[i]) {
            const auto* got = back.find(i, d);
            REQUIRE(got != nullptr);
            REQUIRE(got->size() == ls.size());
            for (size_t k = 0; k < ls.size(); ++k) CHECK((*got)[k] == ls[k]);
        }
    }
}

TEST_CASE("check suite passes for cp1") {
    auto rep = run_checks("cp1", 2);
    for (const auto& [name, pass] : rep.lines) {
        CAPTURE(name);
        CHECK(pass);
    }
    CHECK(rep.ok);
}

TEST_CASE("golden verification passes for cp1") {
    auto rep = verify_golden("cp1");
    REQUIRE(!rep.entries.empty());
    for (const auto& e : rep.entries) {
        CAPTURE(e.id);
        CAPTURE(e.detail);
        CHECK(e.pass);
    }
}

TEST_CASE("golden verification runs identically with a thread pool") {
    auto seq = verify_golden("cp1", 1);
    auto par = verify_golden("cp1", 2);
    REQUIRE(seq.entries.size() == par.entries.size());
    for (size_t i = 0; i < seq.entries.size(); ++i) {
        CHECK(seq.entries[i].id == par.entries[i].id);
        CHECK(seq.entries[i].pass == par.entries[i].pass);
    }
}
