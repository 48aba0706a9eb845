// Command-line front end: reconstructs genus-zero quantum K-theory data from
// small J-functions and verifies it against the embedded reference tables.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qk/json_io.hpp"
#include "qk/verify.hpp"

using namespace qk;

namespace {

struct GlobalOpts {
    std::string format = "pretty";
    std::string out;
    int threads = 1;
};

void write_output(const GlobalOpts& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream f(g.out, std::ios::binary);
        require(f.good(), "ValidationFailure", "cannot open output file " + g.out);
        f << text;
    }
}

std::vector<std::string> coordinate_names(const Target& t) {
    int nv = t.rank - 1;
    if (nv == 1) return {"t"};
    if (nv == 2) return {"t", "s"};
    std::vector<std::string> names;
    for (int i = 1; i <= nv; ++i) names.push_back("t" + std::to_string(i));
    return names;
}

std::string degree_label(const Degree& d) {
    std::ostringstream os;
    if (d.rank() == 1) {
        os << "Q^" << d[0];
    } else {
        bool first = true;
        if (d.is_zero()) return "Q^0";
        for (int i = 0; i < d.rank(); ++i) {
            if (d[i] == 0) continue;
            if (!first) os << "*";
            first = false;
            os << "Q" << i + 1;
            if (d[i] > 1) os << "^" << d[i];
        }
    }
    return os.str();
}

template <class C, class Str>
std::string series_pretty(const NovikovSeries<Matrix<C>>& s, Str&& str) {
    std::ostringstream os;
    for (const auto& [d, m] : s.terms()) {
        os << degree_label(d) << ":\n";
        for (int i = 0; i < m.rows(); ++i) {
            os << "  [";
            for (int j = 0; j < m.cols(); ++j) {
                if (j) os << ", ";
                os << str(m(i, j));
            }
            os << "]\n";
        }
    }
    return os.str();
}

template <class C, class Str>
std::string series_csv(const NovikovSeries<Matrix<C>>& s, Str&& str) {
    std::ostringstream os;
    os << "degree,row,col,value\n";
    for (const auto& [d, m] : s.terms())
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) {
                if (m(i, j).is_zero()) continue;
                os << degree_label(d) << "," << i << "," << j << ",\"" << str(m(i, j)) << "\"\n";
            }
    return os.str();
}

template <class C, class Str>
void emit_matrix_series(const GlobalOpts& g, const NovikovSeries<Matrix<C>>& s, Str&& str) {
    if (g.format == "json")
        write_output(g, series_to_json(s).dump(2));
    else if (g.format == "csv")
        write_output(g, series_csv(s, str));
    else
        write_output(g, series_pretty(s, str));
}

Degree parse_degree(const std::string& text, int r) {
    std::vector<int> comps;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) comps.push_back(std::stoi(part));
    require(static_cast<int>(comps.size()) == r, "UsageError",
            "expected " + std::to_string(r) + " degree components");
    return Degree(comps);
}

std::vector<std::pair<std::vector<Rational>, int>> parse_insertions(const Target& t,
                                                                    const std::string& text) {
    std::vector<std::pair<std::vector<Rational>, int>> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto colon = part.find(':');
        std::string label = colon == std::string::npos ? part : part.substr(0, colon);
        int count = colon == std::string::npos ? 1 : std::stoi(part.substr(colon + 1));
        out.emplace_back(t.resolve_class(label), count);
    }
    return out;
}

// Optional cache of reconstructed shift operators, keyed by target + cutoff.
std::string cache_path(const std::string& target, int qdeg) {
    const char* dir = std::getenv("QK_CACHE_DIR");
    if (!dir || !*dir) return "";
    std::string key = target + "_q" + std::to_string(qdeg);
    for (auto& c : key)
        if (c == ':' || c == '/') c = '_';
    return std::string(dir) + "/" + key + ".json";
}

TheoryState big_state(const std::string& target_name, int qdeg) {
    Target t = load_target(target_name);
    TheoryState st;
    std::string cp = cache_path(target_name, qdeg);
    bool loaded = false;
    if (!cp.empty() && std::filesystem::exists(cp)) {
        std::ifstream in(cp);
        json j = json::parse(in);
        if (j.at("cutoff").get<int>() == qdeg && j.at("rank").get<int>() == t.rank) {
            st.target = t;
            st.cutoff = qdeg;
            st.shift = shift_from_json(j);
            auto acom = st.shift.commuting(t);
            st.products = products_from_commuting(acom, t);
            loaded = true;
        }
    }
    if (!loaded) {
        auto small = small_shift_operators(birkhoff_factorize(build_M(t, qdeg)), t);
        st = reconstruct(t, small, qdeg);
        if (!cp.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(std::filesystem::path(cp).parent_path(), ec);
            std::ofstream outf(cp);
            outf << shift_to_json(st.shift).dump();
        }
    }
    fundamental_solution_T(st);
    pairing_and_potential(st);
    return st;
}

int cmd_targets(const GlobalOpts& g) {
    if (g.format == "json") {
        json out = json::array();
        for (const char* n : {"cp1", "cp2", "fl3"}) {
            Target t = load_target(n);
            json e;
            e["name"] = t.name;
            e["rank"] = t.rank;
            e["picard_rank"] = t.picard_rank;
            e["basis"] = t.basis_labels;
            out.push_back(std::move(e));
        }
        write_output(g, out.dump(2));
    } else {
        std::ostringstream os;
        os << "built-in targets:\n";
        os << "  cpn:N   projective space CP^N (any N >= 1; cp1, cp2 are shorthands)\n";
        os << "  fl3     complete flag threefold in CP^2 x CP^2\n";
        os << "  <path>  target document (JSON; see README)\n";
        write_output(g, os.str());
    }
    return 0;
}

int cmd_small(const GlobalOpts& g, const std::string& target, int qdeg, const std::string& emit) {
    Target t = load_target(target);
    FactorizationResult f = birkhoff_factorize(build_M(t, qdeg));
    auto small = small_shift_operators(f, t);
    auto lstr = [](const QLaurent& x) { return x.str(); };
    auto rstr = [](const Rational& x) { return x.str(); };
    if (emit == "A") {
        if (g.format == "json") {
            json out = json::array();
            for (int i = 0; i < t.picard_rank; ++i) out.push_back(series_to_json(small.A[i]));
            write_output(g, out.dump(2));
        } else {
            std::ostringstream all;
            for (int i = 0; i < t.picard_rank; ++i) {
                all << "# shift operator " << i + 1 << "\n";
                all << (g.format == "csv" ? series_csv(small.A[i], lstr)
                                          : series_pretty(small.A[i], lstr));
            }
            write_output(g, all.str());
        }
    } else if (emit == "products") {
        auto omega = small_products(small, t);
        if (g.format == "json") {
            json out = json::array();
            for (int a = 0; a < t.rank; ++a) out.push_back(series_to_json(omega[a]));
            write_output(g, out.dump(2));
        } else {
            std::ostringstream all;
            for (int a = 0; a < t.rank; ++a) {
                all << "# multiplication by " << t.basis_labels[a] << "\n";
                all << (g.format == "csv" ? series_csv(omega[a], rstr)
                                          : series_pretty(omega[a], rstr));
            }
            write_output(g, all.str());
        }
    } else if (emit == "pairing") {
        emit_matrix_series(g, small_pairing(f, t), rstr);
    } else if (emit == "finiteness") {
        auto rep = finiteness_report(small, t);
        if (g.format == "json") {
            json out;
            out["cutoff"] = rep.cutoff;
            out["max_degree"] = rep.max_degree;
            out["stable"] = rep.all_stable;
            json entries = json::array();
            for (const auto& e : rep.entries)
                entries.push_back(json{{"alpha", e.alpha},
                                       {"beta", e.beta},
                                       {"max_degree", e.max_degree},
                                       {"stable", e.stable}});
            out["entries"] = std::move(entries);
            write_output(g, out.dump(2));
        } else {
            std::ostringstream os;
            os << "cutoff " << rep.cutoff << ", max product degree " << rep.max_degree << ", "
               << (rep.all_stable ? "stable" : "NOT stable") << "\n";
            for (const auto& e : rep.entries)
                os << "  " << t.basis_labels[e.alpha] << " . " << t.basis_labels[e.beta]
                   << ": max degree " << e.max_degree << (e.stable ? "" : " (unstable)") << "\n";
            write_output(g, os.str());
        }
    } else if (emit == "relations") {
        // preset difference relations derived from the J-function equations
        std::vector<std::string> exprs;
        if (t.name.rfind("cpn:", 0) == 0)
            exprs.push_back("(1 - a)^" + std::to_string(t.rank) + " - Q");
        else if (t.name == "fl3")
            exprs = {"(1 - a1)^3 - Q1*(1 - a1*a2)", "(1 - a2)^3 - Q2*(1 - a1*a2)"};
        else
            fail("UsageError", "no preset relations for this target; use the relation subcommand");
        std::ostringstream os;
        json out = json::array();
        bool all = true;
        for (const auto& e : exprs) {
            bool holds = check_relation(small, t, e);
            all = all && holds;
            if (g.format == "json")
                out.push_back(json{{"relation", e}, {"holds", holds}});
            else
                os << (holds ? "holds" : "FAILS") << ": " << e << "\n";
        }
        write_output(g, g.format == "json" ? out.dump(2) : os.str());
        return all ? 0 : 1;
    } else {
        fail("UsageError", "unknown --emit for small: " + emit);
    }
    return 0;
}

int cmd_big(const GlobalOpts& g, const std::string& target, int qdeg, const std::string& emit) {
    TheoryState st = big_state(target, qdeg);
    auto names = coordinate_names(st.target);
    auto estr = [&](const ExpPoly& x) { return x.str(names); };
    auto qestr = [&](const QRatExpPoly& x) { return x.str(names); };
    if (emit == "A") {
        if (g.format == "json") {
            write_output(g, shift_to_json(st.shift).dump(2));
            return 0;
        }
        std::ostringstream os;
        for (int i = 0; i < st.target.picard_rank; ++i) {
            os << "# shift operator " << i + 1 << "\n";
            for (const auto& [d, ls] : st.shift.layers[i])
                for (size_t k = 0; k < ls.size(); ++k) {
                    if (ls[k].is_zero()) continue;
                    os << degree_label(d) << " (1-q)^" << k << ":\n";
                    for (int a = 0; a < st.target.rank; ++a) {
                        os << "  [";
                        for (int b = 0; b < st.target.rank; ++b) {
                            if (b) os << ", ";
                            os << estr(ls[k](a, b));
                        }
                        os << "]\n";
                    }
                }
        }
        write_output(g, os.str());
    } else if (emit == "products") {
        if (g.format == "json") {
            json out = json::array();
            for (int a = 0; a < st.target.rank; ++a) out.push_back(series_to_json(st.products[a]));
            write_output(g, out.dump(2));
        } else {
            std::ostringstream all;
            for (int a = 0; a < st.target.rank; ++a) {
                all << "# multiplication by " << st.target.basis_labels[a] << "\n";
                all << (g.format == "csv" ? series_csv(st.products[a], estr)
                                          : series_pretty(st.products[a], estr));
            }
            write_output(g, all.str());
        }
    } else if (emit == "T") {
        emit_matrix_series(g, st.T_big, qestr);
    } else if (emit == "pairing") {
        emit_matrix_series(g, st.G_big, estr);
    } else if (emit == "potential") {
        if (g.format == "json") {
            json out;
            out["cutoff"] = st.potential_core.cutoff();
            json terms = json::array();
            for (const auto& [d, c] : st.potential_core.terms())
                terms.push_back(json{{"d", d.d}, {"c", to_json(c)}});
            out["terms"] = std::move(terms);
            write_output(g, out.dump(2));
        } else {
            std::ostringstream os;
            for (const auto& [d, c] : st.potential_core.terms())
                os << degree_label(d) << ": " << estr(c) << "\n";
            write_output(g, os.str());
        }
    } else {
        fail("UsageError", "unknown --emit for big: " + emit);
    }
    return 0;
}

int cmd_invariants(const GlobalOpts& g, const std::string& target, const std::string& degree,
                   const std::string& insertions, const std::string& max_table, int qdeg) {
    Target probe = load_target(target);
    Degree d = parse_degree(degree, probe.picard_rank);
    int cutoff = qdeg > 0 ? qdeg : std::max(d.total(), 1);
    TheoryState st = big_state(target, cutoff);
    if (!max_table.empty()) {
        auto x = max_table.find('x');
        require(x != std::string::npos, "UsageError", "--max-table expects NxM");
        int rows = std::stoi(max_table.substr(0, x));
        int cols = std::stoi(max_table.substr(x + 1));
        auto H = st.target.resolve_class("H");
        auto pt = st.target.resolve_class("pt");
        if (g.format == "json") {
            json out = json::array();
            for (int i = 0; i < rows; ++i) {
                json row = json::array();
                for (int j = 0; j < cols; ++j)
                    row.push_back(extract_invariants(st, {{H, i}, {pt, j}}, d).str());
                out.push_back(std::move(row));
            }
            write_output(g, out.dump());
        } else {
            std::ostringstream os;
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j) {
                    if (j) os << (g.format == "csv" ? "," : "\t");
                    os << extract_invariants(st, {{H, i}, {pt, j}}, d).str();
                }
                os << "\n";
            }
            write_output(g, os.str());
        }
        return 0;
    }
    Rational v = extract_invariants(st, parse_insertions(st.target, insertions), d);
    if (g.format == "json")
        write_output(g, json{{"degree", d.d}, {"value", v.str()}}.dump());
    else
        write_output(g, v.str() + "\n");
    return 0;
}

int cmd_relation(const GlobalOpts& g, const std::string& target, int qdeg,
                 const std::string& expr) {
    Target t = load_target(target);
    auto small = small_shift_operators(birkhoff_factorize(build_M(t, qdeg)), t);
    bool holds = check_relation(small, t, expr);
    if (g.format == "json")
        write_output(g, json{{"relation", expr}, {"holds", holds}}.dump());
    else
        write_output(g, std::string(holds ? "holds" : "FAILS") + ": " + expr + "\n");
    return holds ? 0 : 1;
}

int cmd_check(const GlobalOpts& g, const std::string& target, int qdeg) {
    auto rep = run_checks(target, qdeg);
    std::ostringstream os;
    for (const auto& [name, pass] : rep.lines)
        os << (pass ? "PASS" : "FAIL") << "  " << name << "\n";
    os << (rep.ok ? "all checks passed" : "CHECKS FAILED") << " (" << target << ", cutoff "
       << qdeg << ")\n";
    write_output(g, os.str());
    return rep.ok ? 0 : 1;
}

int cmd_verify(const GlobalOpts& g, const std::string& suite, const std::string& target) {
    require(suite == "paper", "UsageError", "unknown suite '" + suite + "'");
    auto rep = verify_golden(target, g.threads);
    if (g.format == "json") {
        json out = json::array();
        for (const auto& e : rep.entries)
            out.push_back(json{{"id", e.id},
                               {"target", e.target},
                               {"citation", e.citation},
                               {"pass", e.pass},
                               {"detail", e.detail}});
        write_output(g, out.dump(2));
    } else {
        std::ostringstream os;
        for (const auto& e : rep.entries) {
            os << (e.pass ? "PASS" : "FAIL") << "  " << e.id << "  [" << e.citation << "]";
            if (!e.pass) os << "  -- " << e.detail;
            os << "\n";
        }
        os << (rep.all_pass() ? "all reference values reproduced"
                              : "REFERENCE VERIFICATION FAILED")
           << "\n";
        write_output(g, os.str());
    }
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact reconstruction of genus-zero quantum K-theory from small J-functions"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"pretty", "json", "csv"}));
    app.add_option("--out", g.out, "write output to a file");
    app.add_option("--threads", g.threads, "worker threads for verification pools");

    std::string target = "cp1", emit = "A", degree = "1", insertions, max_table, expr,
                suite = "paper";
    int qdeg = 3;

    auto* targets = app.add_subcommand("targets", "list built-in targets");
    auto* small = app.add_subcommand("small", "small (t = 0) quantum K-theory");
    small->add_option("--target", target)->required();
    small->add_option("--qdeg", qdeg, "Novikov cutoff (total degree)");
    small->add_option("--emit", emit, "A | products | pairing | finiteness | relations");
    auto* big = app.add_subcommand("big", "big quantum K-theory (t-deformation)");
    big->add_option("--target", target)->required();
    big->add_option("--qdeg", qdeg);
    big->add_option("--emit", emit, "A | products | T | pairing | potential");
    auto* inv = app.add_subcommand("invariants", "K-theoretic GW invariants");
    inv->add_option("--target", target)->required();
    inv->add_option("--degree", degree, "curve degree (comma-separated components)");
    inv->add_option("--insertions", insertions, "e.g. H:4,pt:4 (basis labels or aliases)");
    inv->add_option("--max-table", max_table, "emit an NxM table of <H^i, pt^j> values");
    inv->add_option("--qdeg", qdeg, "reconstruction cutoff (defaults to the degree)");
    auto* check = app.add_subcommand("check", "run the full invariant suite (CI gate)");
    check->add_option("--target", target)->required();
    check->add_option("--qdeg", qdeg);
    auto* verify = app.add_subcommand("verify", "reproduce the published reference values");
    verify->add_option("--suite", suite, "verification suite (paper)");
    verify->add_option("--target", target, "restrict to one target (cp1|cp2|cpn|fl3)");
    auto* relation = app.add_subcommand("relation", "test a polynomial relation in a_i, Q_i");
    relation->add_option("--target", target)->required();
    relation->add_option("--qdeg", qdeg);
    relation->add_option("--expr", expr, "e.g. \"(1 - a1)^3 - Q1*(1 - a1*a2)\"")->required();

    // global flags are accepted before or after the subcommand
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
        std::string verify_filter = verify->count("--target") ? target : "";
        if (targets->parsed()) return cmd_targets(g);
        if (small->parsed()) return cmd_small(g, target, qdeg, emit);
        if (big->parsed()) return cmd_big(g, target, qdeg, emit);
        if (inv->parsed())
            return cmd_invariants(g, target, degree, insertions, max_table,
                                  inv->count("--qdeg") ? qdeg : 0);
        if (check->parsed()) return cmd_check(g, target, qdeg);
        if (verify->parsed()) return cmd_verify(g, suite, verify_filter);
        if (relation->parsed()) return cmd_relation(g, target, qdeg, expr);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == "UsageError" ? 2 : 1;
    }
    return 2;
}
