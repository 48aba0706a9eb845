// Acceptance suite: one criterion per section, each printed as a single
// PASS/FAIL line with its runtime. All comparisons are exact.

#include <chrono>
#include <iostream>
#include <string>

#include "qk/reference_data.hpp"
#include "qk/verify.hpp"

using namespace qk;

namespace {

int failures = 0;

void criterion(int n, const std::string& what, bool (*fn)()) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string err;
    try {
        ok = fn();
    } catch (const std::exception& e) {
        err = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << n << " [" << what << "]: " << (ok ? "PASS" : "FAIL") << "  ("
              << secs << " s)";
    if (!err.empty()) std::cout << "  -- " << err;
    std::cout << std::endl;
    if (!ok) ++failures;
}

bool c1_projective_small() {
    auto rep = verify_golden("cpn");
    if (rep.entries.size() != 5) return false;
    for (const auto& e : rep.entries)
        if (!e.pass) {
            std::cout << "  " << e.id << ": " << e.detail << "\n";
            return false;
        }
    return true;
}

bool c2_flag_small() {
    auto rep = verify_golden("fl3");
    if (rep.entries.empty()) return false;
    for (const auto& e : rep.entries)
        if (!e.pass) {
            std::cout << "  " << e.id << ": " << e.detail << "\n";
            return false;
        }
    return true;
}

bool c3_cp1_big() {
    auto rep = verify_golden("cp1");
    if (rep.entries.empty()) return false;
    for (const auto& e : rep.entries)
        if (!e.pass) {
            std::cout << "  " << e.id << ": " << e.detail << "\n";
            return false;
        }
    return true;
}

bool c4_cp2_big() {
    auto rep = verify_golden("cp2");
    if (rep.entries.size() < 4) return false;
    for (const auto& e : rep.entries)
        if (!e.pass) {
            std::cout << "  " << e.id << ": " << e.detail << "\n";
            return false;
        }
    return true;
}

bool c5_property_suite() {
    struct Spot {
        const char* target;
        int qdeg;
    };
    const Spot spots[] = {{"cp1", 4}, {"cp2", 3}, {"cpn:3", 2}, {"fl3", 2}};
    bool ok = true;
    for (const auto& s : spots) {
        auto rep = run_checks(s.target, s.qdeg);
        for (const auto& [name, pass] : rep.lines)
            if (!pass) {
                std::cout << "  " << s.target << "@" << s.qdeg << ": FAIL " << name << "\n";
                ok = false;
            }
    }
    return ok;
}

bool c6_semisimplicity() {
    {
        Target t = load_target("cp2");
        auto small = small_shift_operators(birkhoff_factorize(build_M(t, 3)), t);
        auto rep = semisimplicity_probe(small, {{Rational(1)}});
        // single Picard direction: the operator itself and the ring witness
        for (const auto& e : rep.entries)
            if (!e.squarefree) return false;
    }
    {
        Target t = load_target("fl3");
        auto small = small_shift_operators(birkhoff_factorize(build_M(t, 4)), t);
        auto rep = semisimplicity_probe(small, {{Rational(1), Rational(1)}});
        // ring-level witness (picard_index = -1) must be squarefree
        bool found = false;
        for (const auto& e : rep.entries)
            if (e.picard_index == -1) {
                found = true;
                if (!e.squarefree) return false;
            }
        if (!found) return false;
    }
    return true;
}

}  // namespace

int main() {
    criterion(1, "CP^N small theory, N = 1..5, cutoff 8", c1_projective_small);
    criterion(2, "Fl_3 small theory, cutoff 6", c2_flag_small);
    criterion(3, "CP^1 big theory to Q^4", c3_cp1_big);
    criterion(4, "CP^2 big theory to Q^3 with invariant tables", c4_cp2_big);
    criterion(5, "property suite on all targets", c5_property_suite);
    criterion(6, "semisimplicity probes at Q = 1", c6_semisimplicity);
    if (failures) {
        std::cout << failures << " criterion(s) FAILED" << std::endl;
        return 1;
    }
    std::cout << "all acceptance criteria passed" << std::endl;
    return 0;
}
