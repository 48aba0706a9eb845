#pragma once

#include <string>
#include <vector>

#include "qk/bigrec.hpp"

namespace qk {

struct VerifyEntry {
    std::string id;
    std::string target;
    std::string citation;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyEntry> entries;
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
};

// Recompute every golden entry through the full pipeline and compare
// exactly against the embedded reference data. target_filter = "" runs
// everything; otherwise only entries for that target.
VerifyReport verify_golden(const std::string& target_filter = "", int threads = 1);

// The aggregated invariant/property suite behind `check`: exact structural
// identities of the reconstruction at the given cutoffs.
struct CheckReport {
    std::vector<std::pair<std::string, bool>> lines;
    bool ok = true;
    void add(const std::string& name, bool pass) {
        lines.emplace_back(name, pass);
        ok = ok && pass;
    }
};
CheckReport run_checks(const std::string& target_name, int qdeg);

}  // namespace qk
