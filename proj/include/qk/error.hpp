#pragma once

#include <stdexcept>
#include <string>

namespace qk {

// All library failures carry a stable machine-readable code next to the
// human-readable message, so callers (and the CLI) can branch on `code`.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, const char* code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace qk
