#pragma once

#include <stdexcept>
#include <string>

namespace nwfc {

// Every failure raised by the library carries a short machine-readable code
// ("parse", "unknown_edge", "contradiction", ...) next to the prose message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class Contradiction : public Error {
public:
    explicit Contradiction(const std::string& detail) : Error("contradiction", detail) {}
};

class SubgridUnsat : public Error {
public:
    SubgridUnsat(int a, int b)
        : Error("subgrid_unsat", "sub-grid (" + std::to_string(a) + "," + std::to_string(b) +
                                     ") has no accepted solution under its boundary"),
          a(a), b(b) {}
    int a;
    int b;
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded(int a, int b)
        : Error("budget_exceeded", "sub-grid (" + std::to_string(a) + "," + std::to_string(b) +
                                       ") exhausted its step budget"),
          a(a), b(b) {}
    int a;
    int b;
};

} // namespace nwfc
