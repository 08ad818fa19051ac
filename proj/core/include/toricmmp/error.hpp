#pragma once

#include <stdexcept>
#include <string>

namespace toricmmp {

// Every domain error carries a stable machine-readable code (e.g. "NotComplete",
// "CoefficientOutOfRange") alongside the human message; the CLI maps codes to
// exit status 2 and puts them into the report.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, const std::string& code, const std::string& message) {
    if (!condition) fail(code, message);
}

} // namespace toricmmp
