#pragma once

#include <stdexcept>
#include <string>

namespace linkdyn {

// Every failure carries a stable kind tag (SyntaxError, ValidationError, ...)
// which the CLI reports verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
    throw Error(kind, msg);
}

}  // namespace linkdyn
