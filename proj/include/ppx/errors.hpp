#pragma once

#include <stdexcept>
#include <string>

namespace ppx {

// Invalid model description: bad parameters, inconsistent windows, malformed
// manifests.  Maps to CLI exit code 1.
class SpecError : public std::runtime_error {
public:
    explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric guard tripped: non-convergent quadrature, overflow risk, expected
// counts beyond the safety cap.  Maps to CLI exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ppx
