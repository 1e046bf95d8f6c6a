#pragma once

#include <stdexcept>
#include <string>

namespace chainkit {

/// Bad input: malformed matrices, parameters outside their domain, dimension
/// mismatches. Maps to CLI exit code 2.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation could not be completed: reducible chain, search cap or
/// enumeration budget exceeded, solver residual too large. Maps to CLI exit
/// code 3.
struct ComputeError : std::runtime_error {
    explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chainkit
