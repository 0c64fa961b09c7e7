// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace dcg {

// Shape/index mismatches (non-square input, incompatible dimensions, ...).
struct dimension_error : std::invalid_argument {
    explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

// Inputs outside the mathematical domain of an operation.
struct domain_error : std::invalid_argument {
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// Requested feature is outside the supported scope (order > 4, non-stationary bath, ...).
struct unsupported_error : std::invalid_argument {
    explicit unsupported_error(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure failed to meet its contract (trace drift, non-convergent quadrature).
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dcg
