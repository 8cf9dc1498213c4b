#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bjorling {

/// Base class for all workbench errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte position of the problem.
struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

/// Bad user input outside expression syntax: unknown catalog name,
/// invalid spec file, inconsistent grids. Maps to exit code 2.
struct InputError : Error {
    using Error::Error;
};

/// Numerical failure: quadrature non-convergence, division by zero
/// during evaluation. Maps to exit code 3.
struct NumericError : Error {
    using Error::Error;
};

/// A sqrt radicand came within epsilon_branch of zero while continuing
/// a branch along a path; the continuation is ill-defined there.
struct BranchPointError : NumericError {
    using NumericError::NumericError;
};

}  // namespace bjorling
