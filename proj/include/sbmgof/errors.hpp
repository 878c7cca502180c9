#pragma once

#include <stdexcept>
#include <string>

namespace sbmgof {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (bad files, dimension mismatches,
// labels out of range, ...).  CLI maps this to exit code 2.
struct DataError : Error {
    using Error::Error;
};

// Numerical failure (non-convergence, overflow, degenerate linear algebra).
// CLI maps this to exit code 3.
struct NumericalError : Error {
    using Error::Error;
};

// The maximum-likelihood estimate does not exist for the given graph/blocks
// (sufficient statistic on the model-polytope boundary, or diverging fit).
struct MleNonexistenceError : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace sbmgof
