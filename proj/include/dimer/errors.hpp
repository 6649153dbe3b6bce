#pragma once

#include <stdexcept>

namespace dimer {

/// A size limit or enumeration budget was exceeded. The CLI maps this to
/// exit code 3.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal cross-check failed: interpolation hold-out mismatch,
/// fixed-point residual, a kernel outside its expected 1/d form, ...
/// The CLI maps this to exit code 4.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dimer
