// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nvsil {

// Precondition violations are reported as std::invalid_argument.

/// A computation was well-posed but produced no usable answer
/// (empty photon streams, a fit that cannot converge, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FitError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nvsil
