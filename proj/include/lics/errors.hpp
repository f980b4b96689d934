// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace lics {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed parameters, unknown names, violated preconditions.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The integrator could not meet its tolerance (step underflow, non-finite error
/// estimate). Carries the dimensionless time at which it gave up.
class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string& what, double time)
        : Error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace lics
