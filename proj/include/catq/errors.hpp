#pragma once

#include <stdexcept>
#include <string>

namespace catq {

// Bad user input: out-of-range parameters, mismatched operands, a deformation
// that is undefined somewhere on the requested space. Maps to CLI exit code 1.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical guarantee did not hold: truncation tail too heavy, a series that
// failed to converge, or two independent computation paths that disagree.
// Maps to CLI exit code 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace catq
