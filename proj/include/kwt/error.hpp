#pragma once

#include <stdexcept>
#include <string>

namespace kwt {

// Invalid model or algorithm parameters (bad alpha, wrong warmup length, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation called on a learner state that is not ready for it.
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Input that makes a numerical result meaningless (zero MSE in a log fit, ...).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace kwt
