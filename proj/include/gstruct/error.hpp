#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gstruct {

/// Input rejected by a precondition check (arity, dimension, unknown id).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Internal inconsistency, e.g. a commutator that leaves the algebra span.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Problem too large for the desk-scale solvers.
class SizeLimitError : public InvalidArgument {
public:
    SizeLimitError(const std::string& what, std::size_t problem_size)
        : InvalidArgument(what + " (problem size " + std::to_string(problem_size) + ")"),
          problem_size_(problem_size) {}

    std::size_t problem_size() const noexcept { return problem_size_; }

private:
    std::size_t problem_size_;
};

/// A derivative was requested from a jet that does not carry enough orders.
class JetOrderError : public InvalidArgument {
public:
    explicit JetOrderError(int required)
        : InvalidArgument("insufficient jet order: required >= " + std::to_string(required)),
          required_(required) {}

    int required_order() const noexcept { return required_; }

private:
    int required_;
};

}  // namespace gstruct
