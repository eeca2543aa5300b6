#pragma once

#include <stdexcept>
#include <string>

namespace ipslab {

/// Invalid model, graph or numerical parameters.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An operation's precondition on its inputs does not hold.
struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Argument outside the mathematical domain of a function.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// An iterative method failed to converge or hit a degenerate case.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or unknown experiment configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class E>
inline void require(bool ok, const std::string& what) {
    if (!ok) throw E(what);
}

}  // namespace detail
}  // namespace ipslab
