#pragma once

#include <stdexcept>
#include <string>

namespace quagd {

/// Malformed or inconsistent configuration (bad flag, unparsable file, Δ <= 0).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A structural precondition of the algorithm does not hold: the digraph is
/// not strongly connected, the diameter bound is too small, or theory
/// parameters fall outside their admissible intervals.
class AssumptionViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace quagd
