#ifndef STREAM_ERRORS_HPP
#define STREAM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stream {

// Bad input data (CSV schema, parse, validation).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API misuse: mismatched layouts, inconsistent spec/draws pairs.
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// Numerical failure (factorization breakdown, sampler divergence storms).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace stream

#endif
