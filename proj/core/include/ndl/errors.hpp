#pragma once

#include <stdexcept>
#include <string>

namespace ndl {

/// Base class for every error thrown by this library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument value is outside its documented domain.
class parameter_error : public error {
public:
  using error::error;
};

/// An input file is syntactically malformed; message names the line.
class parse_error : public error {
public:
  using error::error;
};

/// Input data contradicts itself (e.g. duplicate pair with different weights).
class consistency_error : public error {
public:
  using error::error;
};

/// The graph lacks structure the operation needs (connectivity, walks, ...).
class structure_error : public error {
public:
  using error::error;
};

/// An exact enumeration would exceed the supported problem size.
class capacity_error : public error {
public:
  using error::error;
};

/// A rejection/resampling budget was exhausted before success.
class mixing_error : public error {
public:
  using error::error;
};

/// The chain reached a state it cannot leave.
class dead_end_error : public error {
public:
  using error::error;
};

/// A requested metric is undefined on this input (zero denominator).
class metric_error : public error {
public:
  using error::error;
};

/// The scoring method cannot be evaluated on this graph.
class method_unavailable_error : public error {
public:
  using error::error;
};

/// The run is degenerate and would produce meaningless output.
class degenerate_error : public error {
public:
  using error::error;
};

/// File system or I/O failure.
class io_error : public error {
public:
  using error::error;
};

/// A broken internal invariant; maps to exit code 2 in the CLI.
class internal_error : public error {
public:
  using error::error;
};

}  // namespace ndl
