#pragma once

#include <stdexcept>
#include <string>

namespace cho {

/// Root of every error raised by the library. The CLI maps all of these to
/// exit code 2 except where noted.
class error : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

class non_positive_mass : public error
{
 public:
  using error::error;
};

/// The rescaled potential is not positive definite (4 c1 c2 <= c3^2).
class unstable_potential : public error
{
 public:
  using error::error;
};

/// Argument outside the domain of a formula, e.g. sin(theta) == 0 for the
/// number-state purities.
class domain_error : public error
{
 public:
  using error::error;
};

/// A principal index that does not satisfy i + j + k + l + r = 2 (n1 + n2).
class constraint_violation : public error
{
 public:
  using error::error;
};

class cap_exceeded : public error
{
 public:
  using error::error;
};

/// The oracle grid truncates the wavefunction; widen it.
class grid_too_narrow : public error
{
 public:
  using error::error;
};

class not_converged : public error
{
 public:
  using error::error;
};

}  // namespace cho
