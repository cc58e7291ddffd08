#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace upsbp {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad sizes, bad domains, bad configuration.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An operator failed one of its defining properties. `residual_name`
/// identifies the first failed check (e.g. "sbp_residual").
class VerificationError : public Error {
 public:
  VerificationError(std::string residual_name, const std::string& what)
      : Error(what), residual_name_(std::move(residual_name)) {}
  const std::string& residual_name() const { return residual_name_; }

 private:
  std::string residual_name_;
};

/// A derived stencil violates the dissipation condition.
class DerivationError : public Error {
 public:
  DerivationError(double max_eigenvalue, const std::string& what)
      : Error(what), max_eigenvalue_(max_eigenvalue) {}
  double max_eigenvalue() const { return max_eigenvalue_; }

 private:
  double max_eigenvalue_;
};

/// Malformed operator coefficient file.
class TableParseError : public Error {
 public:
  using Error::Error;
};

/// A nodal state left the admissible set (negative density/pressure, NaN).
/// Location fields are filled in by the semidiscretization; -1 means unknown.
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(std::string quantity, const std::string& what)
      : Error(what), quantity_(std::move(quantity)) {}

  const std::string& quantity() const { return quantity_; }

  std::ptrdiff_t element = -1;
  std::ptrdiff_t node = -1;
  double x = 0.0;
  double y = 0.0;

 private:
  std::string quantity_;  // "density" | "pressure" | "nan"
};

/// Time integration gave up (step size underflow).
class IntegrationAbort : public Error {
 public:
  IntegrationAbort(double t, const std::string& what) : Error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

/// Eigenvalue iteration failed to converge.
class EigensolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace upsbp
