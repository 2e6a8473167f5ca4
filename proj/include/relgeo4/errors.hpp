#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace relgeo4 {

/// Number formatting for error messages.
inline std::string error_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Root of every error raised by the library. `kind()` names the concrete
/// failure so reports can carry it without RTTI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define RELGEO4_DEFINE_ERROR(Name, Base)                              \
  class Name : public Base {                                          \
   public:                                                            \
    using Base::Base;                                                 \
    const char* kind() const noexcept override { return #Name; }      \
  };

// Expression language and jet engine.
RELGEO4_DEFINE_ERROR(SyntaxError, Error)
RELGEO4_DEFINE_ERROR(UnknownIdentifier, Error)
RELGEO4_DEFINE_ERROR(DomainError, Error)
RELGEO4_DEFINE_ERROR(OrderExceeded, Error)

// Frame construction.
RELGEO4_DEFINE_ERROR(GeometryError, Error)
RELGEO4_DEFINE_ERROR(DegenerateImmersion, GeometryError)
RELGEO4_DEFINE_ERROR(SingularMetric, GeometryError)
RELGEO4_DEFINE_ERROR(VanishingGaussCurvature, GeometryError)
RELGEO4_DEFINE_ERROR(ZeroSupport, GeometryError)
RELGEO4_DEFINE_ERROR(SingularThirdForm, GeometryError)
RELGEO4_DEFINE_ERROR(SingularRelativeMetric, GeometryError)

// Parallel family.
RELGEO4_DEFINE_ERROR(OffsetSingular, GeometryError)
RELGEO4_DEFINE_ERROR(StarPrincipalUndefined, GeometryError)
RELGEO4_DEFINE_ERROR(ZeroRelativeCurvature, GeometryError)

// Closed-form relative distances.
RELGEO4_DEFINE_ERROR(PreconditionViolated, Error)
RELGEO4_DEFINE_ERROR(DegenerateW, Error)
RELGEO4_DEFINE_ERROR(NoRealRoot, Error)
RELGEO4_DEFINE_ERROR(ZeroRoot, Error)
RELGEO4_DEFINE_ERROR(NothingApplicable, Error)

// Input files.
RELGEO4_DEFINE_ERROR(FormatError, Error)

#undef RELGEO4_DEFINE_ERROR

/// A spec file that parsed but failed a geometric check on its grid.
/// `cause()` is the kind() of the underlying failure, e.g. "ZeroSupport".
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::string cause)
      : Error(what), cause_(std::move(cause)) {}
  const char* kind() const noexcept override { return "ValidationError"; }
  const std::string& cause() const noexcept { return cause_; }

 private:
  std::string cause_;
};

}  // namespace relgeo4
