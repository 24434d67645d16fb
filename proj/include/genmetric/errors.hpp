#pragma once

#include <stdexcept>
#include <string>

namespace genmetric {

/// Coarse error classes; each maps to one CLI exit code.
enum class ErrorClass {
  validation = 1,
  numerical = 2,
  external = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), cls_(cls), kind_(kind) {}

  ErrorClass error_class() const noexcept { return cls_; }
  const std::string& kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(cls_); }

 private:
  ErrorClass cls_;
  std::string kind_;
};

#define GENMETRIC_DEFINE_ERROR(Name, Cls)                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(Cls, #Name, what) {}     \
  };

GENMETRIC_DEFINE_ERROR(FormatError, ErrorClass::validation)
GENMETRIC_DEFINE_ERROR(DataError, ErrorClass::validation)
GENMETRIC_DEFINE_ERROR(IoError, ErrorClass::validation)
GENMETRIC_DEFINE_ERROR(ValidationError, ErrorClass::validation)
GENMETRIC_DEFINE_ERROR(InsufficientSamples, ErrorClass::validation)
GENMETRIC_DEFINE_ERROR(DimError, ErrorClass::validation)
GENMETRIC_DEFINE_ERROR(SequenceError, ErrorClass::validation)
GENMETRIC_DEFINE_ERROR(StateError, ErrorClass::validation)
GENMETRIC_DEFINE_ERROR(NumericalError, ErrorClass::numerical)
GENMETRIC_DEFINE_ERROR(InfiniteDivergence, ErrorClass::numerical)
GENMETRIC_DEFINE_ERROR(ExternalError, ErrorClass::external)
// Every grid point failed; in practice this is an external-command failure.
GENMETRIC_DEFINE_ERROR(TuningError, ErrorClass::external)

#undef GENMETRIC_DEFINE_ERROR

}  // namespace genmetric
