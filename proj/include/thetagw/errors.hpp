#pragma once

#include <stdexcept>
#include <string>

namespace thetagw {

// Coarse error classes; the CLI maps each onto a distinct exit status.
enum class ErrorKind { Usage, Domain, Numeric, Check };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define THETAGW_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

THETAGW_DEFINE_ERROR(UsageError, Usage)
THETAGW_DEFINE_ERROR(IoError, Usage)
THETAGW_DEFINE_ERROR(DomainError, Domain)
THETAGW_DEFINE_ERROR(InconsistentParams, Domain)
THETAGW_DEFINE_ERROR(UnclassifiableError, Domain)
THETAGW_DEFINE_ERROR(RegimeError, Domain)
THETAGW_DEFINE_ERROR(TrivialLaw, Domain)
THETAGW_DEFINE_ERROR(SingularPath, Domain)
THETAGW_DEFINE_ERROR(UnsupportedForm, Domain)
THETAGW_DEFINE_ERROR(NumericError, Numeric)
THETAGW_DEFINE_ERROR(OverflowGuard, Numeric)
THETAGW_DEFINE_ERROR(TruncationError, Numeric)

#undef THETAGW_DEFINE_ERROR

}  // namespace thetagw
