#pragma once

#include <stdexcept>
#include <string>

namespace finslergeo {

/// Base of every error raised by the library. `kind()` is the stable tag
/// used in machine-readable CLI output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what) : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define FINSLERGEO_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what) : Error(#Name, what) {}         \
  };

FINSLERGEO_DEFINE_ERROR(DimensionMismatch)
FINSLERGEO_DEFINE_ERROR(NonConvexNorm)
FINSLERGEO_DEFINE_ERROR(NotPositiveDefinite)
FINSLERGEO_DEFINE_ERROR(ZeroVector)
FINSLERGEO_DEFINE_ERROR(SingularTensor)
FINSLERGEO_DEFINE_ERROR(DegenerateVector)
FINSLERGEO_DEFINE_ERROR(ChartDomain)
FINSLERGEO_DEFINE_ERROR(StepRejected)
FINSLERGEO_DEFINE_ERROR(QuadratureDivergence)
FINSLERGEO_DEFINE_ERROR(ParseError)
FINSLERGEO_DEFINE_ERROR(ValidationError)

#undef FINSLERGEO_DEFINE_ERROR

}  // namespace finslergeo
