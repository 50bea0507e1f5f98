#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace octet {

/// Base for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define OCTET_DEFINE_ERROR(Name)                                           \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(#Name, what) {}          \
  };

OCTET_DEFINE_ERROR(FaceMismatch)
OCTET_DEFINE_ERROR(NotTriangle)
OCTET_DEFINE_ERROR(EmptyAssembly)
OCTET_DEFINE_ERROR(ParityViolation)
OCTET_DEFINE_ERROR(EmptyRegion)
OCTET_DEFINE_ERROR(UnknownRule)
OCTET_DEFINE_ERROR(UnknownFeature)
OCTET_DEFINE_ERROR(StaleMatch)
OCTET_DEFINE_ERROR(CollisionDetected)
OCTET_DEFINE_ERROR(UnsupportedRelation)
OCTET_DEFINE_ERROR(InvalidParams)
OCTET_DEFINE_ERROR(IoFailure)
OCTET_DEFINE_ERROR(NotOnLattice)

#undef OCTET_DEFINE_ERROR

/// Replay failure; `step` is the zero-based index of the offending step.
class StepFailed : public Error {
 public:
  StepFailed(std::size_t step, const Error& cause)
      : Error("StepFailed", "step " + std::to_string(step) + " failed: " + cause.what()),
        step_(step),
        cause_code_(cause.code()) {}

  std::size_t step() const noexcept { return step_; }
  const std::string& cause_code() const noexcept { return cause_code_; }

 private:
  std::size_t step_;
  std::string cause_code_;
};

/// JSON schema violation; `pointer` is a JSON-pointer-style path such as "/cells/3/species".
class SchemaViolation : public Error {
 public:
  SchemaViolation(std::string pointer, const std::string& what)
      : Error("SchemaViolation", "at " + pointer + ": " + what), pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace octet
