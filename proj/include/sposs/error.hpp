#pragma once

#include <stdexcept>
#include <string>

namespace sposs {

enum class ErrorCode {
  kDomain,          // element outside the ground set of a view/system
  kPrecondition,    // caller violated a documented precondition
  kSizeLimit,       // exact solver refused an instance that is too large
  kKind,            // operation does not support this system/objective kind
  kNoCircuit,       // find_circuit on an element outside the span
  kInvariant,       // internal invariant violated (indicates a bug)
  kParse,           // malformed JSON / config
  kInvalidArgument, // parameter out of range
  kIo,              // file could not be read or written
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define SPOSS_DEFINE_ERROR(Name, Code)                                       \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {} \
  };

SPOSS_DEFINE_ERROR(DomainError, kDomain)
SPOSS_DEFINE_ERROR(PreconditionError, kPrecondition)
SPOSS_DEFINE_ERROR(SizeLimitError, kSizeLimit)
SPOSS_DEFINE_ERROR(KindError, kKind)
SPOSS_DEFINE_ERROR(NoCircuitError, kNoCircuit)
SPOSS_DEFINE_ERROR(InvariantError, kInvariant)
SPOSS_DEFINE_ERROR(ParseError, kParse)
SPOSS_DEFINE_ERROR(InvalidArgumentError, kInvalidArgument)
SPOSS_DEFINE_ERROR(IoError, kIo)

#undef SPOSS_DEFINE_ERROR

}  // namespace sposs
