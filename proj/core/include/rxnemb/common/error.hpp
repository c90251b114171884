#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rxnemb {

// Every recoverable failure in the library throws Error with one of these
// codes. The CLI maps ConfigError-ish codes to exit 2 and data codes to
// exit 3; tests assert on the code rather than the message text.
enum class ErrorCode {
  // chem
  UnbalancedRing,
  UnbalancedParen,
  UnknownToken,
  ValenceUnderflow,
  EmptySide,
  BondInCycle,
  NotSingleOrder,
  IndexOutOfRange,
  NoCuttableBond,
  // autodiff
  ShapeMismatch,
  AllMaskedRow,
  NotScalar,
  // encoder
  LayerCountMismatch,
  TooManyComponents,
  AllMasked,
  // pretrain
  SingleClassCorpus,
  EmptySet,
  // cluster
  ZeroVectorCosine,
  LengthMismatch,
  KTooLarge,
  TreeMatrixMismatch,
  // project
  NonConvergence,
  // viz
  CountMismatch,
  UnknownTag,
  // io / cli
  ConfigError,
  DataError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parse errors additionally carry the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& message, std::size_t offset)
      : Error(code, message + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace rxnemb
