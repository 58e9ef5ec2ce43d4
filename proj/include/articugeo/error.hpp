#pragma once

#include <stdexcept>
#include <string>

namespace articugeo {

enum class ErrorCode {
  kInvalidDepth,
  kBehindCamera,
  kDimensionMismatch,
  kIncompleteState,
  kEmptyContexts,
  kMissingPriors,
  kDegenerateGeometry,
  kEmptyOverlap,
  kOutOfRange,
  kEmptyEvaluation,
  kUnknownVehicle,
  kInvalidArgument,
  kParse,
  kIo,
  kUnknownSuite,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace articugeo
