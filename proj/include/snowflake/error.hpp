#pragma once

#include <stdexcept>
#include <string>

namespace snowflake {

enum class Errc {
  TooFewPoints,
  AsymmetricEntry,
  NegativeOrZeroOffDiagonal,
  NonzeroDiagonal,
  TriangleViolation,
  NonFiniteEntry,
  AlphaOutOfRange,
  InvalidUniform,
  UncoveredPoint,
  BetaOutOfRange,
  EpsilonOutOfRange,
  ThetaOutOfRange,
  KTooSmall,
  DimensionMismatch,
  ThetaNonpositive,
  MTooLarge,
  InvalidQ,
  DegenerateQ,
  KernelNotPSD,
  UpperMinViolation,
  IoError,
  InvalidArgument,
};

const char* errc_name(Errc code);

/// All library failures surface as Error; code() identifies the violated contract.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace snowflake
