#pragma once

#include <stdexcept>
#include <string>

namespace docwm {

enum class Errc {
  FileNotFound,
  UnsupportedFormat,
  CorruptImage,
  NotSquare,
  IoError,
  PageTooSmall,
  NoContent,
  EmptyCrop,
  InvalidCanonicalDims,
  NonDivisibleDims,
  InconsistentGrid,
  NonDyadicDims,
  ConvergenceFailure,
  NonPositiveWeight,
  DimensionMismatch,
  PayloadMismatch,
  InsufficientAC,
  NoTextureBlocks,
  SideInfoMismatch,
  ImageTooSmall,
  EmptyList,
  InvalidCut,
  HeightMismatch,
  IndexOutOfRange,
  BoundUnsatisfiable,
  ConfigError,
};

const char* errc_name(Errc c);

/// Library-wide exception; carries a machine-readable code plus context.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace docwm
