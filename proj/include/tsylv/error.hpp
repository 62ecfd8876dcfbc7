#pragma once

#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tsylv {

/// Short human-readable rendering of a real for messages.
inline std::string format_real(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

enum class ErrorKind {
  DimensionMismatch,
  ShapeError,
  NonFiniteEntry,
  SingularMatrix,
  NoConvergence,
  RankDeficient,
  NotReciprocalFree,
  InconsistentS,
  BadLeftInverse,
  SingularA,
  GenerationFailure,
  ParseError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotReciprocalFree: return "NotReciprocalFree";
    case ErrorKind::InconsistentS: return "InconsistentS";
    case ErrorKind::BadLeftInverse: return "BadLeftInverse";
    case ErrorKind::SingularA: return "SingularA";
    case ErrorKind::GenerationFailure: return "GenerationFailure";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A pair (i, j) of spectrum entries whose product is numerically 1.
struct ReciprocalWitness {
  std::size_t i = 0;
  std::size_t j = 0;
  std::complex<double> lambda_i;
  std::complex<double> lambda_j;
};

class NotReciprocalFreeError : public Error {
 public:
  NotReciprocalFreeError(const ReciprocalWitness& witness, double margin, const std::string& what)
      : Error(ErrorKind::NotReciprocalFree, what), witness_(witness), margin_(margin) {}

  const ReciprocalWitness& witness() const noexcept { return witness_; }
  double margin() const noexcept { return margin_; }

 private:
  ReciprocalWitness witness_;
  double margin_;
};

}  // namespace tsylv
