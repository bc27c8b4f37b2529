#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sievelab {

enum class ErrorKind {
  InvalidDegree,
  NonSquarefreeDiscriminant,
  DimensionMismatch,
  WindowTooLarge,
  RankDeficient,
  RingMismatch,
  NotCoprime,
  EmptyInput,
  NormTooLarge,
  ImproperTerm,
  UnknownCatalogEntry,
  InvalidParams,
  ModulusTooLarge,
  WrongRing,
  InvalidSchedule,
  PatternTooLarge,
  NotAdmissiblePattern,
  InsufficientTerms,
  InvalidCapacity,
  ConfigError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDegree: return "InvalidDegree";
    case ErrorKind::NonSquarefreeDiscriminant: return "NonSquarefreeDiscriminant";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::RingMismatch: return "RingMismatch";
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NormTooLarge: return "NormTooLarge";
    case ErrorKind::ImproperTerm: return "ImproperTerm";
    case ErrorKind::UnknownCatalogEntry: return "UnknownCatalogEntry";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::ModulusTooLarge: return "ModulusTooLarge";
    case ErrorKind::WrongRing: return "WrongRing";
    case ErrorKind::InvalidSchedule: return "InvalidSchedule";
    case ErrorKind::PatternTooLarge: return "PatternTooLarge";
    case ErrorKind::NotAdmissiblePattern: return "NotAdmissiblePattern";
    case ErrorKind::InsufficientTerms: return "InsufficientTerms";
    case ErrorKind::InvalidCapacity: return "InvalidCapacity";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
/// `index` holds the offending term index (or the first of a pair) when the
/// error refers to a sieve term, `index2` the second index of a pair.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, long index = 0, long index2 = 0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        index_(index),
        index2_(index2) {}

  ErrorKind kind() const noexcept { return kind_; }
  long index() const noexcept { return index_; }
  long index2() const noexcept { return index2_; }

 private:
  ErrorKind kind_;
  long index_;
  long index2_;
};

}  // namespace sievelab
