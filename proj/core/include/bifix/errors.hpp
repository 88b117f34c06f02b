#pragma once

#include <stdexcept>
#include <string>

namespace bifix {

/// Rejection categories for problem inputs.
enum class ValidationCode {
  UnequalLengths,     ///< target sequences differ in length
  DuplicateSequence,  ///< the same sequence appears twice in the set
  BadDistribution,    ///< probabilities malformed (sum, sign, duplicate label)
  UnreachableSet,     ///< every sequence contains a zero-probability symbol
  UnknownSymbol,      ///< a sequence uses a label not in the alphabet
  EmptySet,           ///< no sequences, or sequences of length zero
  SchemaError,        ///< problem file malformed (JSON syntax or missing field)
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(ValidationCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ValidationCode code() const noexcept { return code_; }

 private:
  ValidationCode code_;
};

/// Failure categories raised while computing, on inputs that validated.
enum class ComputeCode {
  SingularSystem,          ///< degenerate linear system (degenerate sequence set)
  TooLarge,                ///< enumeration/search guard exceeded
  InsufficientTruncation,  ///< distribution tail mass above tolerance
  NegativeVariance,        ///< variance below the floating-noise floor; formula/solver bug
  NoFeasibleSet,           ///< no sequence set satisfies the design constraint
};

class ComputeError : public std::runtime_error {
 public:
  ComputeError(ComputeCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ComputeCode code() const noexcept { return code_; }

 private:
  ComputeCode code_;
};

/// Filesystem-level failures (missing or unreadable files).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const char* to_string(ValidationCode c) {
  switch (c) {
    case ValidationCode::UnequalLengths: return "UnequalLengths";
    case ValidationCode::DuplicateSequence: return "DuplicateSequence";
    case ValidationCode::BadDistribution: return "BadDistribution";
    case ValidationCode::UnreachableSet: return "UnreachableSet";
    case ValidationCode::UnknownSymbol: return "UnknownSymbol";
    case ValidationCode::EmptySet: return "EmptySet";
    case ValidationCode::SchemaError: return "SchemaError";
  }
  return "?";
}

inline const char* to_string(ComputeCode c) {
  switch (c) {
    case ComputeCode::SingularSystem: return "SingularSystem";
    case ComputeCode::TooLarge: return "TooLarge";
    case ComputeCode::InsufficientTruncation: return "InsufficientTruncation";
    case ComputeCode::NegativeVariance: return "NegativeVariance";
    case ComputeCode::NoFeasibleSet: return "NoFeasibleSet";
  }
  return "?";
}

}  // namespace bifix
