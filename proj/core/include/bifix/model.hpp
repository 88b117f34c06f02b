#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bifix/errors.hpp"
#include "bifix/rational.hpp"

namespace bifix {

/// Source alphabet: L distinct labels with their i.i.d. symbol probabilities.
/// `exact_probs`, when present, carries the same distribution as exact
/// rationals summing to one; it is required by the exact numeric mode.
struct SymbolDistribution {
  std::vector<std::string> labels;
  std::vector<double> probs;
  std::optional<std::vector<Rational>> exact_probs;

  int size() const { return static_cast<int>(labels.size()); }
};

/// A validated search problem: the alphabet plus M distinct target sequences
/// of common length N, stored as index lists into the alphabet. Immutable
/// after construction; safe to share across threads.
class Problem {
 public:
  /// Validates raw inputs (floating-point mode). Sequences are given as label
  /// lists; throws ValidationError on any malformed input.
  static Problem validate(std::vector<std::string> symbols,
                          std::vector<double> probs,
                          const std::vector<std::vector<std::string>>& sequences);

  /// Validates raw inputs with exact rational probabilities. The sum must be
  /// exactly one. Doubles are derived for the floating-point pipeline.
  static Problem validate_exact(std::vector<std::string> symbols,
                                std::vector<Rational> probs,
                                const std::vector<std::vector<std::string>>& sequences);

  /// Assembles a problem from an existing distribution and index-encoded
  /// sequences (designer path). Applies the same invariant checks.
  static Problem from_indices(SymbolDistribution dist,
                              std::vector<std::vector<int>> sequences);

  const SymbolDistribution& dist() const { return dist_; }
  const std::vector<std::vector<int>>& sequences() const { return sequences_; }
  const std::vector<int>& sequence(int j) const { return sequences_[j]; }

  int alphabet_size() const { return dist_.size(); }
  int num_sequences() const { return static_cast<int>(sequences_.size()); }
  int sequence_length() const { return static_cast<int>(sequences_[0].size()); }

  bool has_exact_probs() const { return dist_.exact_probs.has_value(); }

  /// Exact probabilities: stored ones if present, otherwise derived from the
  /// doubles (every double is an exact dyadic rational). Throws
  /// ValidationError{BadDistribution} if the derived values do not sum to
  /// exactly one; specify rational probabilities in that case.
  std::vector<Rational> exact_probs() const;

  /// Probabilities as the requested scalar type (double or Rational).
  template <typename Scalar>
  std::vector<Scalar> probs_as() const;

  /// Render a sequence back to its labels (single-char labels concatenate).
  std::string sequence_label(int j) const;

 private:
  Problem(SymbolDistribution dist, std::vector<std::vector<int>> sequences)
      : dist_(std::move(dist)), sequences_(std::move(sequences)) {}

  SymbolDistribution dist_;
  std::vector<std::vector<int>> sequences_;
};

/// Probability of sequence j (0-based): the product of its symbol
/// probabilities. Equals the longest tail probability.
template <typename Scalar>
Scalar sequence_probability(const Problem& problem, int j);

template <>
inline std::vector<double> Problem::probs_as<double>() const {
  return dist_.probs;
}
template <>
inline std::vector<Rational> Problem::probs_as<Rational>() const {
  return exact_probs();
}

template <typename Scalar>
Scalar sequence_probability(const Problem& problem, int j) {
  const auto probs = problem.probs_as<Scalar>();
  Scalar product(1);
  for (int symbol : problem.sequence(j)) product *= probs[symbol];
  return product;
}

}  // namespace bifix
