#include "bifix/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

namespace bifix {

namespace {

constexpr double kProbSumTolerance = 1e-12;

void check_labels(const std::vector<std::string>& labels) {
  if (labels.size() < 2) {
    throw ValidationError(ValidationCode::BadDistribution,
                          "alphabet must contain at least two symbols");
  }
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      throw ValidationError(ValidationCode::BadDistribution,
                            "duplicate symbol label '" + label + "'");
    }
  }
}

std::unordered_map<std::string, int> label_index(const std::vector<std::string>& labels) {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], static_cast<int>(i));
  return index;
}

std::vector<std::vector<int>> encode_sequences(
    const std::vector<std::vector<std::string>>& sequences,
    const std::unordered_map<std::string, int>& index) {
  std::vector<std::vector<int>> encoded;
  encoded.reserve(sequences.size());
  for (const auto& seq : sequences) {
    std::vector<int> e;
    e.reserve(seq.size());
    for (const auto& label : seq) {
      auto it = index.find(label);
      if (it == index.end()) {
        throw ValidationError(ValidationCode::UnknownSymbol,
                              "sequence symbol '" + label + "' is not in the alphabet");
      }
      e.push_back(it->second);
    }
    encoded.push_back(std::move(e));
  }
  return encoded;
}

void check_sequence_set(const std::vector<std::vector<int>>& sequences,
                        const std::vector<double>& probs) {
  if (sequences.empty()) {
    throw ValidationError(ValidationCode::EmptySet, "at least one target sequence is required");
  }
  const std::size_t length = sequences[0].size();
  if (length == 0) {
    throw ValidationError(ValidationCode::EmptySet, "sequences must have length >= 1");
  }
  for (const auto& seq : sequences) {
    if (seq.size() != length) {
      throw ValidationError(ValidationCode::UnequalLengths,
                            "all sequences must have the same length");
    }
    for (int symbol : seq) {
      if (symbol < 0 || symbol >= static_cast<int>(probs.size())) {
        throw ValidationError(ValidationCode::UnknownSymbol, "sequence symbol index out of range");
      }
    }
  }
  std::set<std::vector<int>> distinct(sequences.begin(), sequences.end());
  if (distinct.size() != sequences.size()) {
    throw ValidationError(ValidationCode::DuplicateSequence,
                          "target sequences must be pairwise distinct");
  }
  bool any_reachable = false;
  for (const auto& seq : sequences) {
    bool positive = true;
    for (int symbol : seq) positive = positive && probs[symbol] > 0.0;
    any_reachable = any_reachable || positive;
  }
  if (!any_reachable) {
    throw ValidationError(ValidationCode::UnreachableSet,
                          "every sequence contains a zero-probability symbol; "
                          "the search would never terminate");
  }
}

void check_probs_float(const std::vector<double>& probs, std::size_t num_labels) {
  if (probs.size() != num_labels) {
    throw ValidationError(ValidationCode::BadDistribution,
                          "probs must have one entry per symbol");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw ValidationError(ValidationCode::BadDistribution,
                            "probabilities must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance) {
    std::ostringstream os;
    os << "probabilities sum to " << sum << ", not 1 (tolerance 1e-12); "
       << "inputs are not renormalized";
    throw ValidationError(ValidationCode::BadDistribution, os.str());
  }
}

}  // namespace

Problem Problem::validate(std::vector<std::string> symbols, std::vector<double> probs,
                          const std::vector<std::vector<std::string>>& sequences) {
  check_labels(symbols);
  check_probs_float(probs, symbols.size());
  auto encoded = encode_sequences(sequences, label_index(symbols));
  check_sequence_set(encoded, probs);
  SymbolDistribution dist{std::move(symbols), std::move(probs), std::nullopt};
  return Problem(std::move(dist), std::move(encoded));
}

Problem Problem::validate_exact(std::vector<std::string> symbols, std::vector<Rational> probs,
                                const std::vector<std::vector<std::string>>& sequences) {
  check_labels(symbols);
  if (probs.size() != symbols.size()) {
    throw ValidationError(ValidationCode::BadDistribution,
                          "probs must have one entry per symbol");
  }
  Rational sum(0);
  for (const auto& p : probs) {
    if (p < 0) {
      throw ValidationError(ValidationCode::BadDistribution,
                            "probabilities must be non-negative");
    }
    sum += p;
  }
  if (sum != 1) {
    throw ValidationError(ValidationCode::BadDistribution,
                          "exact probabilities must sum to exactly 1");
  }
  std::vector<double> doubles(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) doubles[i] = to_double(probs[i]);
  auto encoded = encode_sequences(sequences, label_index(symbols));
  check_sequence_set(encoded, doubles);
  SymbolDistribution dist{std::move(symbols), std::move(doubles), std::move(probs)};
  return Problem(std::move(dist), std::move(encoded));
}

Problem Problem::from_indices(SymbolDistribution dist, std::vector<std::vector<int>> sequences) {
  check_labels(dist.labels);
  if (dist.exact_probs) {
    Rational sum(0);
    for (const auto& p : *dist.exact_probs) {
      if (p < 0) {
        throw ValidationError(ValidationCode::BadDistribution,
                              "probabilities must be non-negative");
      }
      sum += p;
    }
    if (dist.exact_probs->size() != dist.labels.size() || sum != 1) {
      throw ValidationError(ValidationCode::BadDistribution,
                            "exact probabilities must sum to exactly 1");
    }
  }
  check_probs_float(dist.probs, dist.labels.size());
  check_sequence_set(sequences, dist.probs);
  return Problem(std::move(dist), std::move(sequences));
}

std::vector<Rational> Problem::exact_probs() const {
  if (dist_.exact_probs) return *dist_.exact_probs;
  std::vector<Rational> exact;
  exact.reserve(dist_.probs.size());
  Rational sum(0);
  for (double p : dist_.probs) {
    exact.emplace_back(p);  // doubles convert exactly
    sum += exact.back();
  }
  if (sum != 1) {
    throw ValidationError(ValidationCode::BadDistribution,
                          "probabilities are not exactly a distribution when read as "
                          "binary doubles; provide rational probabilities (e.g. \"3/10\") "
                          "for exact mode");
  }
  return exact;
}

std::string Problem::sequence_label(int j) const {
  bool single = true;
  for (const auto& label : dist_.labels) single = single && label.size() == 1;
  std::string out;
  for (std::size_t t = 0; t < sequences_[j].size(); ++t) {
    if (!single && t > 0) out += ',';
    out += dist_.labels[sequences_[j][t]];
  }
  return out;
}

}  // namespace bifix
