#pragma once

// Test support: convenience problem builders and a deterministic random
// problem family shared by the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bifix/model.hpp"

namespace bifix_test {

inline std::vector<std::vector<std::string>> split_sequences(
    const std::vector<std::string>& sequences) {
  std::vector<std::vector<std::string>> out;
  for (const auto& s : sequences) {
    std::vector<std::string> seq;
    for (char c : s) seq.emplace_back(1, c);
    out.push_back(std::move(seq));
  }
  return out;
}

/// Binary problem over labels "0", "1" with Pr{"1"} = p_one.
inline bifix::Problem binary_problem(double p_one, const std::vector<std::string>& sequences) {
  return bifix::Problem::validate({"0", "1"}, {1.0 - p_one, p_one}, split_sequences(sequences));
}

inline bifix::Problem binary_problem_exact(const bifix::Rational& p_one,
                                           const std::vector<std::string>& sequences) {
  return bifix::Problem::validate_exact({"0", "1"}, {bifix::Rational(1) - p_one, p_one},
                                        split_sequences(sequences));
}

inline int rand_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

struct FamilyOptions {
  int min_L = 2, max_L = 3;
  int min_N = 1, max_N = 4;
  int min_M = 1, max_M = 3;
  int max_denominator = 12;
  /// Skew N downward for L = 3 so exhaustive stream enumeration stays cheap.
  bool enumeration_weighted = false;
};

/// Random problem with exact small-denominator rational probabilities (all
/// strictly positive) and distinct sequences. Deterministic per rng state.
inline bifix::Problem random_problem(std::mt19937_64& rng, const FamilyOptions& opt) {
  const int L = rand_int(rng, opt.min_L, opt.max_L);
  int N;
  if (opt.enumeration_weighted && L >= 3) {
    // Node count of the stream walk scales as L^(k+N-1).
    const int wheel[10] = {1, 1, 1, 2, 2, 2, 3, 3, 3, 4};
    N = wheel[rand_int(rng, 0, 9)];
    N = std::min(std::max(N, opt.min_N), opt.max_N);
  } else {
    N = rand_int(rng, opt.min_N, opt.max_N);
  }
  long long space = 1;
  for (int t = 0; t < N; ++t) space *= L;
  const int M = rand_int(rng, opt.min_M, static_cast<int>(std::min<long long>(opt.max_M, space)));

  const int D = rand_int(rng, std::max(L, 4), std::max(opt.max_denominator, L + 1));
  std::vector<int> numerators(L, 1);
  for (int extra = 0; extra < D - L; ++extra) ++numerators[rand_int(rng, 0, L - 1)];

  std::set<long long> codes;
  while (static_cast<int>(codes.size()) < M) {
    codes.insert(static_cast<long long>(rng() % static_cast<std::uint64_t>(space)));
  }
  std::vector<std::vector<std::string>> sequences;
  for (long long code : codes) {
    std::vector<std::string> seq(N);
    long long c = code;
    for (int t = N - 1; t >= 0; --t) {
      seq[t] = std::to_string(c % L);
      c /= L;
    }
    sequences.push_back(std::move(seq));
  }

  std::vector<std::string> labels(L);
  std::vector<bifix::Rational> probs(L);
  for (int s = 0; s < L; ++s) {
    labels[s] = std::to_string(s);
    probs[s] = bifix::Rational(numerators[s], D);
  }
  return bifix::Problem::validate_exact(std::move(labels), std::move(probs), sequences);
}

}  // namespace bifix_test
