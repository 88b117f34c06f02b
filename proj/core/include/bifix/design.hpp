#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bifix/model.hpp"

namespace bifix {
namespace design {

enum class Objective { MinMean, MinVariance, Lexicographic };
enum class Constraint { None, BifixFree, CrossBifixFree };

/// Search request for synchronization-marker sets. Guards keep the
/// exhaustive search at desk scale; exceeding one raises TooLarge.
struct DesignQuery {
  int alphabet_size = 2;
  int length = 3;
  int set_size = 1;
  std::vector<double> probs;  ///< positional over the default labels
  Objective objective = Objective::MinMean;
  Constraint constraint = Constraint::CrossBifixFree;
  int top_k = 10;

  long long max_candidates = 1LL << 20;  ///< L^N bound
  long long max_pairs = 8'000'000;       ///< candidate-pair bound (set search)
  long long max_sets = 1'000'000;        ///< evaluated-set bound
};

struct RankedSet {
  std::vector<std::vector<int>> sequences;
  double mean_tests = 0;
  double variance = 0;
  bool cross_bifix_free = false;
};

struct RankResult {
  std::vector<RankedSet> sets;
  std::vector<std::size_t> failed;  ///< candidate indices excluded (singular systems)
};

/// "0".."9", "a".."z" for L <= 36, "s<i>" beyond.
std::vector<std::string> default_labels(int alphabet_size);

/// All bifix-free sequences of the given length, lexicographically ordered.
std::vector<std::vector<int>> enumerate_bifix_free(int alphabet_size, int length);

/// Exhaustive search over M-subsets of the bifix-free candidates whose
/// pairwise overlaps all vanish (clique enumeration on the compatibility
/// graph). Expected duration for such sets needs only the set probability.
/// Throws NoFeasibleSet when no cross-bifix-free M-set exists.
std::vector<RankedSet> search_cross_bifix_free_sets(const DesignQuery& query);

/// Evaluates the exact mean and variance of each candidate problem and
/// sorts by the objective (deterministic tie-breaking by sequence order).
RankResult rank_sets(const std::vector<Problem>& candidates, Objective objective);

/// Dispatches a query on its constraint; the cross-bifix-free path uses
/// search_cross_bifix_free_sets, the others rank exhaustively enumerated
/// candidate sets.
std::vector<RankedSet> run_design(const DesignQuery& query);

}  // namespace design
}  // namespace bifix
