#include "bifix/design.hpp"

#include <algorithm>
#include <cmath>

#include "bifix/exact.hpp"
#include "bifix/spectrum.hpp"

namespace bifix {
namespace design {

namespace {

constexpr double kTieRelTolerance = 1e-12;

bool approx_equal(double a, double b) {
  return std::abs(a - b) <= kTieRelTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Objective comparison; falls back to lexicographic sequence order so the
/// output is deterministic regardless of evaluation order.
bool ranked_before(const RankedSet& a, const RankedSet& b, Objective objective) {
  const auto by = [&](double x, double y, bool& decided) {
    decided = !approx_equal(x, y);
    return x < y;
  };
  bool decided = false;
  switch (objective) {
    case Objective::MinMean:
      if (bool less = by(a.mean_tests, b.mean_tests, decided); decided) return less;
      break;
    case Objective::MinVariance:
      if (bool less = by(a.variance, b.variance, decided); decided) return less;
      break;
    case Objective::Lexicographic:
      if (bool less = by(a.mean_tests, b.mean_tests, decided); decided) return less;
      if (bool less = by(a.variance, b.variance, decided); decided) return less;
      break;
  }
  return a.sequences < b.sequences;
}

void check_query(const DesignQuery& query) {
  if (query.alphabet_size < 2 || query.length < 1 || query.set_size < 1 || query.top_k < 1) {
    throw ValidationError(ValidationCode::BadDistribution,
                          "design query requires L >= 2, N >= 1, M >= 1, top >= 1");
  }
  double sum = 0;
  for (double p : query.probs) {
    if (!std::isfinite(p) || p < 0) {
      throw ValidationError(ValidationCode::BadDistribution,
                            "probabilities must be finite and non-negative");
    }
    sum += p;
  }
  if (query.probs.size() != static_cast<std::size_t>(query.alphabet_size) ||
      std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError(ValidationCode::BadDistribution,
                          "design probs must have L entries summing to 1");
  }
}

long long candidate_space(int alphabet_size, int length, long long cap) {
  long long count = 1;
  for (int t = 0; t < length; ++t) {
    count *= alphabet_size;
    if (count > cap) return cap + 1;
  }
  return count;
}

SymbolDistribution query_distribution(const DesignQuery& query) {
  return SymbolDistribution{default_labels(query.alphabet_size), query.probs, std::nullopt};
}

Problem set_problem(const DesignQuery& query, std::vector<std::vector<int>> sequences) {
  return Problem::from_indices(query_distribution(query), std::move(sequences));
}

RankedSet evaluate_set(const DesignQuery& query, std::vector<std::vector<int>> sequences) {
  Problem problem = set_problem(query, sequences);
  const auto report = moments<double>(problem);
  RankedSet out;
  out.sequences = std::move(sequences);
  out.mean_tests = report.T;
  out.variance = report.variance;
  out.cross_bifix_free = is_cross_bifix_free(build_spectrum(problem));
  return out;
}

/// All M-subsets of [0, n), lexicographic, applied to `visit`; TooLarge past
/// the budget.
template <typename Visit>
void for_each_subset(int n, int m, long long budget, Visit&& visit) {
  std::vector<int> pick(m);
  long long produced = 0;
  const auto walk = [&](auto&& self, int depth, int from) -> void {
    if (depth == m) {
      if (++produced > budget) {
        throw ComputeError(ComputeCode::TooLarge, "candidate-set budget exceeded");
      }
      visit(pick);
      return;
    }
    for (int v = from; v < n; ++v) {
      pick[depth] = v;
      self(self, depth + 1, v + 1);
    }
  };
  walk(walk, 0, 0);
}

std::vector<RankedSet> finish_ranking(std::vector<RankedSet> sets, const DesignQuery& query) {
  std::sort(sets.begin(), sets.end(), [&](const RankedSet& a, const RankedSet& b) {
    return ranked_before(a, b, query.objective);
  });
  if (static_cast<long long>(sets.size()) > query.top_k) sets.resize(query.top_k);
  return sets;
}

}  // namespace

std::vector<std::string> default_labels(int alphabet_size) {
  static const char digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::vector<std::string> labels(alphabet_size);
  for (int i = 0; i < alphabet_size; ++i) {
    labels[i] = i < 36 ? std::string(1, digits[i]) : "s" + std::to_string(i);
  }
  return labels;
}

std::vector<std::vector<int>> enumerate_bifix_free(int alphabet_size, int length) {
  if (alphabet_size < 2 || length < 1) {
    throw ValidationError(ValidationCode::BadDistribution, "need L >= 2 and N >= 1");
  }
  if (candidate_space(alphabet_size, length, 1LL << 20) > (1LL << 20)) {
    throw ComputeError(ComputeCode::TooLarge, "candidate space L^N exceeds 2^20");
  }
  std::vector<std::vector<int>> result;
  std::vector<int> seq(length, 0);
  // Odometer with the leftmost digit most significant = lexicographic order.
  while (true) {
    if (is_bifix_free(seq)) result.push_back(seq);
    int pos = length - 1;
    while (pos >= 0 && seq[pos] == alphabet_size - 1) seq[pos--] = 0;
    if (pos < 0) break;
    ++seq[pos];
  }
  return result;
}

std::vector<RankedSet> search_cross_bifix_free_sets(const DesignQuery& query) {
  check_query(query);
  const int set_size = query.set_size;
  const auto candidates = enumerate_bifix_free(query.alphabet_size, query.length);
  const int n = static_cast<int>(candidates.size());

  if (n < set_size) {
    throw ComputeError(ComputeCode::NoFeasibleSet,
                       "fewer bifix-free sequences than the requested set size");
  }
  if (static_cast<long long>(n) * (n - 1) / 2 > query.max_pairs) {
    throw ComputeError(ComputeCode::TooLarge, "candidate-pair budget exceeded");
  }

  const int length = query.length;
  std::vector<std::vector<char>> compatible(n, std::vector<char>(n, 0));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      bool ok = true;
      for (int olap = 1; olap <= length - 1 && ok; ++olap) {
        ok = !overlap_indicator(candidates[a], candidates[b], olap) &&
             !overlap_indicator(candidates[b], candidates[a], olap);
      }
      compatible[a][b] = compatible[b][a] = ok;
    }
  }

  // Lexicographic clique enumeration over the compatibility graph.
  std::vector<std::vector<std::vector<int>>> found_sets;
  std::vector<int> chosen;
  long long produced = 0;
  const auto extend = [&](auto&& self, int from) -> void {
    if (static_cast<int>(chosen.size()) == set_size) {
      if (++produced > query.max_sets) {
        throw ComputeError(ComputeCode::TooLarge, "candidate-set budget exceeded");
      }
      std::vector<std::vector<int>> set;
      set.reserve(set_size);
      for (int id : chosen) set.push_back(candidates[id]);
      found_sets.push_back(std::move(set));
      return;
    }
    for (int v = from; v < n; ++v) {
      bool ok = true;
      for (int id : chosen) ok = ok && compatible[id][v];
      if (!ok) continue;
      chosen.push_back(v);
      self(self, v + 1);
      chosen.pop_back();
    }
  };
  extend(extend, 0);

  if (found_sets.empty()) {
    throw ComputeError(ComputeCode::NoFeasibleSet,
                       "no cross-bifix-free set of the requested size exists");
  }

  // For the mean objective the duration needs only the set probability, so
  // the expensive evaluation can wait until the survivors are known.
  std::vector<RankedSet> sets;
  sets.reserve(found_sets.size());
  if (query.objective == Objective::MinMean) {
    for (auto& sequences : found_sets) {
      Problem problem = set_problem(query, sequences);
      RankedSet entry;
      entry.sequences = std::move(sequences);
      entry.mean_tests = expected_duration<double>(problem);
      entry.cross_bifix_free = is_cross_bifix_free(build_spectrum(problem));
      detail::internal_check(entry.cross_bifix_free, "clique search produced an overlapping set");
      sets.push_back(std::move(entry));
    }
    sets = finish_ranking(std::move(sets), query);
    for (auto& entry : sets) {
      entry.variance = variance<double>(set_problem(query, entry.sequences));
    }
    return sets;
  }
  for (auto& sequences : found_sets) sets.push_back(evaluate_set(query, std::move(sequences)));
  return finish_ranking(std::move(sets), query);
}

RankResult rank_sets(const std::vector<Problem>& candidates, Objective objective) {
  RankResult result;
  for (std::size_t index = 0; index < candidates.size(); ++index) {
    try {
      const auto report = moments<double>(candidates[index]);
      RankedSet entry;
      entry.sequences = candidates[index].sequences();
      entry.mean_tests = report.T;
      entry.variance = report.variance;
      entry.cross_bifix_free = is_cross_bifix_free(build_spectrum(candidates[index]));
      result.sets.push_back(std::move(entry));
    } catch (const ComputeError& e) {
      if (e.code() != ComputeCode::SingularSystem) throw;
      result.failed.push_back(index);
    }
  }
  std::sort(result.sets.begin(), result.sets.end(),
            [&](const RankedSet& a, const RankedSet& b) { return ranked_before(a, b, objective); });
  return result;
}

std::vector<RankedSet> run_design(const DesignQuery& query) {
  check_query(query);
  if (query.constraint == Constraint::CrossBifixFree && query.set_size >= 2) {
    return search_cross_bifix_free_sets(query);
  }

  std::vector<std::vector<int>> candidates;
  if (query.constraint == Constraint::None) {
    const long long space = candidate_space(query.alphabet_size, query.length, query.max_candidates);
    if (space > query.max_candidates) {
      throw ComputeError(ComputeCode::TooLarge, "candidate space L^N exceeds the budget");
    }
    std::vector<int> seq(query.length, 0);
    while (true) {
      candidates.push_back(seq);
      int pos = query.length - 1;
      while (pos >= 0 && seq[pos] == query.alphabet_size - 1) seq[pos--] = 0;
      if (pos < 0) break;
      ++seq[pos];
    }
  } else {
    candidates = enumerate_bifix_free(query.alphabet_size, query.length);
  }
  if (static_cast<int>(candidates.size()) < query.set_size) {
    throw ComputeError(ComputeCode::NoFeasibleSet,
                       "fewer candidate sequences than the requested set size");
  }

  std::vector<Problem> problems;
  for_each_subset(static_cast<int>(candidates.size()), query.set_size, query.max_sets,
                  [&](const std::vector<int>& pick) {
                    std::vector<std::vector<int>> sequences;
                    sequences.reserve(pick.size());
                    for (int id : pick) sequences.push_back(candidates[id]);
                    problems.push_back(set_problem(query, std::move(sequences)));
                  });

  auto ranked = rank_sets(problems, query.objective);
  return finish_ranking(std::move(ranked.sets), query);
}

}  // namespace design
}  // namespace bifix
