#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bifix/exact.hpp"
#include "bifix/linalg.hpp"
#include "bifix/model.hpp"

// Independent ground truth for the analytical module: a deterministic prefix
// automaton driving an absorbing-chain computation, literal stream
// enumeration in exact arithmetic, and a seeded Monte Carlo simulator. These
// paths share no formulas with bifix/exact.hpp beyond the problem itself.

namespace bifix {
namespace oracle {

/// Deterministic automaton over the proper prefixes of the sequence set.
/// Feeding a stream from the start state reaches an accepting completion at
/// exactly the symbol position where the first sequence occurrence ends.
struct MatchAutomaton {
  int start = 0;
  std::vector<std::vector<int>> prefixes;    ///< the string each state stands for
  std::vector<std::vector<int>> next;        ///< next[u][s]; -1 on accepting pairs
  std::vector<std::vector<int>> accept_seq;  ///< sequence completed by (u, s); -1 otherwise

  int num_states() const { return static_cast<int>(prefixes.size()); }
};

/// Exact hitting-time and absorption statistics from the chain.
struct OracleReport {
  double mean_tests = 0;
  double second_moment = 0;
  double variance = 0;
  std::vector<double> absorption;     ///< per-sequence termination probability
  std::vector<double> partial_means;  ///< per-sequence sum of k * Pr_i{k}
};

/// Empirical statistics from seeded simulation, with standard errors.
struct SimulationReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double mean_tests = 0;
  double mean_stderr = 0;
  double variance = 0;
  double second_moment = 0;
  std::vector<double> absorption;
  std::vector<double> absorption_stderr;
  std::vector<double> partial_means;
  std::vector<double> pmf;  ///< histogram for k <= requested k_max (k-indexed, slot 0 unused)
};

/// Builds the prefix automaton. State count is at most M(N-1) + 1.
MatchAutomaton build_automaton(const Problem& problem);

/// Transition matrix over transient states and per-sequence absorption
/// columns, in the requested scalar type.
template <typename Scalar>
struct ChainMatrices {
  Matrix<Scalar> transitions;  ///< Q: state x state
  Matrix<Scalar> absorbing;    ///< R: state x sequence
};

template <typename Scalar>
ChainMatrices<Scalar> chain_matrices(const MatchAutomaton& automaton, const Problem& problem) {
  const auto probs = problem.probs_as<Scalar>();
  const int states = automaton.num_states();
  const int num_seq = problem.num_sequences();
  ChainMatrices<Scalar> out{Matrix<Scalar>(states, states), Matrix<Scalar>(states, num_seq)};
  for (int u = 0; u < states; ++u) {
    for (int s = 0; s < problem.alphabet_size(); ++s) {
      if (int j = automaton.accept_seq[u][s]; j >= 0) {
        out.absorbing(u, j) += probs[s];
      } else {
        out.transitions(u, automaton.next[u][s]) += probs[s];
      }
    }
  }
  return out;
}

/// Distribution of the first-success test index obtained by iterating the
/// transient probability row vector. Test k succeeds iff absorption occurs
/// at symbol position N + k - 1.
template <typename Scalar>
SearchDistribution<Scalar> chain_distribution(const MatchAutomaton& automaton,
                                              const Problem& problem, int k_max,
                                              double tail_tol = kDefaultTailTolerance) {
  if (k_max < 1) throw std::invalid_argument("chain_distribution: k_max must be >= 1");
  const auto chain = chain_matrices<Scalar>(automaton, problem);
  const int states = automaton.num_states();
  const int num_seq = problem.num_sequences();
  const int length = problem.sequence_length();

  std::vector<Scalar> row(states, Scalar(0));
  row[automaton.start] = Scalar(1);
  const auto step = [&] {
    std::vector<Scalar> next(states, Scalar(0));
    for (int u = 0; u < states; ++u) {
      if (row[u] == Scalar(0)) continue;
      for (int v = 0; v < states; ++v) {
        if (chain.transitions(u, v) != Scalar(0)) next[v] += row[u] * chain.transitions(u, v);
      }
    }
    row = std::move(next);
  };
  // No absorption is possible while the first N - 1 symbols are consumed.
  for (int t = 0; t < length - 1; ++t) step();

  auto dist = detail::make_empty_distribution<Scalar>(num_seq);
  for (int k = 1; k <= k_max; ++k) {
    Scalar total(0);
    for (int j = 0; j < num_seq; ++j) {
      Scalar mass(0);
      for (int u = 0; u < states; ++u) {
        if (chain.absorbing(u, j) != Scalar(0)) mass += row[u] * chain.absorbing(u, j);
      }
      dist.per_seq[j].push_back(mass);
      total += mass;
    }
    dist.cumulative.push_back(dist.cumulative[k - 1] + total);
    dist.total.push_back(std::move(total));
    dist.k_max = k;
    step();
  }
  dist.truncation_warning = to_double(dist.cumulative[k_max]) < 1.0 - tail_tol;
  return dist;
}

/// Exact moments and absorption split via linear solves on I - Q.
OracleReport chain_moments(const MatchAutomaton& automaton, const Problem& problem);

/// Exact per-sequence first-success probabilities for every k <= k_max,
/// obtained by walking all streams of length k + N - 1 (with first-match
/// pruning). Requires exact probabilities. The guard rejects instances with
/// L^(k+N-1) > 2^24.
struct EnumerationResult {
  int k_max = 0;
  std::vector<std::vector<Rational>> per_seq;  ///< [M][k_max + 1], slot 0 unused
  std::vector<Rational> total;                 ///< [k_max + 1]
};
EnumerationResult enumerate_first_match(const Problem& problem, int k_max);

/// Exact Pr{k}: the probability that the first success is at test k.
Rational enumerate_streams(const Problem& problem, int k);

/// Seeded Monte Carlo over the automaton. Deterministic for a fixed
/// (seed, trials) pair; per-trial generators are split from the seed by a
/// counter hash, so batched runs stay reproducible.
/// histogram_k_max > 0 additionally records the empirical pmf up to that k.
SimulationReport simulate(const Problem& problem, std::uint64_t trials, std::uint64_t seed,
                          int histogram_k_max = 0);

}  // namespace oracle
}  // namespace bifix
