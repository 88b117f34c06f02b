#include "bifix/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <map>

namespace bifix {
namespace oracle {

namespace {

/// splitmix64; per-trial streams are opened at seed + counter * golden ratio,
/// which is the generator's own jump-ahead, so batches stay reproducible.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t s) : state(s) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

MatchAutomaton build_automaton(const Problem& problem) {
  const int num_seq = problem.num_sequences();
  const int length = problem.sequence_length();
  const int alphabet = problem.alphabet_size();

  // Proper prefixes, ordered by (length, lexicographic) so ids are stable.
  std::map<std::vector<int>, int> prefix_id;
  std::vector<std::vector<int>> prefixes;
  for (int len = 0; len <= length - 1; ++len) {
    for (int j = 0; j < num_seq; ++j) {
      std::vector<int> prefix(problem.sequence(j).begin(), problem.sequence(j).begin() + len);
      if (prefix_id.emplace(prefix, 0).second) prefixes.push_back(std::move(prefix));
    }
  }
  std::sort(prefixes.begin(), prefixes.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  for (std::size_t id = 0; id < prefixes.size(); ++id) prefix_id[prefixes[id]] = static_cast<int>(id);

  std::map<std::vector<int>, int> sequence_id;
  for (int j = 0; j < num_seq; ++j) sequence_id.emplace(problem.sequence(j), j);

  MatchAutomaton automaton;
  automaton.prefixes = prefixes;
  automaton.start = prefix_id.at({});
  const int states = static_cast<int>(prefixes.size());
  detail::internal_check(states <= num_seq * length + 1, "automaton state bound exceeded");
  automaton.next.assign(states, std::vector<int>(alphabet, -1));
  automaton.accept_seq.assign(states, std::vector<int>(alphabet, -1));

  std::vector<int> extended;
  for (int u = 0; u < states; ++u) {
    for (int s = 0; s < alphabet; ++s) {
      extended = prefixes[u];
      extended.push_back(s);
      if (static_cast<int>(extended.size()) == length) {
        if (auto it = sequence_id.find(extended); it != sequence_id.end()) {
          automaton.accept_seq[u][s] = it->second;
          continue;
        }
      }
      // Longest suffix of the extended string that is a proper prefix.
      const int max_keep = std::min<int>(static_cast<int>(extended.size()), length - 1);
      for (int keep = max_keep; keep >= 0; --keep) {
        std::vector<int> suffix(extended.end() - keep, extended.end());
        if (auto it = prefix_id.find(suffix); it != prefix_id.end()) {
          automaton.next[u][s] = it->second;
          break;
        }
      }
      detail::internal_check(automaton.next[u][s] >= 0, "automaton transition not total");
    }
  }
  return automaton;
}

OracleReport chain_moments(const MatchAutomaton& automaton, const Problem& problem) {
  const auto chain = chain_matrices<double>(automaton, problem);
  const int states = automaton.num_states();
  const int num_seq = problem.num_sequences();
  const int length = problem.sequence_length();
  const int start = automaton.start;

  Matrix<double> lhs(states, states);
  for (int u = 0; u < states; ++u) {
    for (int v = 0; v < states; ++v) lhs(u, v) = (u == v ? 1.0 : 0.0) - chain.transitions(u, v);
  }

  // Stage one: expected symbols-to-absorption e and absorption split B.
  Matrix<double> rhs1(states, 1 + num_seq);
  for (int u = 0; u < states; ++u) {
    rhs1(u, 0) = 1.0;
    for (int j = 0; j < num_seq; ++j) rhs1(u, 1 + j) = chain.absorbing(u, j);
  }
  const Matrix<double> sol1 = solve_linear(lhs, rhs1);

  std::vector<double> symbols_mean(states);
  for (int u = 0; u < states; ++u) symbols_mean[u] = sol1(u, 0);

  // Stage two: second moment of the symbol count and step-weighted
  // absorption; E{W^2} solves (I-Q) s = 1 + 2 Q e, and E{W 1_j} solves
  // (I-Q) U = B column-wise.
  Matrix<double> rhs2(states, 1 + num_seq);
  for (int u = 0; u < states; ++u) {
    double qe = 0.0;
    for (int v = 0; v < states; ++v) qe += chain.transitions(u, v) * symbols_mean[v];
    rhs2(u, 0) = 1.0 + 2.0 * qe;
    for (int j = 0; j < num_seq; ++j) rhs2(u, 1 + j) = sol1(u, 1 + j);
  }
  const Matrix<double> sol2 = solve_linear(lhs, rhs2);

  const double shift = length - 1;  // tests = symbols - (N - 1)
  const double mean_w = symbols_mean[start];
  const double m2_w = sol2(start, 0);

  OracleReport report;
  report.mean_tests = mean_w - shift;
  report.second_moment = m2_w - 2.0 * shift * mean_w + shift * shift;
  report.variance = variance_from_moments(report.second_moment, report.mean_tests);
  report.absorption.resize(num_seq);
  report.partial_means.resize(num_seq);
  for (int j = 0; j < num_seq; ++j) {
    report.absorption[j] = sol1(start, 1 + j);
    report.partial_means[j] = sol2(start, 1 + j) - shift * report.absorption[j];
  }
  return report;
}

namespace {

/// DFS over all streams, pruned at the first window match; products over a
/// common denominator keep the arithmetic integral. Works for any integer
/// type whose range holds D^len.
template <typename Int>
void enumerate_with(const Problem& problem, int k_max, const std::vector<Int>& numerators,
                    std::vector<std::vector<Int>>& sums) {
  const int num_seq = problem.num_sequences();
  const int length = problem.sequence_length();
  const int alphabet = problem.alphabet_size();
  const int stream_len = k_max + length - 1;
  std::vector<int> stream(stream_len);

  const auto walk = [&](auto&& self, int depth, const Int& product) -> void {
    if (depth >= length) {
      for (int j = 0; j < num_seq; ++j) {
        const auto& seq = problem.sequence(j);
        bool match = true;
        for (int t = 0; t < length && match; ++t) {
          match = stream[depth - length + t] == seq[t];
        }
        if (match) {
          sums[j][depth - length + 1] += product;
          return;  // first success: prune everything below
        }
      }
    }
    if (depth == stream_len) return;
    for (int s = 0; s < alphabet; ++s) {
      stream[depth] = s;
      self(self, depth + 1, Int(product * numerators[s]));
    }
  };
  walk(walk, 0, Int(1));
}

}  // namespace

EnumerationResult enumerate_first_match(const Problem& problem, int k_max) {
  if (k_max < 1) throw std::invalid_argument("enumerate_first_match: k_max must be >= 1");
  const int num_seq = problem.num_sequences();
  const int length = problem.sequence_length();
  const int alphabet = problem.alphabet_size();
  const int stream_len = k_max + length - 1;

  BigInt stream_count = pow(BigInt(alphabet), static_cast<unsigned>(stream_len));
  if (stream_count > (BigInt(1) << 24)) {
    throw ComputeError(ComputeCode::TooLarge,
                       "stream enumeration guard exceeded: L^(k+N-1) > 2^24");
  }

  const auto probs = problem.exact_probs();
  BigInt denom(1);
  for (const auto& p : probs) denom = lcm(denom, denominator(p));
  std::vector<BigInt> numerators(alphabet);
  for (int s = 0; s < alphabet; ++s) {
    numerators[s] = numerator(probs[s]) * (denom / denominator(probs[s]));
  }

  EnumerationResult result;
  result.k_max = k_max;
  result.per_seq.assign(num_seq, std::vector<Rational>(k_max + 1, Rational(0)));
  result.total.assign(k_max + 1, Rational(0));

  // Fast path: all products and bucket sums are bounded by D^len, so when
  // that fits in 62 bits the whole walk runs on machine integers.
  const BigInt max_value = pow(denom, static_cast<unsigned>(stream_len));
  if (max_value <= (BigInt(1) << 62)) {
    std::vector<std::uint64_t> numerators64(alphabet);
    for (int s = 0; s < alphabet; ++s) {
      numerators64[s] = numerators[s].convert_to<std::uint64_t>();
    }
    std::vector<std::vector<std::uint64_t>> sums(
        num_seq, std::vector<std::uint64_t>(k_max + 1, 0));
    enumerate_with<std::uint64_t>(problem, k_max, numerators64, sums);
    for (int j = 0; j < num_seq; ++j) {
      for (int k = 1; k <= k_max; ++k) {
        result.per_seq[j][k] =
            Rational(BigInt(sums[j][k]), pow(denom, static_cast<unsigned>(k + length - 1)));
      }
    }
  } else {
    std::vector<std::vector<BigInt>> sums(num_seq, std::vector<BigInt>(k_max + 1, BigInt(0)));
    enumerate_with<BigInt>(problem, k_max, numerators, sums);
    for (int j = 0; j < num_seq; ++j) {
      for (int k = 1; k <= k_max; ++k) {
        result.per_seq[j][k] =
            Rational(sums[j][k], pow(denom, static_cast<unsigned>(k + length - 1)));
      }
    }
  }

  for (int k = 1; k <= k_max; ++k) {
    Rational total(0);
    for (int j = 0; j < num_seq; ++j) total += result.per_seq[j][k];
    result.total[k] = std::move(total);
  }
  return result;
}

Rational enumerate_streams(const Problem& problem, int k) {
  return enumerate_first_match(problem, k).total[k];
}

SimulationReport simulate(const Problem& problem, std::uint64_t trials, std::uint64_t seed,
                          int histogram_k_max) {
  if (trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
  const auto automaton = build_automaton(problem);
  const int num_seq = problem.num_sequences();
  const int length = problem.sequence_length();
  const int alphabet = problem.alphabet_size();

  std::vector<double> cdf(problem.dist().probs.size());
  double acc = 0.0;
  for (int s = 0; s < alphabet; ++s) {
    acc += problem.dist().probs[s];
    cdf[s] = acc;
  }

  double sum_k = 0.0, sum_k2 = 0.0;
  std::vector<double> seq_count(num_seq, 0.0), seq_sum_k(num_seq, 0.0);
  std::vector<std::uint64_t> histogram(histogram_k_max > 0 ? histogram_k_max + 1 : 0, 0);

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    SplitMix64 rng(seed + 0x9E3779B97F4A7C15ULL * (trial + 1));
    int state = automaton.start;
    std::uint64_t consumed = 0;
    int found = -1;
    while (found < 0) {
      const double u = rng.uniform01();
      int symbol = alphabet - 1;
      for (int s = 0; s < alphabet; ++s) {
        if (u < cdf[s]) {
          symbol = s;
          break;
        }
      }
      ++consumed;
      if (int j = automaton.accept_seq[state][symbol]; j >= 0) {
        found = j;
      } else {
        state = automaton.next[state][symbol];
      }
    }
    const double k = static_cast<double>(consumed) - (length - 1);
    sum_k += k;
    sum_k2 += k * k;
    seq_count[found] += 1.0;
    seq_sum_k[found] += k;
    if (histogram_k_max > 0 && k <= histogram_k_max) {
      ++histogram[static_cast<std::size_t>(k)];
    }
  }

  const double n = static_cast<double>(trials);
  SimulationReport report;
  report.trials = trials;
  report.seed = seed;
  report.mean_tests = sum_k / n;
  report.second_moment = sum_k2 / n;
  report.variance =
      trials > 1 ? (sum_k2 - n * report.mean_tests * report.mean_tests) / (n - 1.0) : 0.0;
  if (report.variance < 0.0) report.variance = 0.0;  // roundoff on constant samples
  report.mean_stderr = std::sqrt(report.variance / n);
  report.absorption.resize(num_seq);
  report.absorption_stderr.resize(num_seq);
  report.partial_means.resize(num_seq);
  for (int j = 0; j < num_seq; ++j) {
    const double f = seq_count[j] / n;
    report.absorption[j] = f;
    report.absorption_stderr[j] = std::sqrt(f * (1.0 - f) / n);
    report.partial_means[j] = seq_sum_k[j] / n;
  }
  if (histogram_k_max > 0) {
    report.pmf.assign(histogram_k_max + 1, 0.0);
    for (int k = 1; k <= histogram_k_max; ++k) report.pmf[k] = histogram[k] / n;
  }
  return report;
}

}  // namespace oracle
}  // namespace bifix
