#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bifix/linalg.hpp"
#include "bifix/model.hpp"
#include "bifix/spectrum.hpp"

// Exact statistics of the sliding-window search: the distribution of the
// number of tests to the first hit and its closed-form moments. The math is
// documented in docs/math.md; the code follows its conventions (tests are
// 1-based k, overlap lengths n run 0..N, arrays are 0-based).

namespace bifix {

inline constexpr double kDefaultTailTolerance = 1e-9;
inline constexpr int kDefaultTestCap = 10'000'000;

/// Distribution of the first-success test index, truncated at k_max.
/// Entries are 1-based in k: slot 0 of every vector is unused (zero) so the
/// code reads like the math. per_seq[j][k] is the probability that the
/// search ends at test k by finding sequence j.
template <typename Scalar>
struct SearchDistribution {
  int k_max = 0;
  bool truncation_warning = false;
  std::vector<std::vector<Scalar>> per_seq;
  std::vector<Scalar> total;
  std::vector<Scalar> cumulative;

  const Scalar& per_seq_at(int j, int k) const { return per_seq[j][k]; }
  const Scalar& total_at(int k) const { return total[k]; }
  const Scalar& cumulative_at(int k) const { return cumulative[k]; }
};

/// First and second moment closed forms plus the termination split.
template <typename Scalar>
struct MomentReport {
  Scalar T;              ///< expected number of tests
  Scalar second_moment;  ///< E{k^2}
  Scalar variance;
  std::vector<Scalar> split;          ///< S_i: probability of ending on sequence i
  std::vector<Scalar> partial_means;  ///< T_i = sum_k k * Pr_i{k}
  Matrix<Scalar> C;
  Matrix<Scalar> W;
};

/// The reduced linear systems behind the split/partial-mean solves:
/// A has M-1 rows; A S^T = 0 and A T^T = B, each closed by a normalization
/// row (sum of S is 1, sum of T_i is T).
template <typename Scalar>
struct SplitSystem {
  Matrix<Scalar> A;
  std::vector<Scalar> B;
};

template <typename Scalar>
struct Coefficients {
  Matrix<Scalar> C;
  Matrix<Scalar> W;
};

namespace detail {

inline void internal_check(bool ok, const char* message) {
  if (!ok) throw std::logic_error(std::string("internal invariant violated: ") + message);
}

/// Precomputed recursion weights
///   weight(m, i, j) = h_ij(N-m+1) r_j(m-1) - h_ij(N-m) r_j(m),  m = 1..N,
/// so that Pr_j{k} = sum_m sum_i weight(m, i, j) Pr_i{k-m}.
template <typename Scalar>
struct RecursionWeights {
  int num_seq = 0;
  int length = 0;
  std::vector<Scalar> first;    // Pr_j{1} = r_j(N)
  std::vector<Scalar> weights;  // [(m-1) * M * M + i * M + j]

  const Scalar& at(int m, int i, int j) const {
    return weights[(static_cast<std::size_t>(m - 1) * num_seq + i) * num_seq + j];
  }

  static RecursionWeights build(const Problem& problem) {
    const int num_seq = problem.num_sequences();
    const int length = problem.sequence_length();
    const auto spectrum = build_spectrum(problem);
    const auto tails = build_tail_vectors<Scalar>(problem);

    RecursionWeights rw;
    rw.num_seq = num_seq;
    rw.length = length;
    rw.first.resize(num_seq);
    for (int j = 0; j < num_seq; ++j) rw.first[j] = tails.r[j][length];
    rw.weights.resize(static_cast<std::size_t>(length) * num_seq * num_seq);
    for (int m = 1; m <= length; ++m) {
      for (int i = 0; i < num_seq; ++i) {
        for (int j = 0; j < num_seq; ++j) {
          Scalar w(0);
          if (spectrum.indicator(length - m + 1, i, j)) w += tails.r[j][m - 1];
          if (spectrum.indicator(length - m, i, j)) w -= tails.r[j][m];
          rw.weights[(static_cast<std::size_t>(m - 1) * num_seq + i) * num_seq + j] =
              std::move(w);
        }
      }
    }
    return rw;
  }
};

/// Appends test k to a growing distribution. Slot k must not exist yet.
template <typename Scalar>
void extend_distribution(const RecursionWeights<Scalar>& rw, SearchDistribution<Scalar>& dist,
                         int k) {
  const int num_seq = rw.num_seq;
  Scalar total(0);
  for (int j = 0; j < num_seq; ++j) {
    Scalar value(0);
    if (k == 1) {
      value = rw.first[j];
    } else {
      const int m_max = std::min(rw.length, k - 1);
      for (int m = 1; m <= m_max; ++m) {
        for (int i = 0; i < num_seq; ++i) {
          value += rw.at(m, i, j) * dist.per_seq[i][k - m];
        }
      }
    }
    if constexpr (!std::is_floating_point_v<Scalar>) {
      internal_check(value >= 0, "exact-mode distribution entry is negative");
    }
    dist.per_seq[j].push_back(value);
    total += value;
  }
  // Roundoff can leave total[k] a hair below zero; the cumulative sum clamps
  // it so the CDF stays monotone. Raw entries are kept as computed.
  Scalar clamped = total;
  if constexpr (std::is_floating_point_v<Scalar>) {
    clamped = std::max(total, Scalar(0));
  }
  dist.cumulative.push_back(dist.cumulative[k - 1] + clamped);
  dist.total.push_back(std::move(total));
  dist.k_max = k;
}

template <typename Scalar>
SearchDistribution<Scalar> make_empty_distribution(int num_seq) {
  SearchDistribution<Scalar> dist;
  dist.per_seq.assign(num_seq, std::vector<Scalar>{Scalar(0)});
  dist.total.assign(1, Scalar(0));
  dist.cumulative.assign(1, Scalar(0));
  return dist;
}

}  // namespace detail

/// Distribution of the search duration up to k_max tests (k_max >= 1).
/// Cost O(k_max * M^2 * N). Sets truncation_warning when the accumulated
/// mass at k_max is still below 1 - tail_tol.
template <typename Scalar>
SearchDistribution<Scalar> distribution(const Problem& problem, int k_max,
                                        double tail_tol = kDefaultTailTolerance) {
  if (k_max < 1) throw std::invalid_argument("distribution: k_max must be >= 1");
  const auto rw = detail::RecursionWeights<Scalar>::build(problem);
  auto dist = detail::make_empty_distribution<Scalar>(problem.num_sequences());
  for (int k = 1; k <= k_max; ++k) detail::extend_distribution(rw, dist, k);
  dist.truncation_warning = to_double(dist.cumulative[k_max]) < 1.0 - tail_tol;
  return dist;
}

/// Auto-truncated distribution: extends until the CDF reaches 1 - tail_tol,
/// or the hard cap is hit (then truncation_warning is set).
template <typename Scalar>
SearchDistribution<Scalar> distribution_auto(const Problem& problem,
                                             double tail_tol = kDefaultTailTolerance,
                                             int test_cap = kDefaultTestCap) {
  const auto rw = detail::RecursionWeights<Scalar>::build(problem);
  auto dist = detail::make_empty_distribution<Scalar>(problem.num_sequences());
  const double target = 1.0 - tail_tol;
  for (int k = 1; k <= test_cap; ++k) {
    detail::extend_distribution(rw, dist, k);
    if (to_double(dist.cumulative[k]) >= target) break;
  }
  dist.truncation_warning = to_double(dist.cumulative[dist.k_max]) < target;
  return dist;
}

/// Single-sequence recursion, kept as an independently coded path for the
/// M = 1 specialization (cross-checked against the general recursion).
template <typename Scalar>
SearchDistribution<Scalar> single_sequence_distribution(const Problem& problem, int k_max,
                                                        double tail_tol = kDefaultTailTolerance) {
  if (problem.num_sequences() != 1) {
    throw std::invalid_argument("single_sequence_distribution requires M == 1");
  }
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  const int length = problem.sequence_length();
  const auto spectrum = build_spectrum(problem);
  const auto tails = build_tail_vectors<Scalar>(problem);
  const auto& r = tails.r[0];

  auto dist = detail::make_empty_distribution<Scalar>(1);
  auto& pr = dist.per_seq[0];
  for (int k = 1; k <= k_max; ++k) {
    Scalar value(0);
    if (k == 1) {
      value = r[length];
    } else {
      const int m_max = std::min(length, k - 1);
      for (int m = 1; m <= m_max; ++m) {
        Scalar w(0);
        if (spectrum.indicator(length - m + 1, 0, 0)) w += r[m - 1];
        if (spectrum.indicator(length - m, 0, 0)) w -= r[m];
        value += w * pr[k - m];
      }
    }
    pr.push_back(value);
    Scalar clamped = value;
    if constexpr (std::is_floating_point_v<Scalar>) clamped = std::max(value, Scalar(0));
    dist.cumulative.push_back(dist.cumulative[k - 1] + clamped);
    dist.total.push_back(std::move(value));
    dist.k_max = k;
  }
  dist.truncation_warning = to_double(dist.cumulative[k_max]) < 1.0 - tail_tol;
  return dist;
}

/// C_ij = sum_m r_j(m-1) h_ij(N-m+1) and W_ij with weight (2m - 1).
template <typename Scalar>
Coefficients<Scalar> coefficients(const Problem& problem) {
  const int num_seq = problem.num_sequences();
  const int length = problem.sequence_length();
  const auto spectrum = build_spectrum(problem);
  const auto tails = build_tail_vectors<Scalar>(problem);
  Coefficients<Scalar> out{Matrix<Scalar>(num_seq, num_seq), Matrix<Scalar>(num_seq, num_seq)};
  for (int i = 0; i < num_seq; ++i) {
    for (int j = 0; j < num_seq; ++j) {
      Scalar c(0), w(0);
      for (int m = 1; m <= length; ++m) {
        if (spectrum.indicator(length - m + 1, i, j)) {
          c += tails.r[j][m - 1];
          w += Scalar(2 * m - 1) * tails.r[j][m - 1];
        }
      }
      out.C(i, j) = std::move(c);
      out.W(i, j) = std::move(w);
    }
  }
  return out;
}

namespace detail {

/// Shared state of the moment pipeline; stages run in the canonical order
/// C,W -> A -> split -> mean -> B -> partial means -> second moment.
template <typename Scalar>
struct MomentPipeline {
  int num_seq;
  int length;
  bool cross_bifix_free;
  Coefficients<Scalar> coeff;
  std::vector<Scalar> seq_prob;  // r_i(N)
  Scalar pr1;                    // probability the first test succeeds

  explicit MomentPipeline(const Problem& problem)
      : num_seq(problem.num_sequences()),
        length(problem.sequence_length()),
        cross_bifix_free(is_cross_bifix_free(build_spectrum(problem))),
        coeff(coefficients<Scalar>(problem)) {
    const auto tails = build_tail_vectors<Scalar>(problem);
    seq_prob.resize(num_seq);
    pr1 = Scalar(0);
    for (int i = 0; i < num_seq; ++i) {
      seq_prob[i] = tails.r[i][length];
      pr1 += seq_prob[i];
    }
    if (num_seq > 1) {
      for (int i = 0; i < num_seq; ++i) {
        if (seq_prob[i] == Scalar(0)) {
          throw ComputeError(ComputeCode::SingularSystem,
                             "sequence " + std::to_string(i + 1) +
                                 " has zero probability; the split system is degenerate");
        }
      }
    }
  }

  /// Rows i = 0..M-2: A(i, j) = C(j, 0)/r_0(N) - C(j, i+1)/r_{i+1}(N).
  Matrix<Scalar> split_matrix() const {
    Matrix<Scalar> a(num_seq - 1, num_seq);
    for (int i = 0; i + 1 < num_seq; ++i) {
      for (int j = 0; j < num_seq; ++j) {
        a(i, j) = coeff.C(j, 0) / seq_prob[0] - coeff.C(j, i + 1) / seq_prob[i + 1];
      }
    }
    return a;
  }

  std::vector<Scalar> split() const {
    if (num_seq == 1) return {Scalar(1)};
    const Matrix<Scalar> a = split_matrix();
    Matrix<Scalar> system(num_seq, num_seq);
    std::vector<Scalar> rhs(num_seq, Scalar(0));
    for (int i = 0; i + 1 < num_seq; ++i) {
      for (int j = 0; j < num_seq; ++j) system(i, j) = a(i, j);
    }
    for (int j = 0; j < num_seq; ++j) system(num_seq - 1, j) = Scalar(1);
    rhs[num_seq - 1] = Scalar(1);
    return solve_linear(std::move(system), std::move(rhs));
  }

  Scalar mean_full(const std::vector<Scalar>& split) const {
    Scalar acc(0);
    for (int i = 0; i < num_seq; ++i) {
      Scalar row(0);
      for (int j = 0; j < num_seq; ++j) row += coeff.C(i, j);
      acc += split[i] * row;
    }
    return Scalar(1 - length) + acc / pr1;
  }

  Scalar shortcut_mean() const { return Scalar(1 - length) + Scalar(1) / pr1; }

  /// Expected duration. For (cross-)bifix-free sets the shortcut value is
  /// returned and the full formula is checked against it.
  Scalar mean(const std::vector<Scalar>& split) const {
    const Scalar full = mean_full(split);
    if (!cross_bifix_free) return full;
    const Scalar fast = shortcut_mean();
    if constexpr (std::is_floating_point_v<Scalar>) {
      internal_check(std::abs(full - fast) <= 1e-9 * std::max(1.0, std::abs(fast)),
                     "bifix-free shortcut disagrees with the full mean");
    } else {
      internal_check(full == fast, "bifix-free shortcut disagrees with the exact mean");
    }
    return fast;
  }

  std::vector<Scalar> partial_rhs(const std::vector<Scalar>& split) const {
    std::vector<Scalar> b(num_seq - 1, Scalar(0));
    for (int i = 0; i + 1 < num_seq; ++i) {
      Scalar acc(0);
      for (int j = 0; j < num_seq; ++j) {
        acc += (coeff.W(j, i + 1) / seq_prob[i + 1] - coeff.W(j, 0) / seq_prob[0]) * split[j];
      }
      b[i] = acc / Scalar(2);
    }
    return b;
  }

  std::vector<Scalar> partial(const std::vector<Scalar>& split, const Scalar& mean) const {
    if (num_seq == 1) return {mean};
    const Matrix<Scalar> a = split_matrix();
    const std::vector<Scalar> b = partial_rhs(split);
    Matrix<Scalar> system(num_seq, num_seq);
    std::vector<Scalar> rhs(num_seq);
    for (int i = 0; i + 1 < num_seq; ++i) {
      for (int j = 0; j < num_seq; ++j) system(i, j) = a(i, j);
      rhs[i] = b[i];
    }
    for (int j = 0; j < num_seq; ++j) system(num_seq - 1, j) = Scalar(1);
    rhs[num_seq - 1] = mean;
    return solve_linear(std::move(system), std::move(rhs));
  }

  Scalar second(const std::vector<Scalar>& split, const std::vector<Scalar>& partial,
                const Scalar& mean) const {
    Scalar acc(0);
    for (int i = 0; i < num_seq; ++i) {
      for (int j = 0; j < num_seq; ++j) {
        acc += Scalar(2) * partial[i] * coeff.C(i, j) + split[i] * coeff.W(i, j);
      }
    }
    return Scalar(1) - Scalar(2 * length) * mean - Scalar(length) * Scalar(length) + acc / pr1;
  }
};

}  // namespace detail

/// sigma^2 = E{k^2} - T^2, clamped to zero within floating noise (-1e-9).
/// Anything more negative signals a formula or solver bug.
template <typename Scalar>
Scalar variance_from_moments(const Scalar& second_moment, const Scalar& mean) {
  Scalar v = second_moment - mean * mean;
  if (v < Scalar(0)) {
    if constexpr (std::is_floating_point_v<Scalar>) {
      if (v >= Scalar(-1e-9)) return Scalar(0);
    }
    throw ComputeError(ComputeCode::NegativeVariance,
                       "variance is negative beyond the noise floor");
  }
  return v;
}

/// Probability that the search ends on each sequence. M = 1 returns {1}.
template <typename Scalar>
std::vector<Scalar> termination_split(const Problem& problem) {
  return detail::MomentPipeline<Scalar>(problem).split();
}

/// Expected number of tests (with the bifix-free shortcut where it applies).
template <typename Scalar>
Scalar expected_duration(const Problem& problem) {
  detail::MomentPipeline<Scalar> pipeline(problem);
  return pipeline.mean(pipeline.split());
}

/// Expected number of tests by the full formula, shortcut disabled. Exposed
/// for cross-checks; production callers want expected_duration.
template <typename Scalar>
Scalar expected_duration_full(const Problem& problem) {
  detail::MomentPipeline<Scalar> pipeline(problem);
  return pipeline.mean_full(pipeline.split());
}

/// Per-sequence mean contributions T_i given the split and the mean.
template <typename Scalar>
std::vector<Scalar> partial_means(const Problem& problem, const std::vector<Scalar>& split,
                                  const Scalar& mean) {
  return detail::MomentPipeline<Scalar>(problem).partial(split, mean);
}

template <typename Scalar>
Scalar second_moment(const Problem& problem) {
  detail::MomentPipeline<Scalar> pipeline(problem);
  const auto split = pipeline.split();
  const Scalar mean = pipeline.mean(split);
  return pipeline.second(split, pipeline.partial(split, mean), mean);
}

template <typename Scalar>
Scalar variance(const Problem& problem) {
  detail::MomentPipeline<Scalar> pipeline(problem);
  const auto split = pipeline.split();
  const Scalar mean = pipeline.mean(split);
  const Scalar m2 = pipeline.second(split, pipeline.partial(split, mean), mean);
  return variance_from_moments(m2, mean);
}

/// The A/B systems behind the split and partial-mean solves.
template <typename Scalar>
SplitSystem<Scalar> build_split_system(const Problem& problem) {
  detail::MomentPipeline<Scalar> pipeline(problem);
  if (problem.num_sequences() == 1) {
    return SplitSystem<Scalar>{Matrix<Scalar>(0, 1), {}};
  }
  return SplitSystem<Scalar>{pipeline.split_matrix(), pipeline.partial_rhs(pipeline.split())};
}

/// Full moment report in the canonical order.
template <typename Scalar>
MomentReport<Scalar> moments(const Problem& problem) {
  detail::MomentPipeline<Scalar> pipeline(problem);
  MomentReport<Scalar> report;
  report.split = pipeline.split();
  report.T = pipeline.mean(report.split);
  report.partial_means = pipeline.partial(report.split, report.T);
  report.second_moment = pipeline.second(report.split, report.partial_means, report.T);
  report.variance = variance_from_moments(report.second_moment, report.T);
  report.C = pipeline.coeff.C;
  report.W = pipeline.coeff.W;
  return report;
}

/// Truncated mean and second moment of a distribution. Lower bounds; the
/// remainder decays geometrically past any k with positive hit probability
/// per window. Requires the CDF to have reached 1 - tail_tol.
template <typename Scalar>
std::pair<Scalar, Scalar> moments_from_distribution(const SearchDistribution<Scalar>& dist,
                                                    double tail_tol = kDefaultTailTolerance) {
  if (to_double(dist.cumulative[dist.k_max]) < 1.0 - tail_tol) {
    throw ComputeError(ComputeCode::InsufficientTruncation,
                       "distribution truncated before the tail tolerance was reached");
  }
  Scalar mean(0), m2(0);
  for (int k = 1; k <= dist.k_max; ++k) {
    mean += Scalar(k) * dist.total[k];
    m2 += Scalar(k) * Scalar(k) * dist.total[k];
  }
  return {std::move(mean), std::move(m2)};
}

/// Single-sequence closed forms (independent of the pipeline above; used as
/// a secondary cross-check path). See docs/math.md for the (m - 1) weight in
/// the second moment; the m-weighted variant that also circulates fails the
/// enumeration oracle and survives only inside a regression test.
template <typename Scalar>
Scalar single_sequence_mean(const Problem& problem) {
  if (problem.num_sequences() != 1) {
    throw std::invalid_argument("single-sequence closed form requires M == 1");
  }
  const int length = problem.sequence_length();
  const auto spectrum = build_spectrum(problem);
  const auto& r = build_tail_vectors<Scalar>(problem).r[0];
  Scalar t(1 - length);
  for (int m = 1; m <= length; ++m) {
    if (spectrum.indicator(length - m + 1, 0, 0)) t += r[m - 1] / r[length];
  }
  return t;
}

template <typename Scalar>
Scalar single_sequence_second_moment(const Problem& problem) {
  if (problem.num_sequences() != 1) {
    throw std::invalid_argument("single-sequence closed form requires M == 1");
  }
  const int length = problem.sequence_length();
  const auto spectrum = build_spectrum(problem);
  const auto& r = build_tail_vectors<Scalar>(problem).r[0];
  const Scalar t = single_sequence_mean<Scalar>(problem);
  Scalar sum(0);
  for (int m = 1; m <= length; ++m) {
    if (spectrum.indicator(length - m + 1, 0, 0)) sum += Scalar(m - 1) * r[m - 1] / r[length];
  }
  return Scalar(2) * t * t - t + Scalar(length) - Scalar(length) * Scalar(length) +
         Scalar(2) * sum;
}

template <typename Scalar>
Scalar single_sequence_variance(const Problem& problem) {
  if (problem.num_sequences() != 1) {
    throw std::invalid_argument("single-sequence closed form requires M == 1");
  }
  const int length = problem.sequence_length();
  const auto spectrum = build_spectrum(problem);
  const auto& r = build_tail_vectors<Scalar>(problem).r[0];
  const Scalar t = single_sequence_mean<Scalar>(problem);
  Scalar sum(0);
  for (int m = 1; m <= length; ++m) {
    if (spectrum.indicator(length - m + 1, 0, 0)) sum += Scalar(m - 1) * r[m - 1] / r[length];
  }
  return (t - Scalar(length)) * (t + Scalar(length) - Scalar(1)) + Scalar(2) * sum;
}

}  // namespace bifix
