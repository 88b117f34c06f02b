#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bifix/model.hpp"

namespace bifix {

/// The N+1 binary M x M cross-bifix matrices of a sequence set. Entry
/// (n, i, j) is 1 iff the last n symbols of sequence i equal the first n
/// symbols of sequence j. Always: level 0 is all ones (empty overlap) and
/// level N is the identity (sequences are distinct and equal themselves).
/// Stored densely; desk-scale M and N need nothing sparser.
class CrossBifixSpectrum {
 public:
  CrossBifixSpectrum(int set_size, int length)
      : set_size_(set_size),
        length_(length),
        bits_(static_cast<std::size_t>(length + 1) * set_size * set_size, 0) {}

  int set_size() const { return set_size_; }   // M
  int length() const { return length_; }       // N

  int indicator(int n, int i, int j) const { return bits_[offset(n, i, j)]; }
  void set(int n, int i, int j, int value) { bits_[offset(n, i, j)] = static_cast<std::uint8_t>(value); }

 private:
  std::size_t offset(int n, int i, int j) const {
    return (static_cast<std::size_t>(n) * set_size_ + i) * set_size_ + j;
  }

  int set_size_;
  int length_;
  std::vector<std::uint8_t> bits_;
};

/// Suffix probabilities: r[i][n] is the probability of the last n symbols of
/// sequence i, with r[i][0] = 1. Non-increasing in n; r[i][N] is the
/// probability of the whole sequence.
template <typename Scalar>
struct TailVectors {
  std::vector<std::vector<Scalar>> r;

  const Scalar& at(int i, int n) const { return r[i][n]; }
};

/// 1 iff the last n symbols of `tail_of` equal the first n symbols of
/// `head_of` (plain overlap comparison; n = 0 matches trivially).
int overlap_indicator(std::span<const int> tail_of, std::span<const int> head_of, int n);

/// True iff the sequence has no proper bifix: no n in [1, N-1] where prefix
/// and suffix of length n coincide.
bool is_bifix_free(std::span<const int> sequence);

/// Cross-bifix indicator of a problem's sequences i, j (0-based) at overlap
/// length n in [0, N].
int cross_bifix_indicator(const Problem& problem, int i, int j, int n);

CrossBifixSpectrum build_spectrum(const Problem& problem);

/// True iff every indicator vanishes for 1 <= n <= N-1 (all i, j): the set is
/// bifix-free (M = 1) or cross-bifix-free (M > 1).
bool is_cross_bifix_free(const CrossBifixSpectrum& spectrum);

template <typename Scalar>
TailVectors<Scalar> build_tail_vectors(const Problem& problem) {
  const auto probs = problem.probs_as<Scalar>();
  const int num_seq = problem.num_sequences();
  const int length = problem.sequence_length();
  TailVectors<Scalar> tails;
  tails.r.assign(num_seq, std::vector<Scalar>(length + 1));
  for (int i = 0; i < num_seq; ++i) {
    const auto& seq = problem.sequence(i);
    tails.r[i][0] = Scalar(1);
    // Tail of length n starts at position N-n (0-based).
    for (int n = 1; n <= length; ++n) {
      tails.r[i][n] = tails.r[i][n - 1] * probs[seq[length - n]];
    }
  }
  return tails;
}

}  // namespace bifix
