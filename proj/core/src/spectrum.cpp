#include "bifix/spectrum.hpp"

#include <stdexcept>

namespace bifix {

int overlap_indicator(std::span<const int> tail_of, std::span<const int> head_of, int n) {
  const int len_a = static_cast<int>(tail_of.size());
  for (int t = 0; t < n; ++t) {
    if (tail_of[len_a - n + t] != head_of[t]) return 0;
  }
  return 1;
}

bool is_bifix_free(std::span<const int> sequence) {
  const int length = static_cast<int>(sequence.size());
  for (int n = 1; n <= length - 1; ++n) {
    if (overlap_indicator(sequence, sequence, n)) return false;
  }
  return true;
}

int cross_bifix_indicator(const Problem& problem, int i, int j, int n) {
  const int num_seq = problem.num_sequences();
  const int length = problem.sequence_length();
  if (i < 0 || i >= num_seq || j < 0 || j >= num_seq || n < 0 || n > length) {
    throw std::out_of_range("cross_bifix_indicator: index out of bounds");
  }
  // The n = 0 and n = N defaults coincide with the plain comparison because
  // sequences are distinct and any sequence equals itself.
  return overlap_indicator(problem.sequence(i), problem.sequence(j), n);
}

CrossBifixSpectrum build_spectrum(const Problem& problem) {
  const int num_seq = problem.num_sequences();
  const int length = problem.sequence_length();
  CrossBifixSpectrum spectrum(num_seq, length);
  for (int n = 0; n <= length; ++n) {
    for (int i = 0; i < num_seq; ++i) {
      for (int j = 0; j < num_seq; ++j) {
        spectrum.set(n, i, j, overlap_indicator(problem.sequence(i), problem.sequence(j), n));
      }
    }
  }
  return spectrum;
}

bool is_cross_bifix_free(const CrossBifixSpectrum& spectrum) {
  for (int n = 1; n <= spectrum.length() - 1; ++n) {
    for (int i = 0; i < spectrum.set_size(); ++i) {
      for (int j = 0; j < spectrum.set_size(); ++j) {
        if (spectrum.indicator(n, i, j)) return false;
      }
    }
  }
  return true;
}

}  // namespace bifix
