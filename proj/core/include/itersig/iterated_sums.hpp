#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "itersig/series.hpp"
#include "itersig/tensor.hpp"

namespace itersig {

/// Direct enumeration of the iterated sum for one word over the first n
/// samples: sum over strictly increasing index tuples of the coordinate
/// products. Reference oracle, cost C(n, degree).
double brute_force_sum(const SampleSeries& series, const Word& w, std::size_t n);

/// scale_levels(state, state.count()); requires at least one consumed sample.
SignatureState normalized_signature(const SignatureState& state);

/// prod_j Q[i_j] / degree!; the ergodic limit of the normalized entry.
/// Degree-0 words give 1.
double theoretical_limit(std::span<const double> q, const Word& w);

/// Abel summation by parts: with running averages
/// sigma_r = (r+1)^{-1} sum_{q<=r} b_q, returns
/// sum_{r<n} (r+1)(a_r - a_{r+1}) sigma_r + (n+1) a_n sigma_n,
/// which equals the dot product sum a_r b_r.
double abel_summation(std::span<const double> a, std::span<const double> b);

/// Prefix trajectory of one word's iterated sum: values[m] holds the sum
/// over the first m samples, for every m = 0..n.
struct CoordinateTrack {
  Word word;
  std::vector<double> values;

  std::size_t samples() const { return values.empty() ? 0 : values.size() - 1; }

  /// Every stride-th value (always keeps m = 0), for thinned report output.
  std::vector<double> decimated(std::size_t stride) const;
};

/// One streaming pass carrying only the prefix values of w's left factors,
/// O(degree) per sample. values agrees with the full SignatureState entry
/// at every prefix length.
CoordinateTrack coordinate_track(const SampleSeries& series, const Word& w);

}  // namespace itersig
