#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "itersig/word.hpp"

namespace itersig {

/// One dense level of the truncated tensor algebra: d^degree doubles,
/// indexed by flattened words.
class LevelTensor {
 public:
  LevelTensor() = default;
  LevelTensor(int degree, int d);

  int degree() const { return degree_; }
  int dimension() const { return d_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool all_finite() const;

 private:
  int degree_ = 0;
  int d_ = 1;
  std::vector<double> values_;
};

/// result[w.i] = T[w] * v[i-1]; degree goes up by one.
LevelTensor outer_append(const LevelTensor& t, std::span<const double> v);

/// Truncated tensor-algebra value: levels 0..depth plus the consumed
/// count (number of samples for the discrete engine, elapsed duration
/// for the continuous one). Level 0 is always the scalar 1.
///
/// Plain value type: no interior sharing, safe to move across threads,
/// single writer per state. The optional compensated mode keeps one
/// Kahan carry per entry for the streaming accumulation paths (push /
/// concat_with); one-shot constructions do not need it.
class SignatureState {
 public:
  SignatureState(int d, int depth, bool compensated = false);

  static SignatureState identity(int d, int depth, bool compensated = false);

  /// Rebuild a state from explicit levels (shape-checked, level 0 must be
  /// the scalar 1). Count is whatever the caller says it is.
  static SignatureState from_levels(int d, int depth, std::vector<LevelTensor> levels, double count);

  int dimension() const { return d_; }
  int depth() const { return depth_; }
  double count() const { return count_; }
  bool compensated() const { return compensated_; }

  /// Throws std::out_of_range for n > depth: truncation is explicit,
  /// never a silent zero.
  const LevelTensor& level(int n) const;

  /// Entry for one word (validates the word against d and depth).
  double entry(const Word& w) const;

  /// Discrete stream step: level n += level(n-1) (x) x, top degree first,
  /// so after m pushes level v is the iterated sum over strictly
  /// increasing index tuples below m. count += 1.
  void push(std::span<const double> x);

  /// Continuous stream step: right-concatenate the exact signature of a
  /// constant segment (value v held for duration h). count += h.
  void push_segment(std::span<const double> v, double h);

  /// In-place Chen concatenation: *this := *this (.) other.
  void concat_with(const SignatureState& other);

  bool all_finite() const;

 private:
  friend SignatureState scale_levels(const SignatureState& s, double t);
  friend SignatureState tensor_exp(std::span<const double> v, double h, int depth);

  void accumulate(int level, std::size_t idx, double term);

  int d_ = 1;
  int depth_ = 1;
  double count_ = 0.0;
  bool compensated_ = false;
  std::vector<LevelTensor> levels_;
  std::vector<std::vector<double>> carry_;  // per-entry Kahan carries, empty unless compensated
};

/// Chen concatenation product: level n = sum_{a+b=n} s.level(a) (x) e.level(b),
/// truncated at the common depth. Counts/durations add.
SignatureState chen_concat(const SignatureState& s, const SignatureState& e);

/// Exact signature of a constant path segment: level n = (v*h)^(x)n / n!.
SignatureState tensor_exp(std::span<const double> v, double h, int depth);

/// Level n multiplied by t^(-n); count unchanged. t must be positive.
SignatureState scale_levels(const SignatureState& s, double t);

}  // namespace itersig
