#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace itersig {

/// Discrete stationary samples xi(0), xi(1), ... in R^d, stored row-major.
/// Generated series carry the model's exact mean and sup-norm bound.
struct SampleSeries {
  int d = 1;
  std::vector<double> data;                        // size() * d doubles
  std::optional<std::vector<double>> mean;         // exact stationary mean, when known
  std::optional<double> bound;                     // sup-norm bound C, when known

  SampleSeries() = default;
  SampleSeries(int dimension, std::vector<double> flat);

  std::size_t size() const { return d > 0 ? data.size() / static_cast<std::size_t>(d) : 0; }

  std::span<const double> sample(std::size_t k) const {
    return {data.data() + k * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }

  /// Enforces the declared invariants (shape, finiteness, bound).
  void validate() const;
};

/// Piecewise-constant path on a uniform grid: value j held on
/// [j*h, (j+1)*h). Non-uniform steps are not representable.
struct PathGrid {
  int d = 1;
  double h = 1.0;
  std::vector<double> values;  // segments * d doubles, row-major

  PathGrid() = default;
  PathGrid(int dimension, double step, std::vector<double> flat);

  std::size_t segments() const { return d > 0 ? values.size() / static_cast<std::size_t>(d) : 0; }
  double duration() const { return h * static_cast<double>(segments()); }

  std::span<const double> segment(std::size_t j) const {
    return {values.data() + j * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }

  /// Piecewise-constant interpolation of a sample series at step h.
  static PathGrid from_series(const SampleSeries& series, double step);
};

}  // namespace itersig
