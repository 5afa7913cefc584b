#include "itersig/iterated_integrals.hpp"

#include <cmath>
#include <stdexcept>

namespace itersig {

PathGrid::PathGrid(int dimension, double step, std::vector<double> flat)
    : d(dimension), h(step), values(std::move(flat)) {
  if (d < 1) throw std::invalid_argument("PathGrid: dimension must be >= 1");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("PathGrid: step must be > 0");
  if (values.size() % static_cast<std::size_t>(d) != 0)
    throw std::invalid_argument("PathGrid: flat data length not a multiple of d");
  for (double x : values)
    if (!std::isfinite(x)) throw std::invalid_argument("PathGrid: non-finite segment value");
}

PathGrid PathGrid::from_series(const SampleSeries& series, double step) {
  return PathGrid(series.d, step, series.data);
}

SignatureState path_signature(const PathGrid& path, int depth, bool compensated) {
  SignatureState state(path.d, depth, compensated);
  for (std::size_t j = 0; j < path.segments(); ++j) state.push_segment(path.segment(j), path.h);
  return state;
}

double riemann_iterated_integral(const PathGrid& path, const Word& w, int refinement) {
  validate_word(w);
  if (w.d != path.d) throw std::invalid_argument("riemann_iterated_integral: word dimension mismatch");
  if (refinement < 1) throw std::invalid_argument("riemann_iterated_integral: refinement must be >= 1");
  const auto degree = static_cast<std::size_t>(w.degree());
  if (degree == 0) return 1.0;

  const double dt = path.h / static_cast<double>(refinement);
  // Strictly nested left sums: each integral sees the inner value at the left
  // endpoint, i.e. before this grid point's contribution is added.
  std::vector<double> nested(degree + 1, 0.0);
  nested[0] = 1.0;
  for (std::size_t j = 0; j < path.segments(); ++j) {
    const auto v = path.segment(j);
    for (int sub = 0; sub < refinement; ++sub) {
      for (std::size_t q = degree; q >= 1; --q)
        nested[q] += v[static_cast<std::size_t>(w.letters[q - 1] - 1)] * nested[q - 1] * dt;
    }
  }
  return nested[degree];
}

SignatureState normalized_path_signature(const SignatureState& state, double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw std::domain_error("normalized_path_signature: duration must be > 0");
  return scale_levels(state, duration);
}

}  // namespace itersig
