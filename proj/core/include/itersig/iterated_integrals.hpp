#pragma once

#include "itersig/series.hpp"
#include "itersig/tensor.hpp"

namespace itersig {

/// Exact signature of a whole piecewise-constant path: tensor exponentials
/// of each segment composed by Chen concatenation.
SignatureState path_signature(const PathGrid& path, int depth, bool compensated = false);

/// Left-endpoint quadrature of the defining recursion
///   value_n(t) = integral_0^t path_{i_n}(s) * value_{n-1}(s) ds
/// on the grid refined `refinement`-fold. Converges to the exact
/// piecewise-constant signature entry at rate O(1/refinement).
double riemann_iterated_integral(const PathGrid& path, const Word& w, int refinement);

/// scale_levels(state, duration); duration must be positive.
SignatureState normalized_path_signature(const SignatureState& state, double duration);

}  // namespace itersig
