#pragma once

#include <cstddef>
#include <vector>

#include "itersig/processes.hpp"

namespace itersig {

/// Large-deviation rate function I(alpha) for one coordinate of an iid or
/// markov_functional model, as the Legendre transform of the cumulant
/// generating function (iid) or of the log Perron root of the tilted
/// transition matrix (chain). Domain is (mean, essential sup); I(mean) = 0.
///
/// Evaluation is pure and reentrant; the model data needed is copied in at
/// construction.
class RateFunction {
 public:
  RateFunction(const ProcessModel& model, int coordinate);  // coordinate is 1-based

  /// Cumulant generating function Lambda(lambda).
  double cgf(double lambda) const;
  /// Analytic slope Lambda'(lambda) (tilted mean / eigenvector form).
  double cgf_derivative(double lambda) const;

  /// I(alpha) = sup_lambda (lambda*alpha - Lambda(lambda)), accurate to 1e-8.
  /// alpha == mean() returns 0 exactly; alpha outside [mean, upper) throws.
  double operator()(double alpha) const;

  /// The maximizing tilt lambda*(alpha), satisfying Lambda'(lambda*) = alpha.
  double optimizer(double alpha) const;

  double mean() const { return mean_; }
  double upper() const { return upper_; }
  int coordinate() const { return coordinate_; }

 private:
  double solve_tilt(double alpha) const;

  bool markov_ = false;
  int coordinate_ = 1;
  double mean_ = 0.0;
  double upper_ = 0.0;
  std::vector<double> atom_values_;
  std::vector<double> atom_probs_;
  std::vector<std::vector<double>> transition_;
  std::vector<double> state_values_;
};

/// Convenience wrappers over RateFunction.
double cumulant_generating(const ProcessModel& model, int coordinate, double lambda);
double rate_value(const ProcessModel& model, int coordinate, double alpha);

/// Scan window length floor(log n / I(alpha)), natural log. Throws unless
/// n >= 2, the rate is positive, and 1 <= result < n.
std::size_t window_length(std::size_t n, double rate_at_alpha);

}  // namespace itersig
