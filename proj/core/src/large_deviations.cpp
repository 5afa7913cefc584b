#include "itersig/large_deviations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace itersig {

namespace {

constexpr double tilt_cap = 500.0;
constexpr int power_iteration_cap = 200000;

struct PerronResult {
  double log_root = 0.0;
  std::vector<double> right;
  std::vector<double> left;
};

/// Log Perron root and both Perron vectors of the tilted matrix
/// A(x,y) = P(x,y) exp(lambda f(y)). Exponents are shifted by their maximum
/// so arbitrarily large tilts cannot overflow.
PerronResult tilted_perron(const std::vector<std::vector<double>>& p, const std::vector<double>& f,
                           double lambda) {
  const std::size_t m = p.size();
  double shift = lambda * f[0];
  for (double x : f) shift = std::max(shift, lambda * x);
  std::vector<double> tilt(m);
  for (std::size_t y = 0; y < m; ++y) tilt[y] = std::exp(lambda * f[y] - shift);

  const auto matvec = [&](const std::vector<double>& v, std::vector<double>& out, bool transpose) {
    for (std::size_t x = 0; x < m; ++x) out[x] = 0.0;
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y) {
        const double a = p[x][y] * tilt[y];
        if (transpose)
          out[y] += a * v[x];
        else
          out[x] += a * v[y];
      }
  };

  const auto iterate = [&](bool transpose, std::vector<double>& vec) -> double {
    vec.assign(m, 1.0);
    std::vector<double> next(m, 0.0);
    double scale = 1.0;
    double residual = 0.0;
    for (int it = 0; it < power_iteration_cap; ++it) {
      matvec(vec, next, transpose);
      double top = 0.0;
      for (double x : next) top = std::max(top, std::abs(x));
      for (double& x : next) x /= top;
      residual = 0.0;
      for (std::size_t x = 0; x < m; ++x) residual = std::max(residual, std::abs(next[x] - vec[x]));
      const double change = std::abs(top - scale) / top;
      scale = top;
      vec.swap(next);
      if (residual <= 1e-14 && change <= 1e-14) return scale;
    }
    throw std::runtime_error("tilted Perron root: power iteration did not converge, residual " +
                             std::to_string(residual));
  };

  PerronResult result;
  const double rho_shifted = iterate(false, result.right);
  iterate(true, result.left);
  result.log_root = std::log(rho_shifted) + shift;
  return result;
}

}  // namespace

RateFunction::RateFunction(const ProcessModel& model, int coordinate) : coordinate_(coordinate) {
  if (coordinate < 1 || coordinate > model.dimension())
    throw std::invalid_argument("RateFunction: coordinate out of range");
  const auto ci = static_cast<std::size_t>(coordinate - 1);
  switch (model.kind()) {
    case ProcessModel::Kind::iid: {
      const auto& spec = model.as_iid();
      for (std::size_t s = 0; s < spec.support.size(); ++s) {
        atom_values_.push_back(spec.support[s][ci]);
        atom_probs_.push_back(spec.probs[s]);
      }
      break;
    }
    case ProcessModel::Kind::markov_functional: {
      const auto& spec = model.as_markov();
      markov_ = true;
      transition_ = spec.transition;
      for (const auto& row : spec.values) state_values_.push_back(row[ci]);
      break;
    }
    case ProcessModel::Kind::rotation:
      throw std::invalid_argument(
          "RateFunction: rotation models are deterministic, no large-deviation rate is defined");
  }
  mean_ = model.mean()[ci];
  upper_ = essential_sup_average(model, coordinate);
}

double RateFunction::cgf(double lambda) const {
  if (!std::isfinite(lambda)) throw std::invalid_argument("cgf: non-finite tilt");
  if (markov_) return tilted_perron(transition_, state_values_, lambda).log_root;
  double shift = lambda * atom_values_[0];
  for (double x : atom_values_) shift = std::max(shift, lambda * x);
  double total = 0.0;
  for (std::size_t s = 0; s < atom_values_.size(); ++s)
    total += atom_probs_[s] * std::exp(lambda * atom_values_[s] - shift);
  return shift + std::log(total);
}

double RateFunction::cgf_derivative(double lambda) const {
  if (!std::isfinite(lambda)) throw std::invalid_argument("cgf_derivative: non-finite tilt");
  if (markov_) {
    const auto perron = tilted_perron(transition_, state_values_, lambda);
    const std::size_t m = transition_.size();
    double shift = lambda * state_values_[0];
    for (double x : state_values_) shift = std::max(shift, lambda * x);
    double numerator = 0.0;
    double denominator = 0.0;
    const double rho_shifted = std::exp(perron.log_root - shift);
    for (std::size_t x = 0; x < m; ++x) {
      denominator += perron.left[x] * perron.right[x];
      for (std::size_t y = 0; y < m; ++y) {
        const double a = transition_[x][y] * std::exp(lambda * state_values_[y] - shift);
        numerator += perron.left[x] * a * state_values_[y] * perron.right[y];
      }
    }
    return numerator / (rho_shifted * denominator);
  }
  double shift = lambda * atom_values_[0];
  for (double x : atom_values_) shift = std::max(shift, lambda * x);
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t s = 0; s < atom_values_.size(); ++s) {
    const double w = atom_probs_[s] * std::exp(lambda * atom_values_[s] - shift);
    weighted += w * atom_values_[s];
    total += w;
  }
  return weighted / total;
}

double RateFunction::solve_tilt(double alpha) const {
  // Lambda' is increasing with Lambda'(0) = mean; bracket geometrically,
  // then bisect. Near the essential sup the slope saturates before the cap
  // and we refuse rather than return a garbage supremum.
  double lo = 0.0;
  double hi = 1.0;
  while (cgf_derivative(hi) < alpha) {
    lo = hi;
    hi *= 2.0;
    if (hi > tilt_cap)
      throw std::runtime_error("rate: alpha = " + std::to_string(alpha) +
                               " is too close to the essential sup " + std::to_string(upper_) +
                               "; cumulant slope at the tilt cap is " +
                               std::to_string(cgf_derivative(tilt_cap)));
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cgf_derivative(mid) < alpha)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-13 * std::max(1.0, std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

double RateFunction::optimizer(double alpha) const {
  if (alpha <= mean_ || alpha >= upper_)
    throw std::domain_error("rate optimizer: alpha outside (mean, essential sup)");
  return solve_tilt(alpha);
}

double RateFunction::operator()(double alpha) const {
  if (alpha == mean_) return 0.0;
  if (alpha < mean_ || alpha >= upper_)
    throw std::domain_error("rate: alpha = " + std::to_string(alpha) + " outside domain [" +
                            std::to_string(mean_) + ", " + std::to_string(upper_) + ")");
  const double tilt = solve_tilt(alpha);
  return std::max(0.0, tilt * alpha - cgf(tilt));
}

double cumulant_generating(const ProcessModel& model, int coordinate, double lambda) {
  return RateFunction(model, coordinate).cgf(lambda);
}

double rate_value(const ProcessModel& model, int coordinate, double alpha) {
  return RateFunction(model, coordinate)(alpha);
}

std::size_t window_length(std::size_t n, double rate_at_alpha) {
  if (n < 2) throw std::invalid_argument("window_length: n must be >= 2");
  if (!(rate_at_alpha > 0.0)) throw std::invalid_argument("window_length: rate must be > 0");
  const double raw = std::floor(std::log(static_cast<double>(n)) / rate_at_alpha);
  if (raw < 1.0) throw std::invalid_argument("window_length: window floor(log n / I) is 0");
  if (raw >= static_cast<double>(n))
    throw std::invalid_argument("window_length: window would exceed the data length");
  return static_cast<std::size_t>(raw);
}

}  // namespace itersig
