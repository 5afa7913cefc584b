#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "itersig/series.hpp"

namespace itersig {

/// (sqrt(5)-1)/2, the default rotation frequency: badly approximable, so the
/// orbit has the best possible discrepancy behavior.
inline constexpr double golden_rotation = 0.6180339887498948482;

/// Finitely many support points with probabilities; samples are i.i.d.
struct IidSpec {
  std::vector<std::vector<double>> support;  // one d-vector per atom
  std::vector<double> probs;

  bool operator==(const IidSpec&) const = default;
};

/// Finite-state chain with transition matrix P and a value map f; the
/// emitted series is f applied to a stationary chain path.
struct MarkovFunctionalSpec {
  std::vector<std::vector<double>> transition;  // m x m, row-stochastic
  std::vector<std::vector<double>> values;      // one d-vector per state

  bool operator==(const MarkovFunctionalSpec&) const = default;
};

/// g: [0,1) -> R^d as a finite trigonometric polynomial,
/// g_i(x) = constant[i] + sum_k cos_coeffs[i][k] cos(2 pi (k+1) x)
///                      + sum_k sin_coeffs[i][k] sin(2 pi (k+1) x).
struct TrigObservable {
  std::vector<double> constant;
  std::vector<std::vector<double>> cos_coeffs;
  std::vector<std::vector<double>> sin_coeffs;

  int dimension() const { return static_cast<int>(constant.size()); }
  std::vector<double> eval(double x) const;

  bool operator==(const TrigObservable&) const = default;
};

/// Deterministic irrational rotation x -> x + frequency (mod 1), observed
/// through g. Ergodic but not mixing; exercises the deterministic limits.
struct RotationSpec {
  double frequency = golden_rotation;
  double start = 0.0;
  TrigObservable observable;

  bool operator==(const RotationSpec&) const = default;
};

/// Stationary series generator with exactly known mean, bound, and (for the
/// chain) stationary distribution. Construction validates everything the
/// generators rely on; a constructed model is always usable.
class ProcessModel {
 public:
  enum class Kind { iid, markov_functional, rotation };

  static ProcessModel iid(IidSpec spec);
  static ProcessModel markov_functional(MarkovFunctionalSpec spec);
  static ProcessModel rotation(RotationSpec spec);

  Kind kind() const { return kind_; }
  int dimension() const { return d_; }

  /// Exact stationary mean Q.
  const std::vector<double>& mean() const { return mean_; }
  /// Sup-norm bound C on |xi(k)|.
  double bound() const { return bound_; }

  const IidSpec& as_iid() const;
  const MarkovFunctionalSpec& as_markov() const;
  const RotationSpec& as_rotation() const;
  /// Stationary distribution of the chain (markov_functional only).
  const std::vector<double>& stationary() const;

 private:
  ProcessModel() = default;

  Kind kind_ = Kind::iid;
  int d_ = 1;
  std::vector<double> mean_;
  double bound_ = 0.0;
  std::vector<double> stationary_;
  std::variant<IidSpec, MarkovFunctionalSpec, RotationSpec> spec_;
};

/// Deterministic given (model, n, seed); chains start from the stationary
/// distribution so the series is exactly stationary from sample 0.
SampleSeries generate(const ProcessModel& model, std::size_t n, std::uint64_t seed);

/// pi with pi P = pi, sum pi = 1, pi > 0. Direct solve for m <= 64, power
/// iteration above; residual |pi P - pi|_1 <= 1e-12 or it throws.
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition);

/// max_{x,y} |P^n(x,y)/pi(y) - 1|: computable upper-bound surrogate for the
/// chain's psi-mixing coefficient at lag n.
double psi_mixing_bound(const std::vector<std::vector<double>>& transition, int lag);

/// psi bounds over a set of lags plus a fitted exponential decay rate
/// (log psi ~ intercept - rate * lag over the positive entries).
struct MixingDiagnostic {
  std::vector<int> lags;
  std::vector<double> bounds;
  double decay_rate = 0.0;
  double intercept = 0.0;
  bool tail_monotone = false;
};

MixingDiagnostic mixing_diagnostic(const std::vector<std::vector<double>>& transition,
                                   const std::vector<int>& lags);

struct WeightedEdge {
  int from = 0;
  int to = 0;
  double weight = 0.0;
};

/// Karp's maximum mean cycle over a strongly connected digraph.
double max_mean_cycle(int nodes, const std::vector<WeightedEdge>& edges);

/// Essential supremum of long-run coordinate averages: support maximum for
/// i.i.d. models, maximum mean cycle of the value graph for chains.
/// coordinate is 1-based, matching Word letters.
double essential_sup_average(const ProcessModel& model, int coordinate);

}  // namespace itersig
