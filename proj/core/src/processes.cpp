#include "itersig/processes.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "itersig/random.hpp"

namespace itersig {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

void check_matrix_shape(const std::vector<std::vector<double>>& p) {
  const std::size_t m = p.size();
  if (m == 0) throw std::invalid_argument("transition matrix: empty");
  for (const auto& row : p) {
    if (row.size() != m) throw std::invalid_argument("transition matrix: not square");
    double sum = 0.0;
    for (double x : row) {
      if (!std::isfinite(x) || x < -1e-15) throw std::invalid_argument("transition matrix: bad entry");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("transition matrix: row does not sum to 1");
  }
}

std::vector<std::vector<int>> support_adjacency(const std::vector<std::vector<double>>& p) {
  const int m = static_cast<int>(p.size());
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(m));
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      if (p[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] > 0.0)
        adj[static_cast<std::size_t>(u)].push_back(v);
  return adj;
}

std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<int> queue;
  dist[static_cast<std::size_t>(start)] = 0;
  queue.push(start);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (int v : adj[static_cast<std::size_t>(u)])
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push(v);
      }
  }
  return dist;
}

bool strongly_connected(const std::vector<std::vector<int>>& adj) {
  const int m = static_cast<int>(adj.size());
  const auto forward = bfs_distances(adj, 0);
  if (std::any_of(forward.begin(), forward.end(), [](int x) { return x < 0; })) return false;
  std::vector<std::vector<int>> reversed(static_cast<std::size_t>(m));
  for (int u = 0; u < m; ++u)
    for (int v : adj[static_cast<std::size_t>(u)]) reversed[static_cast<std::size_t>(v)].push_back(u);
  const auto backward = bfs_distances(reversed, 0);
  return std::none_of(backward.begin(), backward.end(), [](int x) { return x < 0; });
}

int chain_period(const std::vector<std::vector<int>>& adj) {
  const auto dist = bfs_distances(adj, 0);
  long long g = 0;
  for (std::size_t u = 0; u < adj.size(); ++u)
    for (int v : adj[u]) g = std::gcd(g, std::llabs(dist[u] + 1ll - dist[static_cast<std::size_t>(v)]));
  return static_cast<int>(g);
}

/// Exact small-denominator rationals (entered as literals like 0.5 or 3/5)
/// are rejected; irrational constants survive because their continued
/// fraction reaches the denominator cap before an exact match.
bool is_small_rational(double a) {
  double x = a - std::floor(a);
  long long h0 = 1, k0 = 0;
  long long h1 = static_cast<long long>(std::floor(a)), k1 = 1;
  for (int it = 0; it < 64 && k1 <= 1000000; ++it) {
    if (k1 > 0 && std::abs(a - static_cast<double>(h1) / static_cast<double>(k1)) < 1e-15) return true;
    if (x < 1e-18) break;
    x = 1.0 / x;
    const auto digit = static_cast<long long>(std::floor(x));
    const long long h2 = digit * h1 + h0;
    const long long k2 = digit * k1 + k0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    x -= std::floor(x);
  }
  return false;
}

std::size_t sample_index(const std::vector<double>& cumulative, double u) {
  for (std::size_t s = 0; s + 1 < cumulative.size(); ++s)
    if (u < cumulative[s]) return s;
  return cumulative.size() - 1;
}

std::vector<double> cumulative_of(const std::vector<double>& probs) {
  std::vector<double> cum(probs.size());
  double acc = 0.0;
  for (std::size_t s = 0; s < probs.size(); ++s) {
    acc += probs[s];
    cum[s] = acc;
  }
  return cum;
}

}  // namespace

std::vector<double> TrigObservable::eval(double x) const {
  const int d = dimension();
  std::vector<double> out(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto ci = static_cast<std::size_t>(i);
    double value = constant[ci];
    if (!cos_coeffs.empty())
      for (std::size_t k = 0; k < cos_coeffs[ci].size(); ++k)
        value += cos_coeffs[ci][k] * std::cos(two_pi * static_cast<double>(k + 1) * x);
    if (!sin_coeffs.empty())
      for (std::size_t k = 0; k < sin_coeffs[ci].size(); ++k)
        value += sin_coeffs[ci][k] * std::sin(two_pi * static_cast<double>(k + 1) * x);
    out[ci] = value;
  }
  return out;
}

ProcessModel ProcessModel::iid(IidSpec spec) {
  if (spec.support.empty()) throw std::invalid_argument("iid model: empty support");
  const int d = static_cast<int>(spec.support.front().size());
  if (d < 1) throw std::invalid_argument("iid model: zero-dimensional support point");
  if (spec.probs.size() != spec.support.size())
    throw std::invalid_argument("iid model: probs/support size mismatch");
  double total = 0.0;
  for (double p : spec.probs) {
    if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument("iid model: bad probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("iid model: probabilities do not sum to 1");

  ProcessModel model;
  model.kind_ = Kind::iid;
  model.d_ = d;
  model.mean_.assign(static_cast<std::size_t>(d), 0.0);
  model.bound_ = 0.0;
  for (std::size_t s = 0; s < spec.support.size(); ++s) {
    const auto& point = spec.support[s];
    if (static_cast<int>(point.size()) != d) throw std::invalid_argument("iid model: ragged support");
    for (int i = 0; i < d; ++i) {
      const auto ci = static_cast<std::size_t>(i);
      if (!std::isfinite(point[ci])) throw std::invalid_argument("iid model: non-finite support point");
      model.mean_[ci] += spec.probs[s] * point[ci];
      model.bound_ = std::max(model.bound_, std::abs(point[ci]));
    }
  }
  model.spec_ = std::move(spec);
  return model;
}

ProcessModel ProcessModel::markov_functional(MarkovFunctionalSpec spec) {
  check_matrix_shape(spec.transition);
  const std::size_t m = spec.transition.size();
  const auto adj = support_adjacency(spec.transition);
  if (!strongly_connected(adj)) throw std::invalid_argument("markov model: transition matrix is reducible");
  if (chain_period(adj) != 1) throw std::invalid_argument("markov model: transition matrix is periodic");
  if (spec.values.size() != m) throw std::invalid_argument("markov model: one value vector per state required");
  const int d = static_cast<int>(spec.values.front().size());
  if (d < 1) throw std::invalid_argument("markov model: zero-dimensional value map");
  for (const auto& row : spec.values) {
    if (static_cast<int>(row.size()) != d) throw std::invalid_argument("markov model: ragged value map");
    for (double x : row)
      if (!std::isfinite(x)) throw std::invalid_argument("markov model: non-finite value");
  }

  ProcessModel model;
  model.kind_ = Kind::markov_functional;
  model.d_ = d;
  model.stationary_ = stationary_distribution(spec.transition);
  model.mean_.assign(static_cast<std::size_t>(d), 0.0);
  model.bound_ = 0.0;
  for (std::size_t s = 0; s < m; ++s)
    for (int i = 0; i < d; ++i) {
      const auto ci = static_cast<std::size_t>(i);
      model.mean_[ci] += model.stationary_[s] * spec.values[s][ci];
      model.bound_ = std::max(model.bound_, std::abs(spec.values[s][ci]));
    }
  model.spec_ = std::move(spec);
  return model;
}

ProcessModel ProcessModel::rotation(RotationSpec spec) {
  if (!(spec.frequency > 0.0) || !(spec.frequency < 1.0) || !std::isfinite(spec.frequency))
    throw std::invalid_argument("rotation model: frequency must lie in (0,1)");
  if (is_small_rational(spec.frequency))
    throw std::invalid_argument("rotation model: frequency is rational; orbit would be periodic");
  if (!(spec.start >= 0.0) || !(spec.start < 1.0))
    throw std::invalid_argument("rotation model: start must lie in [0,1)");
  const int d = spec.observable.dimension();
  if (d < 1) throw std::invalid_argument("rotation model: observable must have dimension >= 1");
  if (!spec.observable.cos_coeffs.empty() && static_cast<int>(spec.observable.cos_coeffs.size()) != d)
    throw std::invalid_argument("rotation model: cosine coefficient rows must match dimension");
  if (!spec.observable.sin_coeffs.empty() && static_cast<int>(spec.observable.sin_coeffs.size()) != d)
    throw std::invalid_argument("rotation model: sine coefficient rows must match dimension");

  ProcessModel model;
  model.kind_ = Kind::rotation;
  model.d_ = d;
  model.mean_ = spec.observable.constant;
  model.bound_ = 0.0;
  for (int i = 0; i < d; ++i) {
    const auto ci = static_cast<std::size_t>(i);
    if (!std::isfinite(spec.observable.constant[ci]))
      throw std::invalid_argument("rotation model: non-finite coefficient");
    double amplitude = std::abs(spec.observable.constant[ci]);
    if (!spec.observable.cos_coeffs.empty())
      for (double c : spec.observable.cos_coeffs[ci]) {
        if (!std::isfinite(c)) throw std::invalid_argument("rotation model: non-finite coefficient");
        amplitude += std::abs(c);
      }
    if (!spec.observable.sin_coeffs.empty())
      for (double c : spec.observable.sin_coeffs[ci]) {
        if (!std::isfinite(c)) throw std::invalid_argument("rotation model: non-finite coefficient");
        amplitude += std::abs(c);
      }
    model.bound_ = std::max(model.bound_, amplitude);
  }
  model.spec_ = std::move(spec);
  return model;
}

const IidSpec& ProcessModel::as_iid() const {
  if (kind_ != Kind::iid) throw std::logic_error("ProcessModel: not an iid model");
  return std::get<IidSpec>(spec_);
}

const MarkovFunctionalSpec& ProcessModel::as_markov() const {
  if (kind_ != Kind::markov_functional) throw std::logic_error("ProcessModel: not a markov model");
  return std::get<MarkovFunctionalSpec>(spec_);
}

const RotationSpec& ProcessModel::as_rotation() const {
  if (kind_ != Kind::rotation) throw std::logic_error("ProcessModel: not a rotation model");
  return std::get<RotationSpec>(spec_);
}

const std::vector<double>& ProcessModel::stationary() const {
  if (kind_ != Kind::markov_functional)
    throw std::logic_error("ProcessModel: stationary distribution only defined for chains");
  return stationary_;
}

SampleSeries generate(const ProcessModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
  const int d = model.dimension();
  SampleSeries series;
  series.d = d;
  series.data.reserve(n * static_cast<std::size_t>(d));

  switch (model.kind()) {
    case ProcessModel::Kind::iid: {
      const auto& spec = model.as_iid();
      const auto cum = cumulative_of(spec.probs);
      std::mt19937_64 rng(seed);
      for (std::size_t k = 0; k < n; ++k) {
        const auto& point = spec.support[sample_index(cum, uniform01(rng))];
        series.data.insert(series.data.end(), point.begin(), point.end());
      }
      break;
    }
    case ProcessModel::Kind::markov_functional: {
      const auto& spec = model.as_markov();
      const auto start_cum = cumulative_of(model.stationary());
      std::vector<std::vector<double>> row_cum;
      row_cum.reserve(spec.transition.size());
      for (const auto& row : spec.transition) row_cum.push_back(cumulative_of(row));
      std::mt19937_64 rng(seed);
      std::size_t state = sample_index(start_cum, uniform01(rng));
      for (std::size_t k = 0; k < n; ++k) {
        const auto& value = spec.values[state];
        series.data.insert(series.data.end(), value.begin(), value.end());
        state = sample_index(row_cum[state], uniform01(rng));
      }
      break;
    }
    case ProcessModel::Kind::rotation: {
      const auto& spec = model.as_rotation();
      double x = spec.start;
      for (std::size_t k = 0; k < n; ++k) {
        const auto value = spec.observable.eval(x);
        series.data.insert(series.data.end(), value.begin(), value.end());
        x += spec.frequency;
        x -= std::floor(x);
      }
      break;
    }
  }

  series.mean = model.mean();
  series.bound = model.bound();
  return series;
}

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition) {
  check_matrix_shape(transition);
  const auto adj = support_adjacency(transition);
  if (!strongly_connected(adj))
    throw std::invalid_argument("stationary_distribution: transition matrix is reducible");
  const std::size_t m = transition.size();

  std::vector<double> pi(m, 1.0 / static_cast<double>(m));
  if (m <= 64) {
    // (P^T - I) pi = 0 with the last equation replaced by sum pi = 1.
    Eigen::MatrixXd a(m, m);
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y)
        a(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) =
            transition[y][x] - (x == y ? 1.0 : 0.0);
    for (std::size_t y = 0; y < m; ++y) a(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(y)) = 1.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    b(static_cast<Eigen::Index>(m - 1)) = 1.0;
    const Eigen::VectorXd solution = a.colPivHouseholderQr().solve(b);
    for (std::size_t x = 0; x < m; ++x) pi[x] = solution(static_cast<Eigen::Index>(x));
  } else {
    // Damped power iteration: pi <- pi (I + P)/2 keeps the fixed point and
    // converges even for nearly periodic chains.
    std::vector<double> next(m, 0.0);
    for (int it = 0; it < 1000000; ++it) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y) next[y] += pi[x] * transition[x][y];
      double delta = 0.0;
      double total = 0.0;
      for (std::size_t y = 0; y < m; ++y) {
        next[y] = 0.5 * (next[y] + pi[y]);
        total += next[y];
      }
      for (std::size_t y = 0; y < m; ++y) {
        next[y] /= total;
        delta += std::abs(next[y] - pi[y]);
      }
      pi.swap(next);
      if (delta <= 1e-15) break;
    }
  }

  double total = 0.0;
  for (double x : pi) total += x;
  for (double& x : pi) x /= total;

  double residual = 0.0;
  for (std::size_t y = 0; y < m; ++y) {
    double image = 0.0;
    for (std::size_t x = 0; x < m; ++x) image += pi[x] * transition[x][y];
    residual += std::abs(image - pi[y]);
  }
  if (residual > 1e-12)
    throw std::runtime_error("stationary_distribution: residual " + std::to_string(residual) +
                             " exceeds 1e-12");
  for (double x : pi)
    if (!(x > 0.0)) throw std::runtime_error("stationary_distribution: non-positive entry");
  return pi;
}

double psi_mixing_bound(const std::vector<std::vector<double>>& transition, int lag) {
  if (lag < 0) throw std::invalid_argument("psi_mixing_bound: lag must be >= 0");
  const auto pi = stationary_distribution(transition);
  const std::size_t m = transition.size();

  Eigen::MatrixXd p(m, m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = transition[x][y];
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  Eigen::MatrixXd base = p;
  int e = lag;
  while (e > 0) {
    if (e & 1) power = power * base;
    base = base * base;
    e >>= 1;
  }

  double worst = 0.0;
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) {
      if (!(pi[y] > 0.0)) throw std::runtime_error("psi_mixing_bound: zero stationary mass");
      worst = std::max(worst,
                       std::abs(power(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) / pi[y] - 1.0));
    }
  return worst;
}

MixingDiagnostic mixing_diagnostic(const std::vector<std::vector<double>>& transition,
                                   const std::vector<int>& lags) {
  MixingDiagnostic diag;
  diag.lags = lags;
  diag.bounds.reserve(lags.size());
  for (int lag : lags) diag.bounds.push_back(psi_mixing_bound(transition, lag));

  // Least-squares fit of log psi against the lag over the positive entries.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t used = 0;
  for (std::size_t j = 0; j < diag.bounds.size(); ++j) {
    if (diag.bounds[j] <= 0.0) continue;
    const double x = static_cast<double>(lags[j]);
    const double y = std::log(diag.bounds[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used >= 2) {
    const double denom = static_cast<double>(used) * sxx - sx * sx;
    if (std::abs(denom) > 0.0) {
      const double slope = (static_cast<double>(used) * sxy - sx * sy) / denom;
      diag.decay_rate = -slope;
      diag.intercept = (sy - slope * sx) / static_cast<double>(used);
    }
  }
  diag.tail_monotone = true;
  for (std::size_t j = 1; j < diag.bounds.size(); ++j)
    if (diag.bounds[j] > diag.bounds[j - 1] + 1e-12) diag.tail_monotone = false;
  return diag;
}

double max_mean_cycle(int nodes, const std::vector<WeightedEdge>& edges) {
  if (nodes < 1) throw std::invalid_argument("max_mean_cycle: need at least one node");
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
  for (const auto& edge : edges) {
    if (edge.from < 0 || edge.from >= nodes || edge.to < 0 || edge.to >= nodes)
      throw std::invalid_argument("max_mean_cycle: edge endpoint out of range");
    if (!std::isfinite(edge.weight)) throw std::invalid_argument("max_mean_cycle: non-finite weight");
    adj[static_cast<std::size_t>(edge.from)].push_back(edge.to);
  }
  if (!strongly_connected(adj)) throw std::invalid_argument("max_mean_cycle: graph is not strongly connected");

  const auto m = static_cast<std::size_t>(nodes);
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  // Karp: best[k][v] = max weight of a k-edge walk 0 -> v.
  std::vector<std::vector<double>> best(m + 1, std::vector<double>(m, neg_inf));
  best[0][0] = 0.0;
  for (std::size_t k = 1; k <= m; ++k)
    for (const auto& edge : edges) {
      const auto u = static_cast<std::size_t>(edge.from);
      const auto v = static_cast<std::size_t>(edge.to);
      if (best[k - 1][u] == neg_inf) continue;
      best[k][v] = std::max(best[k][v], best[k - 1][u] + edge.weight);
    }

  double answer = neg_inf;
  for (std::size_t v = 0; v < m; ++v) {
    if (best[m][v] == neg_inf) continue;
    double inner = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
      if (best[k][v] == neg_inf) continue;
      inner = std::min(inner, (best[m][v] - best[k][v]) / static_cast<double>(m - k));
    }
    answer = std::max(answer, inner);
  }
  if (answer == neg_inf) throw std::runtime_error("max_mean_cycle: no cycle found");
  return answer;
}

double essential_sup_average(const ProcessModel& model, int coordinate) {
  if (coordinate < 1 || coordinate > model.dimension())
    throw std::invalid_argument("essential_sup_average: coordinate out of range");
  const auto ci = static_cast<std::size_t>(coordinate - 1);
  switch (model.kind()) {
    case ProcessModel::Kind::iid: {
      const auto& spec = model.as_iid();
      double worst = -std::numeric_limits<double>::infinity();
      for (const auto& point : spec.support) worst = std::max(worst, point[ci]);
      return worst;
    }
    case ProcessModel::Kind::markov_functional: {
      const auto& spec = model.as_markov();
      const int m = static_cast<int>(spec.transition.size());
      std::vector<WeightedEdge> edges;
      for (int u = 0; u < m; ++u)
        for (int v = 0; v < m; ++v)
          if (spec.transition[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] > 0.0)
            edges.push_back({u, v, spec.values[static_cast<std::size_t>(v)][ci]});
      return max_mean_cycle(m, edges);
    }
    case ProcessModel::Kind::rotation:
      // Unique ergodicity: long-run averages are the same constant from every
      // start, so the essential sup collapses to the mean.
      return model.mean()[ci];
  }
  throw std::logic_error("essential_sup_average: unknown model kind");
}

}  // namespace itersig
