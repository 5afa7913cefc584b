#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include "itersig/processes.hpp"
#include "itersig/random.hpp"
#include "test_support.hpp"

using namespace itersig;

namespace {

const std::vector<std::vector<double>> fixture_p{{0.9, 0.1}, {0.5, 0.5}};

ProcessModel fixture_chain() {
  return ProcessModel::markov_functional({fixture_p, {{0.0}, {1.0}}});
}

ProcessModel bernoulli() { return ProcessModel::iid({{{0.0}, {1.0}}, {0.5, 0.5}}); }

ProcessModel cosine_rotation() {
  TrigObservable g;
  g.constant = {0.0};
  g.cos_coeffs = {{1.0}};
  return ProcessModel::rotation({golden_rotation, 0.0, g});
}

/// Exhaustive simple-cycle maximum mean, for graphs of at most ~8 nodes.
double brute_force_max_cycle(int nodes, const std::vector<WeightedEdge>& edges) {
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(nodes));
  for (const auto& e : edges) adj[static_cast<std::size_t>(e.from)].push_back({e.to, e.weight});
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> path;
  std::vector<bool> used(static_cast<std::size_t>(nodes), false);
  // Canonical cycles: smallest node first, so each simple cycle appears once.
  std::function<void(int, int, double)> dfs = [&](int start, int node, double weight) {
    for (const auto& [next, w] : adj[static_cast<std::size_t>(node)]) {
      if (next == start) {
        best = std::max(best, (weight + w) / static_cast<double>(path.size()));
        continue;
      }
      if (next < start || used[static_cast<std::size_t>(next)]) continue;
      used[static_cast<std::size_t>(next)] = true;
      path.push_back(next);
      dfs(start, next, weight + w);
      path.pop_back();
      used[static_cast<std::size_t>(next)] = false;
    }
  };
  for (int start = 0; start < nodes; ++start) {
    path.assign(1, start);
    dfs(start, start, 0.0);
  }
  return best;
}

}  // namespace

TEST_CASE("stationary distribution of the 2-state fixture") {
  const auto pi = stationary_distribution(fixture_p);
  REQUIRE(pi.size() == 2);
  CHECK(pi[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-13));
  CHECK(pi[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("doubly stochastic matrices have the uniform stationary law") {
  const std::vector<std::vector<double>> p{{0.2, 0.3, 0.5}, {0.5, 0.2, 0.3}, {0.3, 0.5, 0.2}};
  for (double x : stationary_distribution(p)) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("stationary distribution meets its residual contract on random chains") {
  std::mt19937_64 rng(301);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t m = 2 + rng() % 7;
    std::vector<std::vector<double>> p(m, std::vector<double>(m));
    for (auto& row : p) {
      double total = 0.0;
      for (auto& x : row) {
        x = 0.05 + uniform01(rng);
        total += x;
      }
      for (auto& x : row) x /= total;
    }
    const auto pi = stationary_distribution(p);
    double residual = 0.0, total = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
      double image = 0.0;
      for (std::size_t x = 0; x < m; ++x) image += pi[x] * p[x][y];
      residual += std::abs(image - pi[y]);
      total += pi[y];
      CHECK(pi[y] > 0.0);
    }
    CHECK(residual <= 1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("reducible and malformed matrices are rejected") {
  CHECK_THROWS_AS(stationary_distribution({{1.0, 0.0}, {0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(stationary_distribution({{0.5, 0.5}}), std::invalid_argument);  // not square (1x2)
  CHECK_THROWS_AS(stationary_distribution({{0.7, 0.7}, {0.5, 0.5}}), std::invalid_argument);
  // Periodic but irreducible is fine for the stationary solve itself.
  const auto pi = stationary_distribution({{0.0, 1.0}, {1.0, 0.0}});
  CHECK(pi[0] == doctest::Approx(0.5));
}

TEST_CASE("model construction validates chains and probabilities") {
  CHECK_THROWS_AS(ProcessModel::markov_functional({{{0.0, 1.0}, {1.0, 0.0}}, {{0.0}, {1.0}}}),
                  std::invalid_argument);  // periodic
  CHECK_THROWS_AS(ProcessModel::markov_functional({{{1.0, 0.0}, {0.0, 1.0}}, {{0.0}, {1.0}}}),
                  std::invalid_argument);  // reducible
  CHECK_THROWS_AS(ProcessModel::markov_functional({fixture_p, {{0.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(ProcessModel::iid({{{0.0}, {1.0}}, {0.6, 0.6}}), std::invalid_argument);
  CHECK_THROWS_AS(ProcessModel::iid({{{0.0}, {1.0}}, {-0.5, 1.5}}), std::invalid_argument);
  CHECK_THROWS_AS(ProcessModel::iid({{{0.0}, {1.0, 2.0}}, {0.5, 0.5}}), std::invalid_argument);
}

TEST_CASE("rotation construction rejects rational frequencies") {
  TrigObservable g;
  g.constant = {0.0};
  g.cos_coeffs = {{1.0}};
  CHECK_THROWS_AS(ProcessModel::rotation({0.5, 0.0, g}), std::invalid_argument);
  CHECK_THROWS_AS(ProcessModel::rotation({2.0 / 3.0, 0.0, g}), std::invalid_argument);
  CHECK_THROWS_AS(ProcessModel::rotation({0.75, 0.0, g}), std::invalid_argument);
  CHECK_THROWS_AS(ProcessModel::rotation({1.5, 0.0, g}), std::invalid_argument);
  CHECK_NOTHROW(ProcessModel::rotation({golden_rotation, 0.0, g}));
  CHECK_NOTHROW(ProcessModel::rotation({0.31830988618367176, 0.25, g}));  // 1/pi
}

TEST_CASE("models carry the exact mean and bound") {
  const auto rotation = cosine_rotation();
  CHECK(rotation.mean()[0] == 0.0);
  CHECK(rotation.bound() == 1.0);

  const auto coin = bernoulli();
  CHECK(coin.mean()[0] == doctest::Approx(0.5));
  CHECK(coin.bound() == 1.0);

  const auto chain = fixture_chain();
  CHECK(chain.mean()[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(chain.bound() == 1.0);
  CHECK(chain.stationary()[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("generate is reproducible bit-for-bit and seed-sensitive") {
  for (const auto& model : {bernoulli(), fixture_chain(), cosine_rotation()}) {
    const auto a = generate(model, 500, 42);
    const auto b = generate(model, 500, 42);
    CHECK(a.data == b.data);
    a.validate();
  }
  const auto x = generate(bernoulli(), 500, 1);
  const auto y = generate(bernoulli(), 500, 2);
  CHECK(x.data != y.data);
  CHECK_THROWS_AS(generate(bernoulli(), 0, 1), std::invalid_argument);
}

TEST_CASE("empirical means converge to the exact mean") {
  const std::size_t n = 1000000;
  for (const auto& model : {bernoulli(), fixture_chain()}) {
    const auto series = generate(model, n, 2024);
    double mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) mean += series.sample(k)[0];
    mean /= static_cast<double>(n);
    CHECK(std::abs(mean - model.mean()[0]) <= 5.0 / std::sqrt(static_cast<double>(n)));
  }
  const auto series = generate(cosine_rotation(), n, 0);
  double mean = 0.0;
  for (std::size_t k = 0; k < n; ++k) mean += series.sample(k)[0];
  mean /= static_cast<double>(n);
  CHECK(std::abs(mean) <= 10.0 / static_cast<double>(n));
}

TEST_CASE("psi bound at lag 0 is forced by the definition") {
  // Identity matrix over pi: diagonal 1/pi(y) - 1, off-diagonal 1.
  CHECK(psi_mixing_bound(fixture_p, 0) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("one-step independence gives a zero psi bound") {
  const std::vector<std::vector<double>> iid_like{{0.3, 0.7}, {0.3, 0.7}};
  CHECK(psi_mixing_bound(iid_like, 1) <= 1e-14);
}

TEST_CASE("psi bound decays at the second-eigenvalue rate") {
  // trace - 1 = 0.4 for the fixture chain; the 2x2 spectral split is exact.
  for (int lag = 8; lag <= 12; ++lag) {
    const double ratio = psi_mixing_bound(fixture_p, lag + 1) / psi_mixing_bound(fixture_p, lag);
    CHECK(ratio == doctest::Approx(0.4).epsilon(1e-9));
  }
}

TEST_CASE("mixing diagnostic fits a positive decay rate and a monotone tail") {
  const auto diag = mixing_diagnostic(fixture_p, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(diag.decay_rate == doctest::Approx(-std::log(0.4)).epsilon(1e-3));
  CHECK(diag.tail_monotone);
  for (double bound : diag.bounds) CHECK(bound >= 0.0);

  const std::vector<std::vector<double>> three_state{
      {0.6, 0.3, 0.1}, {0.2, 0.5, 0.3}, {0.25, 0.25, 0.5}};
  const auto other = mixing_diagnostic(three_state, {1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(other.decay_rate > 0.0);
  CHECK(other.tail_monotone);
}

TEST_CASE("max_mean_cycle frozen examples") {
  // Self-loop at A worth 3 beats the 2-cycle worth (1+2)/2.
  const std::vector<WeightedEdge> edges{{0, 0, 3.0}, {0, 1, 1.0}, {1, 0, 2.0}};
  CHECK(max_mean_cycle(2, edges) == doctest::Approx(3.0));
  const std::vector<WeightedEdge> constant{{0, 1, 2.5}, {1, 0, 2.5}, {1, 1, 2.5}};
  CHECK(max_mean_cycle(2, constant) == doctest::Approx(2.5));
  CHECK_THROWS_AS(max_mean_cycle(2, std::vector<WeightedEdge>{{0, 1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(max_mean_cycle(2, std::vector<WeightedEdge>{{0, 2, 1.0}}), std::invalid_argument);
}

TEST_CASE("max_mean_cycle equals exhaustive enumeration on random graphs") {
  std::mt19937_64 rng(307);
  for (int trial = 0; trial < 60; ++trial) {
    const int nodes = 2 + static_cast<int>(rng() % 6);
    std::set<std::pair<int, int>> seen;
    std::vector<WeightedEdge> edges;
    // Hamiltonian cycle guarantees strong connectivity; integer weights keep
    // both routes' arithmetic exact.
    for (int u = 0; u < nodes; ++u) {
      const int v = (u + 1) % nodes;
      edges.push_back({u, v, static_cast<double>(static_cast<int>(rng() % 11)) - 5.0});
      seen.insert({u, v});
    }
    const int extras = static_cast<int>(rng() % (2 * nodes));
    for (int e = 0; e < extras; ++e) {
      const int u = static_cast<int>(rng() % nodes);
      const int v = static_cast<int>(rng() % nodes);
      if (!seen.insert({u, v}).second) continue;
      edges.push_back({u, v, static_cast<double>(static_cast<int>(rng() % 11)) - 5.0});
    }
    CHECK(max_mean_cycle(nodes, edges) == brute_force_max_cycle(nodes, edges));
  }
}

TEST_CASE("essential_sup_average per model kind") {
  CHECK(essential_sup_average(bernoulli(), 1) == 1.0);
  CHECK(essential_sup_average(fixture_chain(), 1) == doctest::Approx(1.0));
  CHECK(essential_sup_average(cosine_rotation(), 1) == 0.0);
  CHECK_THROWS_AS(essential_sup_average(bernoulli(), 2), std::invalid_argument);
  // All-equal values collapse to that constant.
  const auto constant_chain = ProcessModel::markov_functional({fixture_p, {{0.4}, {0.4}}});
  CHECK(essential_sup_average(constant_chain, 1) == doctest::Approx(0.4));
}

TEST_CASE("trig observables evaluate their Fourier form") {
  TrigObservable g;
  g.constant = {0.5, 0.0};
  g.cos_coeffs = {{1.0}, {0.0, 2.0}};
  g.sin_coeffs = {{0.0}, {1.0}};
  const auto at_zero = g.eval(0.0);
  CHECK(at_zero[0] == doctest::Approx(1.5));
  CHECK(at_zero[1] == doctest::Approx(2.0));
  const auto quarter = g.eval(0.25);
  CHECK(quarter[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(quarter[1] == doctest::Approx(-2.0 + 1.0).epsilon(1e-12));
}
