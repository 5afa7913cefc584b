#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "itersig/iterated_sums.hpp"
#include "test_support.hpp"

using namespace itersig;

namespace {

SampleSeries series_123() { return SampleSeries(1, {1.0, 2.0, 3.0}); }

}  // namespace

TEST_CASE("push reproduces the enumerated values for [1,2,3]") {
  SignatureState state(1, 3);
  const auto series = series_123();
  for (std::size_t k = 0; k < 3; ++k) state.push(series.sample(k));
  CHECK(state.count() == 3.0);
  CHECK(state.level(1)[0] == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(state.level(2)[0] == doctest::Approx(11.0).epsilon(1e-15));
  CHECK(state.level(3)[0] == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("push keeps the index ordering strict across coordinates") {
  SignatureState state(2, 2);
  const double first[] = {1.0, 0.0};
  const double second[] = {0.0, 1.0};
  state.push(first);
  state.push(second);
  CHECK(state.entry(Word(2, {1, 2})) == 1.0);
  CHECK(state.entry(Word(2, {2, 1})) == 0.0);
  CHECK(state.entry(Word(2, {1, 1})) == 0.0);
  CHECK(state.entry(Word(2, {2, 2})) == 0.0);
}

TEST_CASE("constant series count ordered subsets") {
  const double c = 0.75;
  const int n = 20;
  SignatureState state(1, 4);
  for (int k = 0; k < n; ++k) {
    const double sample[] = {c};
    state.push(sample);
  }
  for (int degree = 1; degree <= 4; ++degree) {
    const double expected =
        test::binomial(n, static_cast<std::size_t>(degree)) * std::pow(c, degree);
    CHECK(state.level(degree)[0] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("brute_force_sum basics") {
  const auto series = series_123();
  CHECK(brute_force_sum(series, Word(1, {1, 1, 1, 1}), 3) == 0.0);  // n < degree
  CHECK(brute_force_sum(series, Word(1, {1, 1}), 3) == doctest::Approx(11.0));
  CHECK(brute_force_sum(series, Word(1, {1}), 2) == doctest::Approx(3.0));  // prefix sum
  CHECK(brute_force_sum(series, Word(1, {}), 3) == 1.0);
  CHECK_THROWS_AS(brute_force_sum(series, Word(1, {1}), 4), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_sum(series, Word(2, {1}), 2), std::invalid_argument);
}

TEST_CASE("streaming equals enumeration on random series at every prefix") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const int depth = 1 + static_cast<int>(rng() % 4);
    const std::size_t n = rng() % 13;
    const auto series = test::random_series(rng, d, n);
    SignatureState state(d, depth);
    for (std::size_t m = 0; m < n; ++m) {
      state.push(series.sample(m));
      for (int degree = 1; degree <= depth; ++degree)
        for (std::size_t offset = 0; offset < level_size(d, degree); ++offset) {
          const Word w = unflatten_index(offset, d, degree);
          CHECK(std::abs(state.entry(w) - brute_force_sum(series, w, m + 1)) <= 1e-12);
        }
    }
  }
}

TEST_CASE("normalized_signature divides level n by count^n") {
  SignatureState state(1, 2);
  for (int k = 0; k < 100; ++k) {
    const double one[] = {1.0};
    state.push(one);
  }
  const auto normalized = normalized_signature(state);
  CHECK(normalized.level(2)[0] == doctest::Approx(0.495).epsilon(1e-14));
  CHECK(normalized.level(0)[0] == 1.0);

  SignatureState single(1, 2);
  const double x[] = {0.3};
  single.push(x);
  const auto same = normalized_signature(single);
  CHECK(same.level(1)[0] == single.level(1)[0]);

  SignatureState zeros(1, 2);
  const double zero[] = {0.0};
  zeros.push(zero);
  const auto z = normalized_signature(zeros);
  CHECK(z.level(1)[0] == 0.0);
  CHECK(z.level(2)[0] == 0.0);

  SignatureState empty(1, 2);
  CHECK_THROWS_AS(normalized_signature(empty), std::domain_error);
}

TEST_CASE("theoretical_limit closed forms") {
  const std::vector<double> ones{1.0, 1.0, 1.0};
  CHECK(theoretical_limit(ones, Word(3, {1, 2, 3})) == doctest::Approx(1.0 / 6.0));
  const std::vector<double> with_zero{1.0, 0.0};
  CHECK(theoretical_limit(with_zero, Word(2, {1, 2, 1})) == 0.0);
  const std::vector<double> q{2.0, 3.0};
  CHECK(theoretical_limit(q, Word(2, {1, 2, 2})) == doctest::Approx(3.0));
  CHECK(theoretical_limit(q, Word(2, {})) == 1.0);
}

TEST_CASE("abel_summation equals the dot product") {
  // n = 1 base case: (a0-a1) b0 + 2 a1 (b0+b1)/2 = a0 b0 + a1 b1.
  const std::vector<double> a{0.3, -1.2};
  const std::vector<double> b{2.5, 0.7};
  CHECK(abel_summation(a, b) == doctest::Approx(a[0] * b[0] + a[1] * b[1]).epsilon(1e-15));

  // a == 1 telescopes to the plain sum of b.
  std::mt19937_64 rng(103);
  std::vector<double> ones(12, 1.0), values(12);
  double total = 0.0;
  for (auto& x : values) {
    x = test::unit(rng);
    total += x;
  }
  CHECK(abel_summation(ones, values) == doctest::Approx(total).epsilon(1e-13));

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t len = 1 + rng() % 50;
    std::vector<double> lhs(len), rhs(len);
    for (auto& x : lhs) x = test::unit(rng);
    for (auto& x : rhs) x = test::unit(rng);
    double dot = 0.0;
    for (std::size_t r = 0; r < len; ++r) dot += lhs[r] * rhs[r];
    CHECK(std::abs(abel_summation(lhs, rhs) - dot) <= 1e-12);
  }

  CHECK_THROWS_AS(abel_summation(a, ones), std::invalid_argument);
  CHECK_THROWS_AS(abel_summation({}, {}), std::invalid_argument);
}

TEST_CASE("quasi-shuffle identity holds with the diagonal correction") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const std::size_t n = 2 + rng() % 30;
    const auto series = test::random_series(rng, d, n);
    SignatureState state(d, 2);
    std::vector<double> diagonal(static_cast<std::size_t>(d * d), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const auto x = series.sample(k);
      state.push(x);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          diagonal[static_cast<std::size_t>(i * d + j)] +=
              x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
    }
    for (int i = 1; i <= d; ++i)
      for (int j = 1; j <= d; ++j) {
        const double lhs = state.entry(Word(d, {i})) * state.entry(Word(d, {j}));
        const double rhs = state.entry(Word(d, {i, j})) + state.entry(Word(d, {j, i})) +
                           diagonal[static_cast<std::size_t>((i - 1) * d + (j - 1))];
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
      }
  }
}

TEST_CASE("coordinate_track prefix trajectories") {
  const auto series = series_123();
  const auto track = coordinate_track(series, Word(1, {1, 1}));
  REQUIRE(track.values.size() == 4);
  CHECK(track.values[0] == 0.0);
  CHECK(track.values[1] == 0.0);
  CHECK(track.values[2] == doctest::Approx(2.0));
  CHECK(track.values[3] == doctest::Approx(11.0));

  const auto linear = coordinate_track(series, Word(1, {1}));
  CHECK(linear.values[1] == doctest::Approx(1.0));
  CHECK(linear.values[2] == doctest::Approx(3.0));
  CHECK(linear.values[3] == doctest::Approx(6.0));

  CHECK_THROWS_AS(coordinate_track(series, Word(1, {})), std::invalid_argument);
  CHECK_THROWS_AS(coordinate_track(series, Word(2, {1})), std::invalid_argument);
}

TEST_CASE("coordinate_track agrees with the full state at the endpoint") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const std::size_t n = 1 + rng() % 40;
    const auto series = test::random_series(rng, d, n);
    Word w(d, {});
    const int degree = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < degree; ++j) w.letters.push_back(1 + static_cast<int>(rng() % d));
    const auto track = coordinate_track(series, w);
    SignatureState state(d, degree);
    for (std::size_t k = 0; k < n; ++k) state.push(series.sample(k));
    CHECK(track.values.back() == doctest::Approx(state.entry(w)).epsilon(1e-12));
  }
}

TEST_CASE("coordinate_track decimation keeps every stride-th prefix") {
  CoordinateTrack track{Word(1, {1}), {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}};
  const auto thinned = track.decimated(2);
  REQUIRE(thinned.size() == 3);
  CHECK(thinned[0] == 0.0);
  CHECK(thinned[1] == 2.0);
  CHECK(thinned[2] == 4.0);
  CHECK_THROWS_AS(track.decimated(0), std::invalid_argument);
}
