#include "itersig/iterated_sums.hpp"

#include <cmath>
#include <stdexcept>

namespace itersig {

SampleSeries::SampleSeries(int dimension, std::vector<double> flat) : d(dimension), data(std::move(flat)) {
  if (d < 1) throw std::invalid_argument("SampleSeries: dimension must be >= 1");
  if (data.size() % static_cast<std::size_t>(d) != 0)
    throw std::invalid_argument("SampleSeries: flat data length not a multiple of d");
}

void SampleSeries::validate() const {
  if (d < 1) throw std::invalid_argument("SampleSeries: dimension must be >= 1");
  if (data.size() % static_cast<std::size_t>(d) != 0)
    throw std::invalid_argument("SampleSeries: flat data length not a multiple of d");
  if (mean && static_cast<int>(mean->size()) != d)
    throw std::invalid_argument("SampleSeries: mean has wrong dimension");
  for (double x : data)
    if (!std::isfinite(x)) throw std::invalid_argument("SampleSeries: non-finite sample");
  if (bound) {
    for (double x : data)
      if (std::abs(x) > *bound + 1e-12)
        throw std::invalid_argument("SampleSeries: sample exceeds declared bound");
  }
}

namespace {

double enumerate_tuples(const SampleSeries& series, const Word& w, std::size_t pos, std::size_t from,
                        std::size_t n) {
  if (pos == w.letters.size()) return 1.0;
  const auto coord = static_cast<std::size_t>(w.letters[pos] - 1);
  const std::size_t remaining = w.letters.size() - pos - 1;
  double total = 0.0;
  for (std::size_t k = from; k + remaining < n; ++k)
    total += series.sample(k)[coord] * enumerate_tuples(series, w, pos + 1, k + 1, n);
  return total;
}

}  // namespace

double brute_force_sum(const SampleSeries& series, const Word& w, std::size_t n) {
  validate_word(w);
  if (w.d != series.d) throw std::invalid_argument("brute_force_sum: word dimension mismatch");
  if (n > series.size()) throw std::invalid_argument("brute_force_sum: n exceeds series length");
  if (n < w.letters.size()) return 0.0;
  return enumerate_tuples(series, w, 0, 0, n);
}

SignatureState normalized_signature(const SignatureState& state) {
  if (!(state.count() >= 1.0)) throw std::domain_error("normalized_signature: empty state");
  return scale_levels(state, state.count());
}

double theoretical_limit(std::span<const double> q, const Word& w) {
  validate_word(w);
  if (static_cast<int>(q.size()) != w.d) throw std::invalid_argument("theoretical_limit: mean dimension mismatch");
  double product = 1.0;
  for (int letter : w.letters) product *= q[static_cast<std::size_t>(letter - 1)];
  double factorial = 1.0;
  for (int j = 2; j <= w.degree(); ++j) factorial *= static_cast<double>(j);
  return product / factorial;
}

double abel_summation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("abel_summation: length mismatch");
  if (a.empty()) throw std::invalid_argument("abel_summation: sequences must be non-empty");
  const std::size_t n = a.size() - 1;
  double prefix = 0.0;
  double total = 0.0;
  double sigma = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    prefix += b[r];
    sigma = prefix / static_cast<double>(r + 1);
    total += static_cast<double>(r + 1) * (a[r] - a[r + 1]) * sigma;
  }
  prefix += b[n];
  sigma = prefix / static_cast<double>(n + 1);
  total += static_cast<double>(n + 1) * a[n] * sigma;
  return total;
}

std::vector<double> CoordinateTrack::decimated(std::size_t stride) const {
  if (stride == 0) throw std::invalid_argument("CoordinateTrack::decimated: stride must be >= 1");
  std::vector<double> out;
  out.reserve(values.size() / stride + 1);
  for (std::size_t m = 0; m < values.size(); m += stride) out.push_back(values[m]);
  return out;
}

CoordinateTrack coordinate_track(const SampleSeries& series, const Word& w) {
  validate_word(w);
  if (w.d != series.d) throw std::invalid_argument("coordinate_track: word dimension mismatch");
  if (w.degree() < 1) throw std::invalid_argument("coordinate_track: word must have degree >= 1");
  const std::size_t n = series.size();
  const auto degree = static_cast<std::size_t>(w.degree());

  CoordinateTrack track{w, std::vector<double>(n + 1, 0.0)};
  // prefix[j] holds the iterated sum of the first j letters over the samples
  // seen so far; prefix[0] is the empty word's constant 1.
  std::vector<double> prefix(degree + 1, 0.0);
  prefix[0] = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto x = series.sample(k);
    for (std::size_t j = degree; j >= 1; --j)
      prefix[j] += x[static_cast<std::size_t>(w.letters[j - 1] - 1)] * prefix[j - 1];
    track.values[k + 1] = prefix[degree];
  }
  return track;
}

}  // namespace itersig
