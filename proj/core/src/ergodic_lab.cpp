#include "itersig/ergodic_lab.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "itersig/iterated_integrals.hpp"
#include "itersig/random.hpp"

namespace itersig {

namespace {

void check_checkpoints(const std::vector<std::size_t>& checkpoints) {
  for (std::size_t k = 0; k + 1 < checkpoints.size(); ++k)
    if (checkpoints[k] >= checkpoints[k + 1])
      throw std::invalid_argument("checkpoints must be strictly increasing");
  if (!checkpoints.empty() && checkpoints.front() == 0)
    throw std::invalid_argument("checkpoints must be >= 1");
}

void check_word_for(const ProcessModel& model, const Word& word) {
  validate_word(word);
  if (word.d != model.dimension())
    throw std::invalid_argument("sweep: word dimension does not match the model");
}

std::optional<double> fit_slope(const std::vector<std::size_t>& checkpoints,
                                const std::vector<double>& errors) {
  if (checkpoints.size() < 4) return std::nullopt;
  for (double e : errors)
    if (!(e > 0.0)) return std::nullopt;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const auto count = static_cast<double>(checkpoints.size());
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    const double x = std::log(static_cast<double>(checkpoints[k]));
    const double y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (count * sxy - sx * sy) / denom;
}

}  // namespace

std::vector<double> single_trajectory_values(const ProcessModel& model, const Word& word,
                                             const std::vector<std::size_t>& checkpoints,
                                             std::uint64_t seed, bool compensated) {
  check_word_for(model, word);
  check_checkpoints(checkpoints);
  std::vector<double> values;
  if (checkpoints.empty()) return values;
  values.reserve(checkpoints.size());

  const auto series = generate(model, checkpoints.back(), seed);
  SignatureState state(model.dimension(), std::max(1, word.degree()), compensated);
  std::size_t next = 0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    state.push(series.sample(k));
    if (k + 1 == checkpoints[next]) {
      values.push_back(normalized_signature(state).entry(word));
      if (++next == checkpoints.size()) break;
    }
  }
  return values;
}

ConvergenceReport almost_sure_sweep(const ProcessModel& model, const Word& word,
                                    const std::vector<std::size_t>& checkpoints, std::uint64_t seed,
                                    bool compensated) {
  ConvergenceReport report;
  report.word = word;
  report.mode = SweepMode::almost_sure_discrete;
  report.checkpoints = checkpoints;
  report.values = single_trajectory_values(model, word, checkpoints, seed, compensated);
  report.limit = theoretical_limit(model.mean(), word);
  report.errors.reserve(report.values.size());
  for (double v : report.values) report.errors.push_back(std::abs(v - report.limit));
  report.slope = fit_slope(report.checkpoints, report.errors);
  return report;
}

std::vector<double> continuous_trajectory_values(const ProcessModel& model, const Word& word,
                                                 double step,
                                                 const std::vector<std::size_t>& checkpoints,
                                                 std::uint64_t seed, bool compensated) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("continuous trajectory: step must be > 0");
  check_word_for(model, word);
  check_checkpoints(checkpoints);
  std::vector<double> values;
  if (checkpoints.empty()) return values;
  values.reserve(checkpoints.size());

  const auto series = generate(model, checkpoints.back(), seed);
  SignatureState state(model.dimension(), std::max(1, word.degree()), compensated);
  std::size_t next = 0;
  for (std::size_t j = 0; j < series.size(); ++j) {
    state.push_segment(series.sample(j), step);
    if (j + 1 == checkpoints[next]) {
      const double duration = static_cast<double>(checkpoints[next]) * step;
      values.push_back(normalized_path_signature(state, duration).entry(word));
      if (++next == checkpoints.size()) break;
    }
  }
  return values;
}

ConvergenceReport l1_sweep(const ProcessModel& model, const Word& word,
                           const std::vector<std::size_t>& checkpoints, std::size_t replications,
                           std::uint64_t seed, bool compensated, double continuous_step) {
  if (replications < 2) throw std::invalid_argument("l1_sweep: need at least 2 replications");
  check_word_for(model, word);
  check_checkpoints(checkpoints);

  ConvergenceReport report;
  report.word = word;
  report.mode = SweepMode::l1_monte_carlo;
  report.checkpoints = checkpoints;
  report.limit = theoretical_limit(model.mean(), word);
  if (continuous_step > 0.0) report.step = continuous_step;

  const std::size_t k_count = checkpoints.size();
  std::vector<double> value_sum(k_count, 0.0);
  std::vector<double> abs_sum(k_count, 0.0);
  std::vector<double> abs_sq_sum(k_count, 0.0);
  for (std::size_t r = 0; r < replications; ++r) {
    const auto values =
        continuous_step > 0.0
            ? continuous_trajectory_values(model, word, continuous_step, checkpoints,
                                           derive_seed(seed, r), compensated)
            : single_trajectory_values(model, word, checkpoints, derive_seed(seed, r), compensated);
    for (std::size_t k = 0; k < k_count; ++k) {
      const double abs_err = std::abs(values[k] - report.limit);
      value_sum[k] += values[k];
      abs_sum[k] += abs_err;
      abs_sq_sum[k] += abs_err * abs_err;
    }
  }
  const auto r_count = static_cast<double>(replications);
  report.values.resize(k_count);
  report.errors.resize(k_count);
  report.stderrs.resize(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    report.values[k] = value_sum[k] / r_count;
    report.errors[k] = abs_sum[k] / r_count;
    const double variance =
        std::max(0.0, (abs_sq_sum[k] - abs_sum[k] * abs_sum[k] / r_count) / (r_count - 1.0));
    report.stderrs[k] = std::sqrt(variance / r_count);
  }
  report.slope = fit_slope(report.checkpoints, report.errors);
  return report;
}

ConvergenceReport continuous_sweep(const ProcessModel& model, const Word& word, double step,
                                   const std::vector<std::size_t>& checkpoints, std::uint64_t seed,
                                   bool compensated) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("continuous_sweep: step must be > 0");
  check_word_for(model, word);
  check_checkpoints(checkpoints);

  ConvergenceReport report;
  report.word = word;
  report.mode = SweepMode::almost_sure_continuous;
  report.checkpoints = checkpoints;
  report.step = step;
  report.limit = theoretical_limit(model.mean(), word);
  report.values = continuous_trajectory_values(model, word, step, checkpoints, seed, compensated);
  report.errors.reserve(report.values.size());
  for (double v : report.values) report.errors.push_back(std::abs(v - report.limit));
  report.slope = fit_slope(report.checkpoints, report.errors);
  return report;
}

double er_scan_max(const CoordinateTrack& track, std::size_t n, std::size_t window) {
  if (n > track.samples()) throw std::invalid_argument("er_scan_max: n exceeds the track length");
  if (window < 1 || window > n) throw std::invalid_argument("er_scan_max: bad window");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m + window <= n; ++m)
    best = std::max(best, track.values[m + window] - track.values[m]);
  return best;
}

double er_scan_max_naive(const SampleSeries& series, const Word& word, std::size_t n,
                         std::size_t window) {
  validate_word(word);
  if (word.degree() < 1) throw std::invalid_argument("er_scan_max_naive: degree must be >= 1");
  if (n > series.size()) throw std::invalid_argument("er_scan_max_naive: n exceeds the series");
  if (window < 1 || window > n) throw std::invalid_argument("er_scan_max_naive: bad window");

  // Increment of the full word's sum when sample k arrives: the last letter's
  // coordinate at k times the one-shorter prefix sum over samples before k.
  const auto degree = static_cast<std::size_t>(word.degree());
  const auto last = static_cast<std::size_t>(word.letters[degree - 1] - 1);
  std::vector<double> shorter(n + 1, 1.0);
  if (degree > 1) {
    Word prefix_word(word.d, std::vector<int>(word.letters.begin(), word.letters.end() - 1));
    const auto track = coordinate_track(series, prefix_word);
    for (std::size_t k = 0; k <= n; ++k) shorter[k] = track.values[k];
  }

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m + window <= n; ++m) {
    double sum = 0.0;
    for (std::size_t k = m; k < m + window; ++k) sum += series.sample(k)[last] * shorter[k];
    best = std::max(best, sum);
  }
  return best;
}

ErdosRenyiReport erdos_renyi_scan(const ProcessModel& model, const Word& word, double alpha,
                                  const std::vector<std::size_t>& checkpoints, std::uint64_t seed) {
  if (model.kind() == ProcessModel::Kind::rotation)
    throw std::invalid_argument("erdos_renyi_scan: rotation models are excluded (not mixing)");
  check_word_for(model, word);
  check_checkpoints(checkpoints);
  if (word.degree() < 1) throw std::invalid_argument("erdos_renyi_scan: word degree must be >= 1");

  const int last_letter = word.letters.back();
  const RateFunction rate(model, last_letter);
  if (!(alpha > rate.mean()) || !(alpha < rate.upper()))
    throw std::domain_error("erdos_renyi_scan: alpha outside (mean, essential sup) of coordinate " +
                            std::to_string(last_letter));

  ErdosRenyiReport report;
  report.word = word;
  report.alpha = alpha;
  report.rate_at_alpha = rate(alpha);
  report.essential_sup = rate.upper();
  double leading = 1.0;
  for (int j = 0; j + 1 < word.degree(); ++j)
    leading *= model.mean()[static_cast<std::size_t>(word.letters[static_cast<std::size_t>(j)] - 1)];
  double factorial = 1.0;
  for (int j = 2; j <= word.degree() - 1; ++j) factorial *= static_cast<double>(j);
  report.predicted_limit = alpha * leading / factorial;
  report.checkpoints = checkpoints;
  if (checkpoints.empty()) return report;

  const auto series = generate(model, checkpoints.back(), seed);
  const auto track = coordinate_track(series, word);
  for (std::size_t n : checkpoints) {
    const std::size_t window = window_length(n, report.rate_at_alpha);
    if (!report.window_lengths.empty() && window <= report.window_lengths.back())
      throw std::runtime_error(
          "erdos_renyi_scan: window lengths must grow strictly along the checkpoint grid");
    report.window_lengths.push_back(window);
    const double scan = er_scan_max(track, n, window);
    const double scale = std::pow(static_cast<double>(n), word.degree() - 1) *
                         std::log(static_cast<double>(n));
    report.statistics.push_back(report.rate_at_alpha * scan / scale);
  }
  return report;
}

}  // namespace itersig
