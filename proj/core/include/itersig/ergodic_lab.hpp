#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "itersig/iterated_sums.hpp"
#include "itersig/large_deviations.hpp"
#include "itersig/processes.hpp"

namespace itersig {

enum class SweepMode { almost_sure_discrete, almost_sure_continuous, l1_monte_carlo };

/// Convergence of one normalized word entry toward its ergodic limit along a
/// checkpoint grid. For L1 sweeps, values/errors are Monte Carlo means with a
/// standard-error column.
struct ConvergenceReport {
  Word word;
  SweepMode mode = SweepMode::almost_sure_discrete;
  std::vector<std::size_t> checkpoints;
  std::vector<double> values;
  double limit = 0.0;
  std::vector<double> errors;
  std::vector<double> stderrs;          // l1 mode only, else empty
  std::optional<double> slope;          // log-log decay fit, needs >= 4 positive errors
  double step = 1.0;                    // continuous mode: grid step h
};

/// Scan-statistic trajectory for one word and level alpha.
struct ErdosRenyiReport {
  Word word;
  double alpha = 0.0;
  double rate_at_alpha = 0.0;
  double essential_sup = 0.0;
  double predicted_limit = 0.0;
  std::vector<std::size_t> checkpoints;
  std::vector<std::size_t> window_lengths;
  std::vector<double> statistics;
};

/// One streamed trajectory: the normalized word entry at every checkpoint.
/// Shared by the almost-sure sweep and each Monte Carlo replication, so a
/// single replication retraces the almost-sure path exactly.
std::vector<double> single_trajectory_values(const ProcessModel& model, const Word& word,
                                             const std::vector<std::size_t>& checkpoints,
                                             std::uint64_t seed, bool compensated = false);

/// Almost-sure sweep: one trajectory, errors against the exact limit.
ConvergenceReport almost_sure_sweep(const ProcessModel& model, const Word& word,
                                    const std::vector<std::size_t>& checkpoints, std::uint64_t seed,
                                    bool compensated = false);

/// Continuous counterpart of single_trajectory_values: the series becomes a
/// piecewise-constant path at the given step, normalized by duration.
std::vector<double> continuous_trajectory_values(const ProcessModel& model, const Word& word,
                                                 double step,
                                                 const std::vector<std::size_t>& checkpoints,
                                                 std::uint64_t seed, bool compensated = false);

/// Monte Carlo mean-error sweep over `replications` independent seed streams
/// (replication 0 re-uses the base seed). With continuous_step > 0 each
/// replication streams the continuous engine instead of the discrete one.
ConvergenceReport l1_sweep(const ProcessModel& model, const Word& word,
                           const std::vector<std::size_t>& checkpoints, std::size_t replications,
                           std::uint64_t seed, bool compensated = false, double continuous_step = 0.0);

/// Continuous-time sweep: the generated series becomes a piecewise-constant
/// path at step h; checkpoints count consumed segments, so checkpoint n
/// means duration n*h.
ConvergenceReport continuous_sweep(const ProcessModel& model, const Word& word, double step,
                                   const std::vector<std::size_t>& checkpoints, std::uint64_t seed,
                                   bool compensated = false);

/// Largest window increment max_m (track[m+window] - track[m]) over
/// 0 <= m <= n - window; one linear pass over the prefix trajectory.
double er_scan_max(const CoordinateTrack& track, std::size_t n, std::size_t window);

/// Same maximum, re-deriving every window sum from the sample series and the
/// word's one-letter-shorter prefix trajectory, O(n * window). Independent
/// route kept as a cross-check of the prefix-difference scan.
double er_scan_max_naive(const SampleSeries& series, const Word& word, std::size_t n,
                         std::size_t window);

/// Erdos-Renyi scan: per checkpoint n, window floor(log n / I(alpha)) and
/// statistic I(alpha) * max window increment / (n^(degree-1) log n).
ErdosRenyiReport erdos_renyi_scan(const ProcessModel& model, const Word& word, double alpha,
                                  const std::vector<std::size_t>& checkpoints, std::uint64_t seed);

}  // namespace itersig
