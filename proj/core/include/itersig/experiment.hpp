#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "itersig/ergodic_lab.hpp"
#include "itersig/processes.hpp"

namespace itersig {

enum class ExperimentKind { almost_sure, l1, continuous, er, identity_suite };

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from(const std::string& name);

/// Model description as configured; build() constructs (and so validates)
/// the generator.
struct ModelSpec {
  ProcessModel::Kind kind = ProcessModel::Kind::iid;
  IidSpec iid;
  MarkovFunctionalSpec markov;
  RotationSpec rotation;

  bool operator==(const ModelSpec&) const = default;
  ProcessModel build() const;
};

struct ExperimentFlags {
  bool kahan = false;
  std::size_t decimation = 0;  // er only: stride for the optional track dump, 0 = off

  bool operator==(const ExperimentFlags&) const = default;
};

/// One experiment, fully specified: no wall-clock seeding, no implicit
/// defaults that change results.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::identity_suite;
  std::uint64_t seed = 0;
  std::string output;
  ModelSpec model;
  std::vector<Word> words;
  int depth = 1;
  std::vector<std::size_t> checkpoints;
  std::size_t replications = 0;  // l1 only
  std::vector<double> alphas;    // er only
  double step = 1.0;             // continuous only
  ExperimentFlags flags;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Strict parse: unknown or inapplicable keys are hard errors with the
/// offending path in the message.
ExperimentConfig parse_config(const nlohmann::json& root);
ExperimentConfig parse_config_file(const std::string& path);

/// Canonical echo with defaults materialized; parse_config(config_to_json(c))
/// reproduces c exactly.
nlohmann::json config_to_json(const ExperimentConfig& config);

/// 17-significant-digit decimal rendering, round-trip exact for doubles.
std::string format_double(double value);

std::string convergence_csv(const ConvergenceReport& report);
std::string er_csv(const ErdosRenyiReport& report);
std::string track_csv(const CoordinateTrack& track, std::size_t stride);

struct IdentityCheck {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
};

/// Self-contained algebraic identity checks over seeded random fixtures
/// (Abel summation, streaming vs enumeration, Chen algebra, quasi-shuffle vs
/// shuffle, oracle refinement).
std::vector<IdentityCheck> run_identity_suite(std::uint64_t seed);

struct RunOptions {
  std::size_t threads = 0;       // 0: ITERSIG_THREADS env var, else 1
  std::string output_override;   // replaces config.output when non-empty
};

/// Runs the configured experiment, writing one CSV per (word[, alpha]) plus
/// manifest.json under the output directory. Returns the number of failed
/// identity checks (always 0 for sweep experiments; they throw on error).
int run_experiment(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);

}  // namespace itersig
