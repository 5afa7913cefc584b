#include "itersig/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "itersig/iterated_integrals.hpp"
#include "itersig/random.hpp"
#include "itersig/version.hpp"

namespace itersig {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config: " + where + ": " + what);
}

bool listed(const std::vector<std::string>& keys, const std::string& key) {
  for (const auto& k : keys)
    if (k == key) return true;
  return false;
}

void check_keys(const json& obj, const std::string& where, const std::vector<std::string>& required,
                const std::vector<std::string>& optional) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& key : required)
    if (!obj.contains(key)) fail(where, "missing required key '" + key + "'");
  for (const auto& item : obj.items())
    if (!listed(required, item.key()) && !listed(optional, item.key()))
      fail(where, "unknown key '" + item.key() + "'");
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

std::uint64_t as_uint(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  fail(where, "expected a non-negative integer");
}

std::vector<double> as_vector(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_double(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<double>> as_matrix(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of rows");
  std::vector<std::vector<double>> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_vector(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

ModelSpec parse_model(const json& node) {
  ModelSpec spec;
  if (!node.is_object() || !node.contains("kind")) fail("model", "missing required key 'kind'");
  const std::string kind = node["kind"].is_string() ? node["kind"].get<std::string>() : "";
  if (kind == "iid") {
    check_keys(node, "model", {"kind", "support", "probs"}, {});
    spec.kind = ProcessModel::Kind::iid;
    spec.iid.support = as_matrix(node["support"], "model.support");
    spec.iid.probs = as_vector(node["probs"], "model.probs");
  } else if (kind == "markov_functional") {
    check_keys(node, "model", {"kind", "transition", "values"}, {});
    spec.kind = ProcessModel::Kind::markov_functional;
    spec.markov.transition = as_matrix(node["transition"], "model.transition");
    spec.markov.values = as_matrix(node["values"], "model.values");
  } else if (kind == "rotation") {
    check_keys(node, "model", {"kind", "observable"}, {"frequency", "start"});
    spec.kind = ProcessModel::Kind::rotation;
    if (node.contains("frequency")) spec.rotation.frequency = as_double(node["frequency"], "model.frequency");
    if (node.contains("start")) spec.rotation.start = as_double(node["start"], "model.start");
    const auto& obs = node["observable"];
    check_keys(obs, "model.observable", {"constant"}, {"cos", "sin"});
    spec.rotation.observable.constant = as_vector(obs["constant"], "model.observable.constant");
    if (obs.contains("cos")) spec.rotation.observable.cos_coeffs = as_matrix(obs["cos"], "model.observable.cos");
    if (obs.contains("sin")) spec.rotation.observable.sin_coeffs = as_matrix(obs["sin"], "model.observable.sin");
  } else {
    fail("model.kind", "expected one of iid | markov_functional | rotation");
  }
  return spec;
}

json model_to_json(const ModelSpec& spec) {
  json node;
  switch (spec.kind) {
    case ProcessModel::Kind::iid:
      node["kind"] = "iid";
      node["support"] = spec.iid.support;
      node["probs"] = spec.iid.probs;
      break;
    case ProcessModel::Kind::markov_functional:
      node["kind"] = "markov_functional";
      node["transition"] = spec.markov.transition;
      node["values"] = spec.markov.values;
      break;
    case ProcessModel::Kind::rotation:
      node["kind"] = "rotation";
      node["frequency"] = spec.rotation.frequency;
      node["start"] = spec.rotation.start;
      node["observable"]["constant"] = spec.rotation.observable.constant;
      if (!spec.rotation.observable.cos_coeffs.empty())
        node["observable"]["cos"] = spec.rotation.observable.cos_coeffs;
      if (!spec.rotation.observable.sin_coeffs.empty())
        node["observable"]["sin"] = spec.rotation.observable.sin_coeffs;
      break;
  }
  return node;
}

std::size_t env_thread_default() {
  if (const char* env = std::getenv("ITERSIG_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && parsed >= 1) return static_cast<std::size_t>(parsed);
  }
  return 1;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::almost_sure: return "as";
    case ExperimentKind::l1: return "l1";
    case ExperimentKind::continuous: return "continuous";
    case ExperimentKind::er: return "er";
    case ExperimentKind::identity_suite: return "identity-suite";
  }
  return "?";
}

ExperimentKind experiment_kind_from(const std::string& name) {
  if (name == "as") return ExperimentKind::almost_sure;
  if (name == "l1") return ExperimentKind::l1;
  if (name == "continuous") return ExperimentKind::continuous;
  if (name == "er") return ExperimentKind::er;
  if (name == "identity-suite") return ExperimentKind::identity_suite;
  fail("experiment", "unknown experiment kind '" + name + "'");
}

ProcessModel ModelSpec::build() const {
  switch (kind) {
    case ProcessModel::Kind::iid: return ProcessModel::iid(iid);
    case ProcessModel::Kind::markov_functional: return ProcessModel::markov_functional(markov);
    case ProcessModel::Kind::rotation: return ProcessModel::rotation(rotation);
  }
  throw std::logic_error("ModelSpec: unknown kind");
}

ExperimentConfig parse_config(const json& root) {
  if (!root.is_object() || !root.contains("experiment"))
    fail("", "missing required key 'experiment'");
  if (!root["experiment"].is_string()) fail("experiment", "expected a string");

  ExperimentConfig config;
  config.kind = experiment_kind_from(root["experiment"].get<std::string>());

  if (config.kind == ExperimentKind::identity_suite) {
    check_keys(root, "", {"experiment", "seed"}, {"output"});
    config.seed = as_uint(root["seed"], "seed");
    if (root.contains("output")) {
      if (!root["output"].is_string()) fail("output", "expected a string");
      config.output = root["output"].get<std::string>();
    }
    return config;
  }

  std::vector<std::string> required = {"experiment", "seed", "output", "model",
                                       "words",      "depth", "checkpoints"};
  if (config.kind == ExperimentKind::l1) required.push_back("replications");
  if (config.kind == ExperimentKind::er) required.push_back("alphas");
  if (config.kind == ExperimentKind::continuous) required.push_back("step");
  check_keys(root, "", required, {"flags"});

  config.seed = as_uint(root["seed"], "seed");
  if (!root["output"].is_string() || root["output"].get<std::string>().empty())
    fail("output", "expected a non-empty string");
  config.output = root["output"].get<std::string>();
  config.model = parse_model(root["model"]);

  ProcessModel model = config.model.build();

  const auto depth = as_uint(root["depth"], "depth");
  if (depth < 1 || depth > 12) fail("depth", "expected a depth in 1..12");
  config.depth = static_cast<int>(depth);

  if (!root["words"].is_array() || root["words"].empty()) fail("words", "expected a non-empty array");
  for (std::size_t wi = 0; wi < root["words"].size(); ++wi) {
    const auto& entry = root["words"][wi];
    const std::string where = "words[" + std::to_string(wi) + "]";
    if (!entry.is_array() || entry.empty()) fail(where, "expected a non-empty array of letters");
    Word word(model.dimension(), {});
    for (std::size_t j = 0; j < entry.size(); ++j) {
      const auto letter = as_uint(entry[j], where + "[" + std::to_string(j) + "]");
      if (letter < 1 || letter > static_cast<std::uint64_t>(model.dimension()))
        fail(where, "letter outside 1.." + std::to_string(model.dimension()));
      word.letters.push_back(static_cast<int>(letter));
    }
    if (word.degree() > config.depth) fail(where, "degree exceeds the configured depth");
    config.words.push_back(std::move(word));
  }

  if (!root["checkpoints"].is_array() || root["checkpoints"].empty())
    fail("checkpoints", "expected a non-empty array");
  for (std::size_t k = 0; k < root["checkpoints"].size(); ++k) {
    const auto n = as_uint(root["checkpoints"][k], "checkpoints[" + std::to_string(k) + "]");
    if (n < 1) fail("checkpoints", "entries must be >= 1");
    if (!config.checkpoints.empty() && n <= config.checkpoints.back())
      fail("checkpoints", "entries must be strictly increasing");
    config.checkpoints.push_back(n);
  }

  if (config.kind == ExperimentKind::l1) {
    config.replications = as_uint(root["replications"], "replications");
    if (config.replications < 2) fail("replications", "need at least 2");
  }
  if (config.kind == ExperimentKind::er) {
    const auto alphas = as_vector(root["alphas"], "alphas");
    if (alphas.empty()) fail("alphas", "expected a non-empty array");
    config.alphas = alphas;
    for (const auto& word : config.words) {
      const RateFunction rate(model, word.letters.back());
      for (double alpha : config.alphas)
        if (!(alpha > rate.mean()) || !(alpha < rate.upper()))
          fail("alphas", "alpha " + format_double(alpha) + " outside (" + format_double(rate.mean()) +
                             ", " + format_double(rate.upper()) + ") for word " + word.label());
    }
  }
  if (config.kind == ExperimentKind::continuous) {
    config.step = as_double(root["step"], "step");
    if (!(config.step > 0.0) || !std::isfinite(config.step)) fail("step", "expected a positive number");
  }

  if (root.contains("flags")) {
    const auto& flags = root["flags"];
    std::vector<std::string> allowed;
    if (config.kind == ExperimentKind::er)
      allowed = {"decimation"};
    else
      allowed = {"kahan"};
    check_keys(flags, "flags", {}, allowed);
    if (flags.contains("kahan")) {
      if (!flags["kahan"].is_boolean()) fail("flags.kahan", "expected a boolean");
      config.flags.kahan = flags["kahan"].get<bool>();
    }
    if (flags.contains("decimation"))
      config.flags.decimation = as_uint(flags["decimation"], "flags.decimation");
  }

  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& error) {
    throw std::invalid_argument("config " + path + ": " + error.what());
  }
  return parse_config(root);
}

json config_to_json(const ExperimentConfig& config) {
  json root;
  root["experiment"] = to_string(config.kind);
  root["seed"] = config.seed;
  if (config.kind == ExperimentKind::identity_suite) {
    if (!config.output.empty()) root["output"] = config.output;
    return root;
  }
  root["output"] = config.output;
  root["model"] = model_to_json(config.model);
  json words = json::array();
  for (const auto& word : config.words) words.push_back(word.letters);
  root["words"] = words;
  root["depth"] = config.depth;
  root["checkpoints"] = config.checkpoints;
  if (config.kind == ExperimentKind::l1) root["replications"] = config.replications;
  if (config.kind == ExperimentKind::er) root["alphas"] = config.alphas;
  if (config.kind == ExperimentKind::continuous) root["step"] = config.step;
  if (!(config.flags == ExperimentFlags{})) {
    if (config.flags.kahan) root["flags"]["kahan"] = true;
    if (config.flags.decimation > 0) root["flags"]["decimation"] = config.flags.decimation;
  }
  return root;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string convergence_csv(const ConvergenceReport& report) {
  const bool with_stderr = report.mode == SweepMode::l1_monte_carlo;
  std::string out = with_stderr ? "n,value,limit,abs_error,stderr\n" : "n,value,limit,abs_error\n";
  for (std::size_t k = 0; k < report.checkpoints.size(); ++k) {
    out += std::to_string(report.checkpoints[k]);
    out += ',';
    out += format_double(report.values[k]);
    out += ',';
    out += format_double(report.limit);
    out += ',';
    out += format_double(report.errors[k]);
    if (with_stderr) {
      out += ',';
      out += format_double(report.stderrs[k]);
    }
    out += '\n';
  }
  return out;
}

std::string er_csv(const ErdosRenyiReport& report) {
  std::string out = "n,ell_n,statistic,predicted_limit,I_alpha\n";
  for (std::size_t k = 0; k < report.checkpoints.size(); ++k) {
    out += std::to_string(report.checkpoints[k]);
    out += ',';
    out += std::to_string(report.window_lengths[k]);
    out += ',';
    out += format_double(report.statistics[k]);
    out += ',';
    out += format_double(report.predicted_limit);
    out += ',';
    out += format_double(report.rate_at_alpha);
    out += '\n';
  }
  return out;
}

std::string track_csv(const CoordinateTrack& track, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("track_csv: stride must be >= 1");
  std::string out = "m,value\n";
  for (std::size_t m = 0; m < track.values.size(); m += stride) {
    out += std::to_string(m);
    out += ',';
    out += format_double(track.values[m]);
    out += '\n';
  }
  return out;
}

std::vector<IdentityCheck> run_identity_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto unit = [&rng] { return 2.0 * uniform01(rng) - 1.0; };
  const auto random_state = [&rng, &unit](int d, int depth) {
    std::vector<LevelTensor> levels;
    for (int n = 0; n <= depth; ++n) {
      LevelTensor level(n, d);
      for (std::size_t i = 0; i < level.size(); ++i) level[i] = unit();
      levels.push_back(std::move(level));
    }
    levels[0][0] = 1.0;
    return SignatureState::from_levels(d, depth, std::move(levels), 0.0);
  };
  const auto random_series = [&rng, &unit](int d, std::size_t n) {
    std::vector<double> flat(n * static_cast<std::size_t>(d));
    for (double& x : flat) x = unit();
    return SampleSeries(d, std::move(flat));
  };
  const auto close = [](double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
  };

  std::vector<IdentityCheck> checks;

  {
    IdentityCheck check{"abel_summation_vs_dot_product", 1000, 0};
    for (std::size_t t = 0; t < check.trials; ++t) {
      const std::size_t len = 1 + static_cast<std::size_t>(rng() % 50);
      std::vector<double> a(len), b(len);
      for (double& x : a) x = unit();
      for (double& x : b) x = unit();
      double dot = 0.0;
      for (std::size_t r = 0; r < len; ++r) dot += a[r] * b[r];
      if (std::abs(abel_summation(a, b) - dot) > 1e-12) ++check.failures;
    }
    checks.push_back(check);
  }

  {
    IdentityCheck check{"streaming_vs_enumeration", 60, 0};
    for (std::size_t t = 0; t < check.trials; ++t) {
      const int d = 1 + static_cast<int>(rng() % 3);
      const int depth = 1 + static_cast<int>(rng() % 4);
      const std::size_t n = rng() % 13;
      const auto series = random_series(d, n);
      SignatureState state(d, depth);
      for (std::size_t k = 0; k < n; ++k) state.push(series.sample(k));
      bool ok = true;
      for (int degree = 1; degree <= depth; ++degree)
        for (std::size_t offset = 0; offset < level_size(d, degree); ++offset) {
          const Word w = unflatten_index(offset, d, degree);
          if (std::abs(state.entry(w) - brute_force_sum(series, w, n)) > 1e-12) ok = false;
        }
      if (!ok) ++check.failures;
    }
    checks.push_back(check);
  }

  {
    IdentityCheck check{"chen_concat_associativity", 100, 0};
    for (std::size_t t = 0; t < check.trials; ++t) {
      const int d = 1 + static_cast<int>(rng() % 3);
      const int depth = 1 + static_cast<int>(rng() % 5);
      const auto a = random_state(d, depth);
      const auto b = random_state(d, depth);
      const auto c = random_state(d, depth);
      const auto left = chen_concat(chen_concat(a, b), c);
      const auto right = chen_concat(a, chen_concat(b, c));
      for (int n = 0; n <= depth; ++n)
        for (std::size_t i = 0; i < left.level(n).size(); ++i)
          if (std::abs(left.level(n)[i] - right.level(n)[i]) > 1e-12) {
            ++check.failures;
            n = depth + 1;
            break;
          }
    }
    checks.push_back(check);
  }

  {
    IdentityCheck check{"tensor_exp_semigroup", 100, 0};
    for (std::size_t t = 0; t < check.trials; ++t) {
      const int d = 1 + static_cast<int>(rng() % 3);
      const int depth = 1 + static_cast<int>(rng() % 5);
      std::vector<double> v(static_cast<std::size_t>(d));
      for (double& x : v) x = unit();
      const double h1 = uniform01(rng) + 1e-3;
      const double h2 = uniform01(rng) + 1e-3;
      const auto combined = chen_concat(tensor_exp(v, h1, depth), tensor_exp(v, h2, depth));
      const auto direct = tensor_exp(v, h1 + h2, depth);
      for (int n = 0; n <= depth; ++n)
        for (std::size_t i = 0; i < combined.level(n).size(); ++i)
          if (std::abs(combined.level(n)[i] - direct.level(n)[i]) > 1e-12) {
            ++check.failures;
            n = depth + 1;
            break;
          }
    }
    checks.push_back(check);
  }

  {
    IdentityCheck check{"discrete_quasi_shuffle", 100, 0};
    for (std::size_t t = 0; t < check.trials; ++t) {
      const int d = 1 + static_cast<int>(rng() % 3);
      const std::size_t n = 2 + rng() % 39;
      const auto series = random_series(d, n);
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
      bool ok = true;
      for (int i = 1; i <= d && ok; ++i)
        for (int j = 1; j <= d && ok; ++j) {
          const double lhs = state.entry(Word(d, {i})) * state.entry(Word(d, {j}));
          const double rhs = state.entry(Word(d, {i, j})) + state.entry(Word(d, {j, i})) +
                             diagonal[static_cast<std::size_t>((i - 1) * d + (j - 1))];
          if (!close(lhs, rhs, 1e-10)) ok = false;
        }
      if (!ok) ++check.failures;
    }
    checks.push_back(check);
  }

  {
    IdentityCheck check{"continuous_shuffle", 100, 0};
    for (std::size_t t = 0; t < check.trials; ++t) {
      const int d = 2 + static_cast<int>(rng() % 2);
      const std::size_t segments = 1 + rng() % 16;
      std::vector<double> flat(segments * static_cast<std::size_t>(d));
      for (double& x : flat) x = unit();
      const PathGrid path(d, 0.25 + uniform01(rng), std::move(flat));
      const auto state = path_signature(path, 2);
      bool ok = true;
      for (int i = 1; i <= d && ok; ++i)
        for (int j = 1; j <= d && ok; ++j) {
          const double lhs = state.entry(Word(d, {i})) * state.entry(Word(d, {j}));
          const double rhs = state.entry(Word(d, {i, j})) + state.entry(Word(d, {j, i}));
          if (!close(lhs, rhs, 1e-10)) ok = false;
        }
      if (!ok) ++check.failures;
    }
    checks.push_back(check);
  }

  {
    IdentityCheck check{"scalar_path_power_identity", 100, 0};
    for (std::size_t t = 0; t < check.trials; ++t) {
      const int depth = 2 + static_cast<int>(rng() % 4);
      const std::size_t segments = 1 + rng() % 16;
      std::vector<double> flat(segments);
      for (double& x : flat) x = unit();
      const PathGrid path(1, 0.25 + uniform01(rng), std::move(flat));
      const auto state = path_signature(path, depth);
      const double first = state.level(1)[0];
      bool ok = true;
      double power = 1.0;
      double factorial = 1.0;
      for (int n = 1; n <= depth; ++n) {
        power *= first;
        factorial *= static_cast<double>(n);
        if (!close(state.level(n)[0], power / factorial, 1e-10)) ok = false;
      }
      if (!ok) ++check.failures;
    }
    checks.push_back(check);
  }

  {
    IdentityCheck check{"riemann_refinement_halves_error", 1, 0};
    double ratio_sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t t = 0; t < 40; ++t) {
      const int d = 1 + static_cast<int>(rng() % 3);
      const int degree = 2 + static_cast<int>(rng() % 2);
      const std::size_t segments = 2 + rng() % 8;
      std::vector<double> flat(segments * static_cast<std::size_t>(d));
      for (double& x : flat) x = unit();
      const PathGrid path(d, 0.5, std::move(flat));
      Word w(d, {});
      for (int j = 0; j < degree; ++j) w.letters.push_back(1 + static_cast<int>(rng() % d));
      const double exact = path_signature(path, degree).entry(w);
      const double coarse = std::abs(riemann_iterated_integral(path, w, 4) - exact);
      const double fine = std::abs(riemann_iterated_integral(path, w, 8) - exact);
      if (coarse > 1e-13 && fine > 0.0) {
        ratio_sum += coarse / fine;
        ++counted;
      }
    }
    if (counted == 0 || ratio_sum / static_cast<double>(counted) < 1.8) check.failures = 1;
    checks.push_back(check);
  }

  return checks;
}

int run_experiment(const ExperimentConfig& config, const RunOptions& options, std::ostream& log) {
  namespace fs = std::filesystem;
  const fs::path out_dir =
      options.output_override.empty() ? fs::path(config.output) : fs::path(options.output_override);

  const auto write_manifest = [&] {
    json manifest;
    manifest["config"] = config_to_json(config);
    manifest["library_version"] = version_string;
    manifest["seed"] = config.seed;
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  };

  if (config.kind == ExperimentKind::identity_suite) {
    const auto checks = run_identity_suite(config.seed);
    int failed = 0;
    for (const auto& check : checks) {
      log << "identity " << check.name << ": " << (check.trials - check.failures) << "/" << check.trials
          << " passed\n";
      if (check.failures > 0) ++failed;
    }
    log << (failed == 0 ? "identity suite: all checks passed\n"
                        : "identity suite: " + std::to_string(failed) + " check(s) FAILED\n");
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      write_manifest();
    }
    return failed;
  }

  const ProcessModel model = config.model.build();

  struct Job {
    std::string filename;
    std::function<std::string()> produce;
  };
  std::vector<Job> jobs;
  for (const auto& word : config.words) {
    const std::string stem = std::string(to_string(config.kind)) + "_w" + word.label();
    switch (config.kind) {
      case ExperimentKind::almost_sure:
        jobs.push_back({stem + ".csv", [&, word] {
                          return convergence_csv(almost_sure_sweep(model, word, config.checkpoints,
                                                                   config.seed, config.flags.kahan));
                        }});
        break;
      case ExperimentKind::l1:
        jobs.push_back({stem + ".csv", [&, word] {
                          return convergence_csv(l1_sweep(model, word, config.checkpoints,
                                                          config.replications, config.seed,
                                                          config.flags.kahan));
                        }});
        break;
      case ExperimentKind::continuous:
        jobs.push_back({stem + ".csv", [&, word] {
                          return convergence_csv(continuous_sweep(model, word, config.step,
                                                                  config.checkpoints, config.seed,
                                                                  config.flags.kahan));
                        }});
        break;
      case ExperimentKind::er: {
        for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) {
          const double alpha = config.alphas[ai];
          jobs.push_back({stem + "_a" + std::to_string(ai) + ".csv", [&, word, alpha] {
                            return er_csv(
                                erdos_renyi_scan(model, word, alpha, config.checkpoints, config.seed));
                          }});
        }
        if (config.flags.decimation > 0)
          jobs.push_back({stem + "_track.csv", [&, word] {
                            const auto series = generate(model, config.checkpoints.back(), config.seed);
                            return track_csv(coordinate_track(series, word), config.flags.decimation);
                          }});
        break;
      }
      case ExperimentKind::identity_suite:
        break;
    }
  }

  std::size_t threads = options.threads > 0 ? options.threads : env_thread_default();
  threads = std::min(threads, jobs.size());
  std::vector<std::string> results(jobs.size());
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        results[i] = jobs[i].produce();
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    write_file(out_dir / jobs[i].filename, results[i]);
    log << "wrote " << (out_dir / jobs[i].filename).string() << "\n";
  }
  write_manifest();
  log << "wrote " << (out_dir / "manifest.json").string() << "\n";
  return 0;
}

}  // namespace itersig
