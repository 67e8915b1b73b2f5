// Experiment configuration, the experiment runners and result persistence.
//
// Every replicate draws from its own stream, keyed by (experiment tag, n,
// replicate index), and per-replicate results are reduced in replicate
// order. Tables therefore do not depend on the worker count.
#pragma once

#include <json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "nodalcount/ensembles.hpp"
#include "nodalcount/error.hpp"
#include "nodalcount/nodal.hpp"
#include "nodalcount/oracles.hpp"
#include "nodalcount/parallel.hpp"
#include "nodalcount/sampling.hpp"
#include "nodalcount/spectral.hpp"
#include "nodalcount/stats.hpp"

namespace nodalcount {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240611;

enum class ExperimentKind {
  MixtureDemo,
  MeanVarianceSweep,
  WassersteinSweep,
  KsSweep,
  VarianceScaling,
  TheoremCheck,
  VerifySuite,
};

inline constexpr std::array<std::pair<ExperimentKind, const char*>, 7> kExperimentNames{{
    {ExperimentKind::MixtureDemo, "mixture_demo"},
    {ExperimentKind::MeanVarianceSweep, "mean_variance_sweep"},
    {ExperimentKind::WassersteinSweep, "wasserstein_sweep"},
    {ExperimentKind::KsSweep, "ks_sweep"},
    {ExperimentKind::VarianceScaling, "variance_scaling"},
    {ExperimentKind::TheoremCheck, "theorem_check"},
    {ExperimentKind::VerifySuite, "verify_suite"},
}};

inline std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kExperimentNames)
    if (k == kind) return name;
  return "unknown";
}

inline ExperimentKind parse_experiment(const std::string& name) {
  for (const auto& [k, n] : kExperimentNames)
    if (name == n) return k;
  throw ConfigError("unknown experiment '" + name + "'");
}

/// Which eigenvector indices an experiment reports.
struct KSubset {
  enum class Mode { All, Deciles, List };

  Mode mode = Mode::All;
  std::vector<Eigen::Index> values;  // List

  /// 1-based indices, ascending and distinct. Deciles are
  /// max(1, ceil(d n / 10)) for d = 0..10.
  std::vector<Eigen::Index> resolve(Eigen::Index n) const {
    std::vector<Eigen::Index> ks;
    switch (mode) {
      case Mode::All:
        for (Eigen::Index k = 1; k <= n; ++k) ks.push_back(k);
        break;
      case Mode::Deciles:
        for (Eigen::Index d = 0; d <= 10; ++d) ks.push_back(std::max<Eigen::Index>(1, (d * n + 9) / 10));
        break;
      case Mode::List:
        for (Eigen::Index k : values) {
          if (k < 1 || k > n) throw ConfigError("k_subset entry " + std::to_string(k) + " outside [1, n]");
          ks.push_back(k);
        }
        break;
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
  }
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::MeanVarianceSweep;
  std::vector<Eigen::Index> n_grid;
  std::uint64_t replicates = 1;
  // Eigenvalue-only draws for the theorem check reference; 0 = replicates.
  std::uint64_t reference_replicates = 0;
  EigenvalueLaw law;
  KSubset k_subset;
  SeedPlan seed{kDefaultSeed};
  int workers = 1;
  std::string output_dir = "runs";
  std::map<std::string, double> tolerances;
  // Monte Carlo draws per verify-suite estimator; 0 keeps each check's default.
  std::uint64_t mc_samples = 0;

  Eigen::Index n() const { return n_grid.front(); }

  double tolerance(const std::string& key) const {
    const auto it = tolerances.find(key);
    if (it == tolerances.end()) throw ConfigError("missing tolerance '" + key + "'");
    return it->second;
  }

  void validate() const {
    if (n_grid.empty()) throw ConfigError("n or n_grid is required");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      if (n_grid[i] < 2) throw ConfigError("n must be >= 2");
      if (n_grid[i] > 0xFFFF) throw ConfigError("n must be < 65536");
      if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid must be strictly ascending");
    }
    if (replicates < 1) throw ConfigError("replicates must be >= 1");
    if (replicates > 0xFFFFFFFFu) throw ConfigError("replicates must be < 2^32");
    if (experiment == ExperimentKind::KsSweep && replicates < 50)
      throw ConfigError("ks_sweep needs replicates >= 50");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    try {
      law.validate();
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
    if (law.variant == EigenvalueLaw::Variant::Explicit)
      for (Eigen::Index n : n_grid)
        if (static_cast<Eigen::Index>(law.values.size()) != n)
          throw ConfigError("explicit law needs exactly n values");
    if (law.variant == EigenvalueLaw::Variant::Explicit && law.normalize && law.values.size() >= 2) {
      const auto [lo, hi] = std::minmax_element(law.values.begin(), law.values.end());
      if (*lo == *hi) throw ConfigError("explicit law with normalize needs non-constant values");
    }
    if (k_subset.mode == KSubset::Mode::List) {
      if (k_subset.values.empty()) throw ConfigError("k_subset list must be nonempty");
      for (Eigen::Index n : n_grid) (void)k_subset.resolve(n);
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["experiment"] = to_string(experiment);
    if (n_grid.size() == 1)
      j["n"] = n_grid.front();
    else
      j["n_grid"] = n_grid;
    j["replicates"] = replicates;
    j["reference_replicates"] = reference_replicates;
    nlohmann::json law_j;
    law_j["variant"] = to_string(law.variant);
    law_j["normalize"] = law.normalize;
    if (law.variant == EigenvalueLaw::Variant::IidMixture) {
      law_j["components"] = nlohmann::json::array();
      for (const auto& c : law.components)
        law_j["components"].push_back({{"weight", c.weight}, {"mean", c.mean}, {"std", c.std}});
    }
    if (law.variant == EigenvalueLaw::Variant::Explicit) law_j["values"] = law.values;
    j["law"] = law_j;
    switch (k_subset.mode) {
      case KSubset::Mode::All: j["k_subset"] = "all"; break;
      case KSubset::Mode::Deciles: j["k_subset"] = "deciles"; break;
      case KSubset::Mode::List: j["k_subset"] = k_subset.values; break;
    }
    j["seed"] = seed.master_seed;
    j["workers"] = workers;
    j["output_dir"] = output_dir;
    j["tolerances"] = tolerances;
    j["mc_samples"] = mc_samples;
    return j;
  }
};

/// Desk-scale defaults for each experiment.
inline ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  c.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  switch (kind) {
    case ExperimentKind::MixtureDemo:
      c.n_grid = {2000};
      c.law = EigenvalueLaw::trimodal_demo();
      c.tolerances = {{"w1_max", 0.2}, {"expected_modes", 3.0}};
      break;
    case ExperimentKind::MeanVarianceSweep:
      c.n_grid = {128};
      c.replicates = 2000;
      c.tolerances = {{"mean_frac_low", 0.44},  {"mean_frac_high", 0.56}, {"std_frac_max", 0.02},
                      {"antisymmetry_sigmas", 3.0}, {"antisymmetry_share", 0.9}, {"antisymmetry_hard_sigmas", 5.0},
                      {"nongeneric_max_fraction", 1e-3}};
      break;
    case ExperimentKind::WassersteinSweep:
      c.n_grid = {64, 128, 256, 512};
      c.replicates = 10;
      c.tolerances = {{"w1_max", 0.3}, {"self_test_max", 0.01}};
      break;
    case ExperimentKind::KsSweep:
      c.n_grid = {16, 32, 64};
      c.replicates = 2000;
      c.tolerances = {{"ks_max", 0.2}};
      break;
    case ExperimentKind::VarianceScaling:
      c.n_grid = {16, 32, 64, 128};
      c.replicates = 5000;
      c.tolerances = {{"slope_low", 1.8}, {"slope_high", 2.2}, {"bound_power", 2.5}};
      break;
    case ExperimentKind::TheoremCheck:
      c.n_grid = {256};
      c.replicates = 2000;
      c.reference_replicates = 2000;
      c.k_subset.mode = KSubset::Mode::Deciles;
      c.tolerances = {{"max_gap", 0.15}, {"middle_max", 0.1}, {"edge_low", 1.5}, {"edge_high", 2.2}};
      break;
    case ExperimentKind::VerifySuite:
      c.n_grid = {16};
      c.replicates = 10000;
      c.tolerances = {{"sigmas", 4.0}, {"decomposition_sigmas", 5.0}, {"adjacent_cov_max", 0.2},
                      {"nonadjacent_cov_slack", 0.01}, {"signing_w1_max", 0.1}};
      break;
  }
  return c;
}

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline EigenvalueLaw parse_law(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("law must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "variant" && key != "components" && key != "values" && key != "normalize")
      throw ConfigError("unknown law field '" + key + "'");
  EigenvalueLaw law;
  const std::string variant = require(j, "variant").get<std::string>();
  law.normalize = j.value("normalize", false);
  if (variant == "goe") {
    law.variant = EigenvalueLaw::Variant::GoeImplicit;
  } else if (variant == "iid_mixture") {
    law.variant = EigenvalueLaw::Variant::IidMixture;
    for (const auto& c : require(j, "components"))
      law.components.push_back({require(c, "weight").get<double>(), require(c, "mean").get<double>(),
                                require(c, "std").get<double>()});
  } else if (variant == "explicit") {
    law.variant = EigenvalueLaw::Variant::Explicit;
    law.values = require(j, "values").get<std::vector<double>>();
  } else {
    throw ConfigError("unknown law variant '" + variant + "'");
  }
  return law;
}

inline std::uint64_t positive_count(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError(std::string(key) + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace detail

/// Reads a configuration on top of the defaults for its experiment. The
/// experiment comes from the "experiment" field or, failing that, from
/// `fallback`. Throws ConfigError for malformed or invalid input.
inline ExperimentConfig config_from_json(const nlohmann::json& j, std::optional<ExperimentKind> fallback = {}) {
  static const std::array<const char*, 12> kKnown{"experiment", "n", "n_grid", "replicates", "reference_replicates", "law",
                                                  "k_subset", "tolerances", "seed", "workers", "output_dir", "mc_samples"};
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : j.items())
      if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end())
        throw ConfigError("unknown config field '" + key + "'");

    ExperimentKind kind;
    if (j.contains("experiment")) {
      kind = parse_experiment(j.at("experiment").get<std::string>());
      if (fallback && *fallback != kind)
        throw ConfigError("config experiment '" + to_string(kind) + "' does not match '" + to_string(*fallback) + "'");
    } else if (fallback) {
      kind = *fallback;
    } else {
      throw ConfigError("missing field 'experiment'");
    }
    ExperimentConfig c = default_config(kind);

    if (j.contains("n") && j.contains("n_grid")) throw ConfigError("give either n or n_grid, not both");
    if (j.contains("n")) {
      const auto& n = j.at("n");
      if (!n.is_number_integer()) throw ConfigError("n must be an integer");
      c.n_grid = {n.get<Eigen::Index>()};
    }
    if (j.contains("n_grid")) {
      c.n_grid.clear();
      for (const auto& n : j.at("n_grid")) {
        if (!n.is_number_integer()) throw ConfigError("n_grid entries must be integers");
        c.n_grid.push_back(n.get<Eigen::Index>());
      }
    }
    if (j.contains("replicates")) c.replicates = detail::positive_count(j, "replicates");
    if (j.contains("reference_replicates")) c.reference_replicates = detail::positive_count(j, "reference_replicates");
    if (j.contains("mc_samples")) c.mc_samples = detail::positive_count(j, "mc_samples");
    if (j.contains("seed")) c.seed.master_seed = detail::positive_count(j, "seed");
    if (j.contains("workers")) c.workers = static_cast<int>(detail::positive_count(j, "workers"));
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("law")) {
      c.law = detail::parse_law(j.at("law"));
      // Mode counting only means something for a mixture law.
      const bool modes_given = j.contains("tolerances") && j.at("tolerances").contains("expected_modes");
      if (kind == ExperimentKind::MixtureDemo && !modes_given &&
          c.law.variant != EigenvalueLaw::Variant::IidMixture)
        c.tolerances["expected_modes"] = 0.0;
    }
    if (j.contains("k_subset")) {
      const auto& k = j.at("k_subset");
      if (k.is_string()) {
        const auto s = k.get<std::string>();
        if (s == "all")
          c.k_subset.mode = KSubset::Mode::All;
        else if (s == "deciles")
          c.k_subset.mode = KSubset::Mode::Deciles;
        else
          throw ConfigError("k_subset must be \"all\", \"deciles\" or a list");
      } else if (k.is_array()) {
        c.k_subset.mode = KSubset::Mode::List;
        c.k_subset.values = k.get<std::vector<Eigen::Index>>();
      } else {
        throw ConfigError("k_subset must be \"all\", \"deciles\" or a list");
      }
    }
    if (j.contains("tolerances")) {
      for (const auto& [key, value] : j.at("tolerances").items()) {
        if (!c.tolerances.contains(key)) throw ConfigError("unknown tolerance '" + key + "' for " + to_string(kind));
        if (!value.is_number()) throw ConfigError("tolerance '" + key + "' must be a number");
        c.tolerances[key] = value.get<double>();
      }
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> fallback = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j, fallback);
}

// ---------------------------------------------------------------------------
// Results

using Cell = std::variant<std::int64_t, double, std::string>;

/// Round-trip text for a double.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Short text for labels.
inline std::string format_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

struct Table {
  std::string file;  // e.g. "ks.csv"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::string csv() const {
    std::ostringstream out;
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ',';
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>)
                out << format_double(v);
              else
                out << v;
            },
            row[c]);
      }
      out << '\n';
    }
    return out.str();
  }

  double number(std::size_t row, std::size_t col) const {
    const Cell& c = rows.at(row).at(col);
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    throw InvalidInput("table cell is not numeric");
  }
};

struct CheckResult {
  std::string name;
  bool passed = false;
  bool informational = false;  // reported, never fails a run
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<Table> tables;
  std::vector<CheckResult> checks;
  nlohmann::json summary = nlohmann::json::object();
  std::uint64_t nongeneric = 0;
  double elapsed_seconds = 0.0;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || c.informational; });
  }

  const Table& table(const std::string& file) const {
    for (const auto& t : tables)
      if (t.file == file) return t;
    throw InvalidInput("no table " + file);
  }

  const CheckResult& check(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    throw InvalidInput("no check " + name);
  }

  nlohmann::json meta() const {
    nlohmann::json j;
    j["seed"] = config.seed.master_seed;
    j["config"] = config.to_json();
    j["version"] = kVersion;
    j["nongeneric_count"] = nongeneric;
    j["elapsed_seconds"] = elapsed_seconds;
    j["w1_grid"] = kW1GridSize;
    j["summary"] = summary;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
      j["checks"].push_back({{"name", c.name},
                             {"passed", c.passed},
                             {"informational", c.informational},
                             {"value", c.value},
                             {"threshold", c.threshold},
                             {"detail", c.detail}});
    j["passed"] = passed();
    return j;
  }
};

/// Directory name <experiment>_<UTC timestamp>_seed<seed>.
inline std::string run_directory_name(const ExperimentConfig& cfg, std::time_t when) {
  std::tm tm{};
  gmtime_r(&when, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
  return to_string(cfg.experiment) + "_" + stamp + "_seed" + std::to_string(cfg.seed.master_seed);
}

/// Writes every table plus meta.json into a fresh directory under `root` and
/// returns its path.
inline std::filesystem::path write_result(const ExperimentResult& result, const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  const std::string base = run_directory_name(result.config, std::time(nullptr));
  fs::create_directories(root);
  fs::path dir = root / base;
  for (int suffix = 2; fs::exists(dir); ++suffix) dir = root / (base + "_" + std::to_string(suffix));
  fs::create_directory(dir);
  for (const auto& t : result.tables) {
    std::ofstream out(dir / t.file, std::ios::binary);
    out << t.csv();
  }
  std::ofstream meta(dir / "meta.json", std::ios::binary);
  meta << result.meta().dump(2) << '\n';
  return dir;
}

// ---------------------------------------------------------------------------
// Shared machinery

namespace detail {

enum class Purpose : std::uint16_t {
  Mixture = 0x101,
  MeanVariance = 0x102,
  Wasserstein = 0x103,
  Ks = 0x104,
  VarianceScaling = 0x105,
  Theorem = 0x106,
  TheoremReference = 0x107,
  VerifyTrees = 0x108,
  VerifyDense = 0x109,
  VerifySigning = 0x10A,
  VerifyGrowth = 0x10B,
  VerifyHaar = 0x10C,
};

inline RngStream replicate_stream(const ExperimentConfig& cfg, Purpose p, Eigen::Index n, std::uint64_t index) {
  return derive_stream(cfg.seed, stream_key(static_cast<std::uint16_t>(p), static_cast<std::uint64_t>(n), index));
}

/// Nodal counts of one replicate at the requested indices.
struct ReplicateCounts {
  bool generic = false;
  std::vector<std::int64_t> phi;
};

/// R replicates of the configured law at size n; phi at every index in ks
/// (or all indices when ks is empty).
inline std::vector<ReplicateCounts> sample_counts(const ExperimentConfig& cfg, Purpose p, Eigen::Index n,
                                                  std::uint64_t replicates, const std::vector<Eigen::Index>& ks = {}) {
  return parallel_map(replicates, cfg.workers, [&](std::size_t r) {
    RngStream s = replicate_stream(cfg, p, n, r);
    const SymMatrix a = sample_oe(n, cfg.law, s).matrix;
    const Spectrum spec = symmetric_eigen(a);
    ReplicateCounts out;
    if (ks.empty()) {
      NodalVector nv = nodal_all(a, spec);
      out.generic = nv.generic;
      out.phi = std::move(nv.phi);
    } else {
      out.generic = true;
      for (Eigen::Index k : ks) {
        const NodalCount c = nodal_count(a, spec, k);
        out.generic = out.generic && c.generic;
        out.phi.push_back(c.count);
      }
    }
    return out;
  });
}

/// Per-index accumulators over the generic replicates, in replicate order.
inline std::vector<MomentAccumulator> accumulate(const std::vector<ReplicateCounts>& reps, std::size_t width,
                                                 std::uint64_t& nongeneric) {
  std::vector<MomentAccumulator> acc(width);
  for (const auto& r : reps) {
    if (!r.generic) {
      ++nongeneric;
      continue;
    }
    for (std::size_t i = 0; i < width; ++i) acc[i].add(static_cast<double>(r.phi[i]));
  }
  return acc;
}

inline CheckResult make_check(std::string name, bool passed, double value, double threshold, std::string detail = {}) {
  return {std::move(name), passed, false, value, threshold, std::move(detail)};
}

/// Median, lower and upper quartile.
inline nlohmann::json box_summary(const std::vector<double>& x) {
  return {{"median", median(x)}, {"q1", sample_quantile(x, 0.25)}, {"q3", sample_quantile(x, 0.75)},
          {"min", *std::min_element(x.begin(), x.end())}, {"max", *std::max_element(x.begin(), x.end())}};
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiments

/// One matrix from the configured law; histogram data for the normalized
/// eigenvalues and for phi_N, and the W1 distance between the two.
inline ExperimentResult run_mixture_demo(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  const Eigen::Index n = cfg.n();

  constexpr std::uint64_t kMaxAttempts = 100;
  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt == kMaxAttempts) throw DegenerateInput("mixture demo: no generic sample in 100 attempts");
    RngStream s = detail::replicate_stream(cfg, detail::Purpose::Mixture, n, attempt);
    OEMatrixSample sample = sample_oe(n, cfg.law, s);
    const Spectrum spec = symmetric_eigen(sample.matrix);
    const NodalVector nv = nodal_all(sample.matrix, spec);
    if (!nv.generic) {
      ++res.nongeneric;
      continue;
    }
    const Vector lambdas = sample.lambdas_used.size() == n ? sample.lambdas_used : spec.lambdas;
    const Vector z = normalize_spectrum(lambdas).values;

    Table t{"mixture.csv", {"n", "k", "lambda_normalized", "phiN"}, {}};
    for (Eigen::Index k = 1; k <= n; ++k)
      t.rows.push_back({static_cast<std::int64_t>(n), static_cast<std::int64_t>(k), z[k - 1],
                        nv.phi_norm[static_cast<std::size_t>(k - 1)]});
    res.tables.push_back(std::move(t));

    const double w1 = wasserstein1(emp(nv.phi_norm), emp(as_span(z)));
    res.summary["stream_attempt"] = attempt;
    res.summary["w1"] = w1;
    res.checks.push_back(detail::make_check("w1_phiN_vs_lambda", w1 <= cfg.tolerance("w1_max"), w1,
                                            cfg.tolerance("w1_max")));
    const int modes = count_modes(as_span(z));
    res.summary["lambda_modes"] = modes;
    const double expected = cfg.tolerance("expected_modes");
    if (expected > 0)
      res.checks.push_back(detail::make_check("lambda_modes", modes == static_cast<int>(expected), modes, expected));
    break;
  }
  res.elapsed_seconds = detail::seconds_since(start);
  return res;
}

/// Per-k mean and population variance of phi/C(n,2), and mean and standard
/// error of phi_N.
inline ExperimentResult run_mean_variance_sweep(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  Table t{"mean_variance.csv", {"n", "k", "replicates", "mean_phi_frac", "var_phi", "mean_phiN", "stderr_phiN"}, {}};

  bool means_ok = true, stds_ok = true, symmetry_ok = true;
  double worst_mean_dev = 0.0, worst_std = 0.0, worst_z = 0.0;
  std::uint64_t within = 0, pairs = 0;
  std::uint64_t total_reps = 0;
  const double lo = cfg.tolerance("mean_frac_low"), hi = cfg.tolerance("mean_frac_high");

  for (Eigen::Index n : cfg.n_grid) {
    const auto ks = cfg.k_subset.resolve(n);
    const auto reps = detail::sample_counts(cfg, detail::Purpose::MeanVariance, n, cfg.replicates);
    total_reps += reps.size();
    const auto acc = detail::accumulate(reps, static_cast<std::size_t>(n), res.nongeneric);
    const double pairs_n = detail::pairs_of(n);
    const double norm_coeff = std::pow(std::numbers::pi, 1.5) / std::numbers::sqrt2 * std::sqrt(static_cast<double>(n));
    for (Eigen::Index k : ks) {
      const auto& a = acc[static_cast<std::size_t>(k - 1)];
      const double mean_frac = a.mean() / pairs_n;
      const double var_frac = a.variance() / (pairs_n * pairs_n);
      const double mean_phin = normalize_count(a.mean(), n);
      const double se_phin = norm_coeff / pairs_n * a.standard_error();
      t.rows.push_back({static_cast<std::int64_t>(n), static_cast<std::int64_t>(k),
                        static_cast<std::int64_t>(a.count()), mean_frac, var_frac, mean_phin, se_phin});
      if (mean_frac < lo || mean_frac > hi) means_ok = false;
      worst_mean_dev = std::max(worst_mean_dev, std::abs(mean_frac - 0.5));
      worst_std = std::max(worst_std, std::sqrt(var_frac));
    }

    // phi(A,k) + phi(A,n+1-k) has mean C(n,2) when the law of A is symmetric
    // under A -> -A. Paired per replicate, so the correlation is accounted for.
    for (Eigen::Index k = 1; 2 * k <= n; ++k) {
      MomentAccumulator sum;
      for (const auto& r : reps)
        if (r.generic)
          sum.add(static_cast<double>(r.phi[static_cast<std::size_t>(k - 1)] + r.phi[static_cast<std::size_t>(n - k)]));
      if (sum.count() < 2) continue;
      const double dev = sum.mean() - pairs_n;
      const double se = sum.standard_error();
      const double z = se > 0.0 ? std::abs(dev) / se : (dev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
      ++pairs;
      if (z <= cfg.tolerance("antisymmetry_sigmas")) ++within;
      if (z > cfg.tolerance("antisymmetry_hard_sigmas")) symmetry_ok = false;
      worst_z = std::max(worst_z, z);
    }
  }
  stds_ok = worst_std < cfg.tolerance("std_frac_max");
  res.tables.push_back(std::move(t));

  res.checks.push_back(detail::make_check("mean_frac_in_range", means_ok, 0.5 + worst_mean_dev, hi,
                                          "largest |mean - 1/2| shown as 1/2 + deviation"));
  res.checks.push_back(detail::make_check("std_frac_below", stds_ok, worst_std, cfg.tolerance("std_frac_max")));
  const double share = pairs ? static_cast<double>(within) / static_cast<double>(pairs) : 1.0;
  res.checks.push_back(detail::make_check("antisymmetry", symmetry_ok && share >= cfg.tolerance("antisymmetry_share"),
                                          share, cfg.tolerance("antisymmetry_share"),
                                          "share of pairs within the sigma band; worst z " + format_double(worst_z)));
  const double frac = total_reps ? static_cast<double>(res.nongeneric) / static_cast<double>(total_reps) : 0.0;
  res.checks.push_back(detail::make_check("nongeneric_fraction", frac < cfg.tolerance("nongeneric_max_fraction"), frac,
                                          cfg.tolerance("nongeneric_max_fraction")));
  res.summary["worst_antisymmetry_z"] = worst_z;
  res.elapsed_seconds = detail::seconds_since(start);
  return res;
}

/// W1(emp(phi_N), semicircle) for S = replicates samples per n.
inline ExperimentResult run_wasserstein_sweep(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  Table t{"wasserstein.csv", {"n", "sample_id", "w1"}, {}};
  const ReferenceLaw semicircle = ReferenceLaw::semicircle();
  std::vector<double> medians;

  for (Eigen::Index n : cfg.n_grid) {
    struct Sample {
      bool generic = false;
      double w1 = 0.0;
    };
    const auto samples = parallel_map(cfg.replicates, cfg.workers, [&](std::size_t r) {
      RngStream s = detail::replicate_stream(cfg, detail::Purpose::Wasserstein, n, r);
      const SymMatrix a = sample_oe(n, cfg.law, s).matrix;
      const NodalVector nv = nodal_all(a);
      return Sample{nv.generic, nv.generic ? wasserstein1(emp(nv.phi_norm), semicircle) : 0.0};
    });
    std::vector<double> w;
    for (std::size_t r = 0; r < samples.size(); ++r) {
      if (!samples[r].generic) {
        ++res.nongeneric;
        continue;
      }
      w.push_back(samples[r].w1);
      t.rows.push_back({static_cast<std::int64_t>(n), static_cast<std::int64_t>(r), samples[r].w1});
    }
    if (w.empty()) throw DegenerateInput("wasserstein sweep: no generic sample at n = " + std::to_string(n));
    res.summary["per_n"][std::to_string(n)] = detail::box_summary(w);
    medians.push_back(median(w));
  }
  res.tables.push_back(std::move(t));

  bool decreasing = true;
  for (std::size_t i = 1; i < medians.size(); ++i) decreasing = decreasing && medians[i] < medians[i - 1];
  res.checks.push_back(detail::make_check("median_w1_decreasing", decreasing, medians.back(), medians.front()));
  res.checks.push_back(
      detail::make_check("median_w1_largest_n", medians.back() <= cfg.tolerance("w1_max"), medians.back(), cfg.tolerance("w1_max")));

  const Vector grid = semicircle_quantile_grid(512);
  const double self = wasserstein1(emp(as_span(grid)), semicircle);
  res.checks.push_back(detail::make_check("reference_self_test", self <= cfg.tolerance("self_test_max"), self,
                                          cfg.tolerance("self_test_max")));
  res.elapsed_seconds = detail::seconds_since(start);
  return res;
}

/// KS distance of the R-sample of phi(A,k) to the normal law with the same
/// mean and (population) standard deviation. A constant sample gets KS = 1.
inline ExperimentResult run_ks_sweep(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  Table t{"ks.csv", {"n", "k", "ks"}, {}};
  std::vector<double> medians;
  double worst = 0.0;

  for (Eigen::Index n : cfg.n_grid) {
    const auto ks = cfg.k_subset.resolve(n);
    const auto reps = detail::sample_counts(cfg, detail::Purpose::Ks, n, cfg.replicates, ks);
    std::vector<std::vector<double>> columns(ks.size());
    for (const auto& r : reps) {
      if (!r.generic) {
        ++res.nongeneric;
        continue;
      }
      for (std::size_t i = 0; i < ks.size(); ++i) columns[i].push_back(static_cast<double>(r.phi[i]));
    }
    if (columns.front().empty()) throw DegenerateInput("ks sweep: no generic sample at n = " + std::to_string(n));
    std::vector<double> values;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double sd = population_std(columns[i]);
      const double d = sd > 0.0 ? ks_distance(emp(columns[i]), ReferenceLaw::normal(average(columns[i]), sd)) : 1.0;
      values.push_back(d);
      worst = std::max(worst, d);
      t.rows.push_back({static_cast<std::int64_t>(n), static_cast<std::int64_t>(ks[i]), d});
    }
    res.summary["per_n"][std::to_string(n)] = detail::box_summary(values);
    medians.push_back(median(values));
  }
  res.tables.push_back(std::move(t));
  res.checks.push_back(detail::make_check("ks_all_below", worst <= cfg.tolerance("ks_max"), worst, cfg.tolerance("ks_max")));
  CheckResult trend = detail::make_check("median_ks_trend", medians.back() < medians.front(), medians.back(), medians.front(),
                                         "median KS at the largest n vs the smallest n");
  trend.informational = true;
  res.checks.push_back(trend);
  res.elapsed_seconds = detail::seconds_since(start);
  return res;
}

/// max_k Var[phi(A,k)] per n and its log-log fit against n.
inline ExperimentResult run_variance_scaling(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  if (cfg.n_grid.size() < 2) throw ConfigError("variance_scaling needs at least two grid points");
  ExperimentResult res;
  res.config = cfg;
  Table t{"varscale.csv", {"n", "max_k_var"}, {}};
  std::vector<double> xs, ys;
  bool bounded = true;
  double worst_ratio = 0.0;
  const double power = cfg.tolerance("bound_power");

  for (Eigen::Index n : cfg.n_grid) {
    const auto reps = detail::sample_counts(cfg, detail::Purpose::VarianceScaling, n, cfg.replicates);
    const auto acc = detail::accumulate(reps, static_cast<std::size_t>(n), res.nongeneric);
    double max_var = 0.0;
    Eigen::Index arg = 1;
    for (Eigen::Index k = 1; k <= n; ++k) {
      const double v = acc[static_cast<std::size_t>(k - 1)].variance();
      if (v > max_var) {
        max_var = v;
        arg = k;
      }
    }
    t.rows.push_back({static_cast<std::int64_t>(n), max_var});
    const double ratio = max_var / std::pow(static_cast<double>(n), power);
    bounded = bounded && ratio <= 1.0;
    worst_ratio = std::max(worst_ratio, ratio);
    xs.push_back(static_cast<double>(n));
    ys.push_back(max_var);
    res.summary["per_n"][std::to_string(n)] = {{"max_k_var", max_var}, {"argmax_k", arg}, {"ratio_to_bound", ratio}};
  }
  res.tables.push_back(std::move(t));
  const LineFit fit = loglog_fit(xs, ys);
  res.summary["slope"] = fit.slope;
  res.summary["intercept"] = fit.intercept;
  const double lo = cfg.tolerance("slope_low"), hi = cfg.tolerance("slope_high");
  res.checks.push_back(detail::make_check("loglog_slope", fit.slope >= lo && fit.slope <= hi, fit.slope, hi,
                                          "accepted range [" + format_double(lo) + ", " + format_double(hi) + "]"));
  res.checks.push_back(detail::make_check("variance_upper_bound", bounded, worst_ratio, 1.0,
                                          "largest max_k Var / n^" + format_double(power)));
  res.elapsed_seconds = detail::seconds_since(start);
  return res;
}

/// T_k = (pi^{3/2}/sqrt 2)(mean phi(A,k)/C(n,2) - 1/2) sqrt(n) against the
/// mean k-th normalized eigenvalue from independent eigenvalue-only draws.
inline ExperimentResult run_theorem_check(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  Table t{"theorem.csv", {"n", "k", "T_k", "ref_lambda_k", "gap"}, {}};
  double max_gap = 0.0;
  std::optional<double> middle_t, edge_t;
  bool middle_ok = true, edge_ok = true;
  const std::uint64_t ref_reps = cfg.reference_replicates ? cfg.reference_replicates : cfg.replicates;

  for (Eigen::Index n : cfg.n_grid) {
    const auto ks = cfg.k_subset.resolve(n);
    const auto reps = detail::sample_counts(cfg, detail::Purpose::Theorem, n, cfg.replicates, ks);
    const auto acc = detail::accumulate(reps, ks.size(), res.nongeneric);

    const auto ref = parallel_map(ref_reps, cfg.workers, [&](std::size_t r) {
      RngStream s = detail::replicate_stream(cfg, detail::Purpose::TheoremReference, n, r);
      const SymMatrix a = sample_oe(n, cfg.law, s).matrix;
      return normalize_spectrum(symmetric_eigenvalues(a)).values;
    });
    std::vector<MomentAccumulator> ref_acc(ks.size());
    for (const auto& z : ref)
      for (std::size_t i = 0; i < ks.size(); ++i) ref_acc[i].add(z[ks[i] - 1]);

    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double tk = normalize_count(acc[i].mean(), n);
      const double gap = std::abs(tk - ref_acc[i].mean());
      max_gap = std::max(max_gap, gap);
      t.rows.push_back({static_cast<std::int64_t>(n), static_cast<std::int64_t>(ks[i]), tk, ref_acc[i].mean(), gap});
      if (ks[i] == (n + 1) / 2) {
        middle_t = tk;
        middle_ok = middle_ok && std::abs(tk) <= cfg.tolerance("middle_max");
      }
      if (ks[i] == n) {
        edge_t = tk;
        edge_ok = edge_ok && tk >= cfg.tolerance("edge_low") && tk <= cfg.tolerance("edge_high");
      }
    }
  }
  res.tables.push_back(std::move(t));
  res.checks.push_back(detail::make_check("max_gap", max_gap <= cfg.tolerance("max_gap"), max_gap, cfg.tolerance("max_gap")));
  // The two shape checks assume the GOE law: symmetric spectrum, edge near 2.
  if (cfg.law.variant == EigenvalueLaw::Variant::GoeImplicit) {
    if (middle_t)
      res.checks.push_back(detail::make_check("middle_k_near_zero", middle_ok, *middle_t, cfg.tolerance("middle_max")));
    if (edge_t)
      res.checks.push_back(detail::make_check("edge_k_range", edge_ok, *edge_t, cfg.tolerance("edge_high"),
                                              "accepted range [" + format_double(cfg.tolerance("edge_low")) + ", " +
                                                  format_double(cfg.tolerance("edge_high")) + "]"));
  }
  res.elapsed_seconds = detail::seconds_since(start);
  return res;
}

// ---------------------------------------------------------------------------
// Verification suite

/// Hooks for the verification suite; the identity can be swapped out to
/// confirm that the suite notices.
struct VerifyOptions {
  std::function<double(double)> sheppard = [](double rho) { return nodalcount::sheppard(rho); };
};

inline ExperimentResult run_verify_suite(const ExperimentConfig& cfg, const VerifyOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult res;
  res.config = cfg;
  const double sigmas = cfg.tolerance("sigmas");
  auto samples = [&](std::uint64_t fallback) { return cfg.mc_samples ? cfg.mc_samples : fallback; };
  std::uint32_t salt = 0;
  auto mc = [&] { return McRun{cfg.seed, ++salt, cfg.workers}; };
  auto add = [&](CheckResult c) { res.checks.push_back(std::move(c)); };

  // Sign correlation of correlated Gaussians.
  for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    const MCEstimate e = mc_sign_correlation(rho, samples(1'000'000), mc());
    const double expected = opts.sheppard(rho);
    const double dev = std::abs(e.mean - expected);
    add(detail::make_check("sign_correlation[rho=" + format_label(rho) + "]", dev <= sigmas * e.std_error, dev,
                           sigmas * e.std_error));
  }

  // Edge-sign mean against the closed form.
  {
    const Eigen::Index n = 1024;
    const Vector lambdas = normalize_spectrum(semicircle_quantile_grid(n)).values;
    const double nd = static_cast<double>(n);
    for (Eigen::Index k : {Eigen::Index{1}, n / 2, n}) {
      const MCEstimate e = mc_edge_mean(lambdas, k, samples(100'000), mc());
      const double expected = kEdgeMeanCoefficient * lambdas[k - 1] / std::sqrt(nd);
      const double dev = std::abs(e.mean - expected);
      const double band = sigmas * e.std_error + 10.0 * std::pow(nd, -1.5) * std::pow(std::log(nd), 2);
      add(detail::make_check("edge_mean[n=1024,k=" + std::to_string(k) + "]", dev <= band, dev, band));
    }
  }

  // Edge covariances at n = 256, extreme k.
  {
    const Eigen::Index n = 256;
    const Vector lambdas = normalize_spectrum(semicircle_quantile_grid(n)).values;
    const CovEstimate adj = mc_adjacent_cov(lambdas, n, samples(100'000), mc());
    add(detail::make_check("adjacent_cov[n=256]", std::abs(adj.cov) <= cfg.tolerance("adjacent_cov_max"),
                           std::abs(adj.cov), cfg.tolerance("adjacent_cov_max")));
    const CovEstimate dis = mc_nonadjacent_cov(lambdas, n, samples(100'000), mc());
    const double band = sigmas * dis.std_error + cfg.tolerance("nonadjacent_cov_slack");
    add(detail::make_check("nonadjacent_cov[n=256]", std::abs(dis.cov) <= band, std::abs(dis.cov), band));
    const CovEstimate ind = mc_nonadjacent_cov(lambdas, n, samples(100'000), mc(), true);
    add(detail::make_check("independent_pairs_cov[n=256]", std::abs(ind.cov) <= sigmas * ind.std_error,
                           std::abs(ind.cov), sigmas * ind.std_error));
  }

  // Quadratic-form concentration, including a vector that must be caught.
  for (Eigen::Index n : {Eigen::Index{16}, Eigen::Index{4096}}) {
    const Vector lambdas = normalize_spectrum(semicircle_quantile_grid(n)).values;
    const ConcentrationReport r = quadform_concentration_check(lambdas, 100, mc());
    add(detail::make_check("concentration[n=" + std::to_string(n) + "]", r.passed, r.worst, r.band));
  }
  {
    const Eigen::Index n = 4096;
    const Vector lambdas = normalize_spectrum(semicircle_quantile_grid(n)).values;
    const ConcentrationReport r = quadform_concentration_check(
        lambdas, 1, [](Eigen::Index m) { return Vector::Constant(m, 4.0); });
    add(detail::make_check("concentration_detects_constant[n=4096]", !r.passed, r.worst, r.band));
  }

  // Haar pair orthonormality.
  {
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 100; ++t) {
      RngStream s = detail::replicate_stream(cfg, detail::Purpose::VerifyHaar, 64, t);
      const Vector g = sample_gaussian_vector(64, s);
      const Vector gh = sample_gaussian_vector(64, s);
      const auto [u, uh] = haar_pair_from_gaussians(g, gh);
      worst = std::max({worst, std::abs(u.dot(uh)), std::abs(u.norm() - 1.0), std::abs(uh.norm() - 1.0)});
    }
    add(detail::make_check("haar_pair_orthonormal", worst <= 1e-12, worst, 1e-12));
  }

  // Spectral growth of a normalized GOE spectrum.
  {
    RngStream s = detail::replicate_stream(cfg, detail::Purpose::VerifyGrowth, 256, 0);
    const Vector z = normalize_spectrum(symmetric_eigenvalues(sample_goe(256, s))).values;
    const double bound = 3.0 * std::log(256.0);
    add(detail::make_check("spectral_growth[n=256]", check_spectral_growth(z, 3.0, 1.0), z.cwiseAbs().maxCoeff(), bound));
  }

  // Trees: the surplus vanishes identically.
  {
    std::uint64_t generic = 0, bad = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
      RngStream s = detail::replicate_stream(cfg, detail::Purpose::VerifyTrees, 0, t);
      const auto n = static_cast<Eigen::Index>(2 + uniform_index(15, s));
      const NodalVector nv = nodal_all(random_weighted_tree(n, s));
      if (!nv.generic) {
        ++res.nongeneric;
        continue;
      }
      ++generic;
      if (std::any_of(nv.sigma.begin(), nv.sigma.end(), [](std::int64_t x) { return x != 0; })) ++bad;
    }
    add(detail::make_check("trees_zero_surplus", bad == 0 && generic > 0, static_cast<double>(bad), 0.0,
                           std::to_string(generic) + " generic trees"));
  }

  // Dense signed matrices: surplus sandwich and average bounds.
  {
    std::uint64_t generic = 0, bad = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
      RngStream s = detail::replicate_stream(cfg, detail::Purpose::VerifyDense, 0, t);
      const auto n = static_cast<Eigen::Index>(4 + uniform_index(7, s));
      const NodalVector nv = nodal_all(random_signing(sample_goe(n, s), s));
      const CheckOutcome sandwich = surplus_sandwich_check(nv);
      const CheckOutcome average = surplus_average_bounds_check(nv);
      if (sandwich == CheckOutcome::Inconclusive || average == CheckOutcome::Inconclusive) {
        ++res.nongeneric;
        continue;
      }
      ++generic;
      if (sandwich == CheckOutcome::Fail || average == CheckOutcome::Fail) ++bad;
    }
    add(detail::make_check("surplus_bounds_dense", bad == 0 && generic > 0, static_cast<double>(bad), 0.0,
                           std::to_string(generic) + " generic matrices"));
  }

  // Direct variance of phi against the three-term decomposition.
  {
    const Eigen::Index n = cfg.n();
    const Vector lambdas = normalize_spectrum(semicircle_quantile_grid(n)).values;
    const VarianceDecompositionReport r =
        variance_decomposition_check(lambdas, n, cfg.replicates, samples(1'000'000), mc());
    res.nongeneric += r.nongeneric;
    const double band = cfg.tolerance("decomposition_sigmas") * r.combined_stderr();
    add(detail::make_check("variance_decomposition[n=" + std::to_string(n) + "]", r.gap() <= band, r.gap(), band,
                           "direct " + format_double(r.direct_var) + ", decomposed " + format_double(r.decomposed_var)));
  }

  // Random signing keeps the semicircle.
  {
    const Eigen::Index n = 1024;
    const auto w = parallel_map(5, cfg.workers, [&](std::size_t r) {
      RngStream s = detail::replicate_stream(cfg, detail::Purpose::VerifySigning, n, r);
      const SymMatrix a = random_signing(sample_goe(n, s), s);
      return wasserstein1(emp(as_span(symmetric_eigenvalues(a))), ReferenceLaw::semicircle());
    });
    const double worst = *std::max_element(w.begin(), w.end());
    add(detail::make_check("signing_semicircle[n=1024]", worst <= cfg.tolerance("signing_w1_max"), worst,
                           cfg.tolerance("signing_w1_max")));
  }

  Table t{"verify.csv", {"check", "passed", "value", "threshold"}, {}};
  for (const auto& c : res.checks)
    t.rows.push_back({c.name, static_cast<std::int64_t>(c.passed), c.value, c.threshold});
  res.tables.push_back(std::move(t));
  res.elapsed_seconds = detail::seconds_since(start);
  return res;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::MixtureDemo: return run_mixture_demo(cfg);
    case ExperimentKind::MeanVarianceSweep: return run_mean_variance_sweep(cfg);
    case ExperimentKind::WassersteinSweep: return run_wasserstein_sweep(cfg);
    case ExperimentKind::KsSweep: return run_ks_sweep(cfg);
    case ExperimentKind::VarianceScaling: return run_variance_scaling(cfg);
    case ExperimentKind::TheoremCheck: return run_theorem_check(cfg);
    case ExperimentKind::VerifySuite: return run_verify_suite(cfg);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace nodalcount
