#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nodalcount/experiments.hpp"

using namespace nodalcount;
using nlohmann::json;

namespace {

ExperimentConfig small(ExperimentKind kind) {
  ExperimentConfig c = default_config(kind);
  c.workers = 1;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, ParsesFullDocument) {
  const json j = json::parse(R"({
    "experiment": "theorem_check", "n": 64, "replicates": 30,
    "law": {"variant": "goe"}, "k_subset": [1, 32, 64], "seed": 9,
    "tolerances": {"max_gap": 0.5}
  })");
  const ExperimentConfig c = config_from_json(j);
  EXPECT_EQ(c.experiment, ExperimentKind::TheoremCheck);
  EXPECT_EQ(c.n_grid, (std::vector<Eigen::Index>{64}));
  EXPECT_EQ(c.replicates, 30u);
  EXPECT_EQ(c.seed.master_seed, 9u);
  EXPECT_EQ(c.tolerance("max_gap"), 0.5);
  EXPECT_EQ(c.tolerance("middle_max"), 0.1);
  EXPECT_EQ(c.k_subset.resolve(64), (std::vector<Eigen::Index>{1, 32, 64}));
  // The echo reads back to the same configuration.
  const ExperimentConfig again = config_from_json(c.to_json());
  EXPECT_EQ(again.to_json(), c.to_json());
}

TEST(Config, MixtureLaw) {
  const json j = json::parse(R"({
    "experiment": "mixture_demo", "n": 50,
    "law": {"variant": "iid_mixture", "normalize": true,
            "components": [{"weight": 0.5, "mean": -2, "std": 1}, {"weight": 0.5, "mean": 2, "std": 1}]}
  })");
  const ExperimentConfig c = config_from_json(j);
  EXPECT_EQ(c.law.variant, EigenvalueLaw::Variant::IidMixture);
  EXPECT_EQ(c.law.components.size(), 2u);
  EXPECT_TRUE(c.law.normalize);
}

TEST(Config, Rejections) {
  auto bad = [](const char* text) { EXPECT_THROW(config_from_json(json::parse(text)), ConfigError) << text; };
  bad(R"({"experiment": "mean_variance_sweep", "n": 1})");
  bad(R"({"experiment": "mean_variance_sweep", "n": 10, "replicates": 0})");
  bad(R"({"experiment": "ks_sweep", "n_grid": [16], "replicates": 1})");
  bad(R"({"experiment": "ks_sweep", "n_grid": [32, 16], "replicates": 100})");
  bad(R"({"experiment": "ks_sweep", "n_grid": [], "replicates": 100})");
  bad(R"({"experiment": "wasserstein_sweep", "n": 10, "n_grid": [10, 20]})");
  bad(R"({"experiment": "nope", "n": 10})");
  bad(R"({"n": 10})");
  bad(R"({"experiment": "mean_variance_sweep", "n": 10, "colour": "red"})");
  bad(R"({"experiment": "mean_variance_sweep", "n": 10, "tolerances": {"unknown": 1}})");
  bad(R"({"experiment": "mean_variance_sweep", "n": 10, "law": {"variant": "iid_mixture", "components": [{"weight": 0.4, "mean": 0, "std": 1}]}})");
  bad(R"({"experiment": "mean_variance_sweep", "n": 3, "law": {"variant": "explicit", "values": [1, 2]}})");
  bad(R"({"experiment": "mean_variance_sweep", "n": 10, "k_subset": [0, 3]})");
  bad(R"({"experiment": "mean_variance_sweep", "n": 10, "k_subset": "some"})");
  bad(R"({"experiment": "mean_variance_sweep", "n": "ten"})");
  bad(R"({"experiment": "mean_variance_sweep", "n": 10, "replicates": -3})");
  bad(R"([1, 2])");
  EXPECT_THROW(config_from_json(json::parse(R"({"experiment": "ks_sweep"})"), ExperimentKind::MixtureDemo), ConfigError);
  EXPECT_NO_THROW(config_from_json(json::parse(R"({"n": 10})"), ExperimentKind::MeanVarianceSweep));
}

TEST(Config, LoadFromFile) {
  const auto dir = std::filesystem::temp_directory_path() / "nodalcount_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "good.json") << R"({"experiment": "ks_sweep", "n_grid": [8, 12], "replicates": 60})";
    std::ofstream(dir / "broken.json") << "{ not json";
  }
  EXPECT_EQ(load_config(dir / "good.json").n_grid, (std::vector<Eigen::Index>{8, 12}));
  EXPECT_THROW(load_config(dir / "broken.json"), ConfigError);
  EXPECT_THROW(load_config(dir / "missing.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(KSubset, Deciles) {
  KSubset d{KSubset::Mode::Deciles, {}};
  EXPECT_EQ(d.resolve(256), (std::vector<Eigen::Index>{1, 26, 52, 77, 103, 128, 154, 180, 205, 231, 256}));
  EXPECT_EQ(d.resolve(5), (std::vector<Eigen::Index>{1, 2, 3, 4, 5}));
  EXPECT_EQ(KSubset{}.resolve(3), (std::vector<Eigen::Index>{1, 2, 3}));
}

TEST(Table, CsvFormatting) {
  Table t{"x.csv", {"a", "b", "c"}, {{std::int64_t{3}, 0.1, std::string("ok")}}};
  EXPECT_EQ(t.csv(), "a,b,c\n3,0.10000000000000001,ok\n");
  EXPECT_EQ(t.number(0, 0), 3.0);
  EXPECT_THROW(t.number(0, 2), InvalidInput);
}

TEST(MeanVariance, SmallRunAndSchema) {
  ExperimentConfig c = small(ExperimentKind::MeanVarianceSweep);
  c.n_grid = {16};
  c.replicates = 400;
  const ExperimentResult r = run_mean_variance_sweep(c);
  const Table& t = r.table("mean_variance.csv");
  EXPECT_EQ(t.csv().substr(0, t.csv().find('\n')), "n,k,replicates,mean_phi_frac,var_phi,mean_phiN,stderr_phiN");
  EXPECT_EQ(t.rows.size(), 16u);
  EXPECT_EQ(r.nongeneric, 0u);
  EXPECT_TRUE(r.check("antisymmetry").passed);
  // k = 1 sits below one half, k = n above.
  EXPECT_LT(t.number(0, 3), 0.5);
  EXPECT_GT(t.number(15, 3), 0.5);
}

TEST(Reproducibility, WorkerCountIndependent) {
  ExperimentConfig c = small(ExperimentKind::MeanVarianceSweep);
  c.n_grid = {12};
  c.replicates = 200;
  const std::string one = run_mean_variance_sweep(c).table("mean_variance.csv").csv();
  EXPECT_EQ(run_mean_variance_sweep(c).table("mean_variance.csv").csv(), one);
  c.workers = 4;
  EXPECT_EQ(run_mean_variance_sweep(c).table("mean_variance.csv").csv(), one);
  c.seed.master_seed += 1;
  EXPECT_NE(run_mean_variance_sweep(c).table("mean_variance.csv").csv(), one);
}

TEST(Wasserstein, SmallSweep) {
  ExperimentConfig c = small(ExperimentKind::WassersteinSweep);
  c.n_grid = {16, 64};
  c.replicates = 5;
  c.tolerances["w1_max"] = 1.0;
  const ExperimentResult r = run_wasserstein_sweep(c);
  EXPECT_EQ(r.table("wasserstein.csv").rows.size(), 10u);
  EXPECT_TRUE(r.check("reference_self_test").passed);
  EXPECT_TRUE(r.check("median_w1_decreasing").passed);
  EXPECT_TRUE(r.summary["per_n"].contains("64"));
}

TEST(Ks, SmallSweep) {
  ExperimentConfig c = small(ExperimentKind::KsSweep);
  c.n_grid = {8, 16};
  c.replicates = 100;
  const ExperimentResult r = run_ks_sweep(c);
  const Table& t = r.table("ks.csv");
  EXPECT_EQ(t.columns, (std::vector<std::string>{"n", "k", "ks"}));
  EXPECT_EQ(t.rows.size(), 24u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_GE(t.number(i, 2), 0.0);
    EXPECT_LE(t.number(i, 2), 1.0);
  }
  EXPECT_TRUE(r.check("median_ks_trend").informational);
}

TEST(VarianceScaling, SmallGrid) {
  ExperimentConfig c = small(ExperimentKind::VarianceScaling);
  c.n_grid = {8, 16, 32};
  c.replicates = 300;
  c.tolerances["slope_low"] = 1.0;
  c.tolerances["slope_high"] = 3.0;
  const ExperimentResult r = run_variance_scaling(c);
  EXPECT_EQ(r.table("varscale.csv").rows.size(), 3u);
  EXPECT_TRUE(r.check("variance_upper_bound").passed);
  EXPECT_TRUE(r.check("loglog_slope").passed);
  c.n_grid = {8};
  EXPECT_THROW(run_variance_scaling(c), ConfigError);
}

TEST(Theorem, SmallCheck) {
  ExperimentConfig c = small(ExperimentKind::TheoremCheck);
  c.n_grid = {32};
  c.replicates = 300;
  c.tolerances["max_gap"] = 0.5;
  c.tolerances["middle_max"] = 0.3;
  const ExperimentResult r = run_theorem_check(c);
  const Table& t = r.table("theorem.csv");
  EXPECT_EQ(t.columns, (std::vector<std::string>{"n", "k", "T_k", "ref_lambda_k", "gap"}));
  EXPECT_EQ(t.rows.size(), 11u);
  EXPECT_TRUE(r.check("max_gap").passed) << r.check("max_gap").value;
  for (std::size_t i = 0; i < t.rows.size(); ++i) EXPECT_NEAR(t.number(i, 4), std::abs(t.number(i, 2) - t.number(i, 3)), 1e-15);
}

TEST(MixtureDemo, ExplicitSemicircleLaw) {
  ExperimentConfig c = small(ExperimentKind::MixtureDemo);
  c.n_grid = {300};
  const Vector q = semicircle_quantile_grid(300);
  c.law = EigenvalueLaw::explicit_values(std::vector<double>(q.begin(), q.end()), true);
  c.tolerances["expected_modes"] = 0.0;
  const ExperimentResult r = run_mixture_demo(c);
  EXPECT_EQ(r.table("mixture.csv").rows.size(), 300u);
  EXPECT_TRUE(r.check("w1_phiN_vs_lambda").passed) << r.check("w1_phiN_vs_lambda").value;
  EXPECT_THROW(r.check("lambda_modes"), InvalidInput);
}

TEST(Results, WrittenDirectory) {
  ExperimentConfig c = small(ExperimentKind::KsSweep);
  c.n_grid = {6};
  c.replicates = 60;
  const ExperimentResult r = run_ks_sweep(c);
  const auto root = std::filesystem::temp_directory_path() / "nodalcount_results_test";
  std::filesystem::remove_all(root);
  const auto dir = write_result(r, root);
  const auto dir2 = write_result(r, root);
  EXPECT_NE(dir, dir2);
  EXPECT_EQ(dir.filename().string().rfind("ks_sweep_", 0), 0u);
  EXPECT_NE(dir.filename().string().find("_seed" + std::to_string(c.seed.master_seed)), std::string::npos);
  EXPECT_EQ(slurp(dir / "ks.csv"), r.table("ks.csv").csv());
  const json meta = json::parse(slurp(dir / "meta.json"));
  for (const char* key : {"seed", "config", "version", "nongeneric_count", "elapsed_seconds", "w1_grid"})
    EXPECT_TRUE(meta.contains(key)) << key;
  EXPECT_EQ(meta["w1_grid"], kW1GridSize);
  EXPECT_EQ(config_from_json(meta["config"]).to_json(), c.to_json());
  std::filesystem::remove_all(root);
}

TEST(VerifySuite, PassesAndCatchesBrokenIdentity) {
  ExperimentConfig c = small(ExperimentKind::VerifySuite);
  c.mc_samples = 40'000;
  c.replicates = 3000;
  const ExperimentResult good = run_verify_suite(c);
  for (const auto& chk : good.checks) EXPECT_TRUE(chk.passed) << chk.name << " " << chk.value << " " << chk.threshold;
  EXPECT_TRUE(good.passed());

  VerifyOptions broken;
  broken.sheppard = [](double rho) { return rho; };
  const ExperimentResult bad = run_verify_suite(c, broken);
  EXPECT_FALSE(bad.passed());
  for (const auto& chk : bad.checks) {
    // Only the sign-correlation checks with rho != 0 depend on the identity.
    const bool expect_fail = chk.name.rfind("sign_correlation", 0) == 0 && chk.name != "sign_correlation[rho=0]";
    EXPECT_EQ(chk.passed, !expect_fail) << chk.name;
  }
}
