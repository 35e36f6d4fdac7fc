#include <gtest/gtest.h>

#include <cmath>

#include "mrpath/io.h"
#include "support.h"

namespace mrpath {
namespace {

TEST(InstanceJson, RoundTripPreservesDigest) {
  for (Scenario s : {Scenario::kA, Scenario::kB}) {
    const Instance inst = generate_instance(s, 9, 3, 77);
    const std::string text = instance_to_json(inst);
    const Instance back = instance_from_json(text);
    EXPECT_EQ(back.digest(), inst.digest());
    EXPECT_EQ(back.collisions, inst.collisions);
    EXPECT_EQ(instance_to_json(back), text);
  }
}

TEST(InstanceJson, RandomizedWindowsSurvive) {
  InstanceOptions opt;
  opt.sampling.window_mode = WindowMode::kRandomized;
  const Instance inst = generate_instance(Scenario::kB, 6, 2, 5, opt);
  const Instance back = instance_from_json(instance_to_json(inst));
  for (int i = 1; i <= 6; ++i) {
    EXPECT_EQ(back.nodes.visit(i).window.earliest, inst.nodes.visit(i).window.earliest);
    EXPECT_EQ(back.nodes.visit(i).window.latest, inst.nodes.visit(i).window.latest);
  }
}

TEST(InstanceJson, MalformedDocumentsAreRejected) {
  const std::string good = instance_to_json(generate_instance(Scenario::kA, 3, 1, 1));
  EXPECT_THROW(instance_from_json("{"), FormatError);
  EXPECT_THROW(instance_from_json("[]"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"schema_version": 1, "kind": "solution"})"), FormatError);

  auto mutate = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    const auto pos = s.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    s.replace(pos, from.size(), to);
    return s;
  };
  EXPECT_THROW(instance_from_json(mutate("\"schema_version\": 1", "\"schema_version\": 9")),
               FormatError);
  EXPECT_THROW(instance_from_json(mutate("\"robots\": 1", "\"robots\": 0")), FormatError);
  EXPECT_THROW(instance_from_json(mutate("\"velocity\": 5", "\"velocity\": -5")), FormatError);
  EXPECT_THROW(instance_from_json(mutate("\"robots\"", "\"robot_count\"")), FormatError);
}

TEST(SolutionJson, RoundTripKeepsRoutesTimesAndStatus) {
  const Instance inst = generate_instance(Scenario::kA, 7, 2, 9);
  const Solution sol = solve(build_mp_ca(inst));
  const Solution back = solution_from_json(solution_to_json(sol));
  EXPECT_EQ(back.status, sol.status);
  EXPECT_EQ(back.variant, sol.variant);
  EXPECT_EQ(back.routes, sol.routes);
  EXPECT_EQ(back.objective, sol.objective);
  for (int i = 1; i <= 7; ++i) EXPECT_EQ(back.arrival_times[i], sol.arrival_times[i]);
  EXPECT_TRUE(validate(back, inst, Variant::kCollisionAware).ok());
}

TEST(SolutionJson, InfeasibleHasNullObjective) {
  Solution sol;
  sol.variant = Variant::kCollisionAware;
  sol.status = SolveStatus::kInfeasible;
  sol.hint = "no route set";
  const std::string text = solution_to_json(sol);
  EXPECT_NE(text.find("\"objective\": null"), std::string::npos);
  const Solution back = solution_from_json(text);
  EXPECT_EQ(back.status, SolveStatus::kInfeasible);
  EXPECT_TRUE(std::isinf(back.objective));
  EXPECT_EQ(back.hint, "no route set");
}

TEST(ConfigText, TomlAndJsonAgree) {
  const std::string toml = R"(# experiment
scenarios = "A"
node_counts = [12, 14]
runs = 5
seed = 9

[radio]
tx_power_dbm = 23
fading = nakagami

[instance]
window_mode = randomized
window_width = 30

[limits]
time_limit_s = 10
)";
  const ExperimentConfig a = experiment_config_from_text(toml);
  EXPECT_EQ(a.scenarios, std::vector<Scenario>{Scenario::kA});
  EXPECT_EQ(a.node_counts, (std::vector<int>{12, 14}));
  EXPECT_EQ(a.runs, 5);
  EXPECT_EQ(a.base_seed, 9u);
  EXPECT_NEAR(a.radio.tx_power_w, dbm_to_watts(23.0), 1e-15);
  EXPECT_EQ(a.radio.fading, FadingMode::kNakagami);
  EXPECT_EQ(a.instance.sampling.window_mode, WindowMode::kRandomized);
  EXPECT_EQ(a.instance.sampling.window_width, 30.0);
  EXPECT_EQ(a.limits.time_limit_s, 10.0);

  const ExperimentConfig b = experiment_config_from_text(experiment_config_to_json(a));
  EXPECT_EQ(experiment_config_to_json(b), experiment_config_to_json(a));
}

TEST(ConfigText, DefaultsWhenEmpty) {
  const ExperimentConfig c = experiment_config_from_text("{}");
  const ExperimentConfig d;
  EXPECT_EQ(c.node_counts, d.node_counts);
  EXPECT_EQ(c.runs, d.runs);
  EXPECT_EQ(c.base_seed, d.base_seed);
  EXPECT_EQ(experiment_config_from_text("").runs, d.runs);
}

TEST(ConfigText, ErrorsAreReported) {
  EXPECT_THROW(experiment_config_from_text("runs 5"), FormatError);
  EXPECT_THROW(experiment_config_from_text("[radio\nx = 1"), FormatError);
  EXPECT_THROW(experiment_config_from_text("bogus = 1"), FormatError);
  EXPECT_THROW(experiment_config_from_text("runs = 0"), FormatError);
  EXPECT_THROW(experiment_config_from_text("seed = 1\nbase_seed = 2"), FormatError);
  EXPECT_THROW(radio_params_from_text("tx_power_w = 0.1\ntx_power_dbm = 20"), FormatError);
  EXPECT_THROW(radio_params_from_text("fading = rayleigh"), FormatError);
  EXPECT_THROW(radio_params_from_text("gain = 3"), FormatError);
}

TEST(RadioText, CarrierRecomputesReferenceLoss) {
  const RadioParams r = radio_params_from_text("carrier_hz = 60e9\nnoise_psd_dbm_per_hz = -170");
  EXPECT_NEAR(r.kappa_los, reference_path_loss(60e9), 1e-20);
  EXPECT_NEAR(r.kappa_nlos, reference_path_loss(60e9), 1e-20);
  EXPECT_NEAR(watts_to_dbm(r.noise_power_w()), -90.0, 1e-9);
  const RadioParams back = radio_params_from_text(radio_params_to_json(r));
  EXPECT_EQ(radio_params_to_json(back), radio_params_to_json(r));
}

TEST(ResultsJson, ManifestReproducesTheConfig) {
  ExperimentConfig cfg;
  cfg.node_counts = {5};
  cfg.runs = 2;
  cfg.threads = 1;
  cfg.base_seed = 3;
  const ExperimentResults res = run_monte_carlo(cfg);
  const std::string manifest = manifest_to_json(res);
  EXPECT_NE(manifest.find("\"kind\": \"manifest\""), std::string::npos);
  const ExperimentConfig again = experiment_config_from_text(manifest);
  EXPECT_EQ(experiment_config_to_json(again), experiment_config_to_json(cfg));
  EXPECT_EQ(runs_csv(run_monte_carlo(again)), runs_csv(res));
  EXPECT_NE(results_to_json(res).find("\"runs\""), std::string::npos);
}

TEST(Files, ReadWriteRoundTripAndMissingFile) {
  const auto path = std::filesystem::temp_directory_path() / "mrpath_io_test.txt";
  write_text_file(path, "abc\n");
  EXPECT_EQ(read_text_file(path), "abc\n");
  std::filesystem::remove(path);
  EXPECT_THROW(read_text_file(path), std::runtime_error);
}

}  // namespace
}  // namespace mrpath
