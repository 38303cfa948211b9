#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "osa/experiment.hpp"
#include "osa/optimizer.hpp"
#include "test_support.hpp"

using namespace osa;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.model = osa_test::reference_homogeneous_model();
  c.policy = "alg2";
  c.k = 1;
  c.slots = 2000;
  c.runs = 6;
  c.master_seed = 31;
  c.label = "small";
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& name) {
  const std::string dir =
      (std::filesystem::temp_directory_path() / ("osa_test_" + name)).string();
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out);
  out << text;
}

// Minimal CSV reader for the round-trip property.
std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.size() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("default checkpoint grid is geometric plus decades") {
  const auto cps = default_checkpoints(100);
  CHECK(cps == std::vector<std::int64_t>{2, 4, 8, 10, 16, 32, 64, 100});
  const auto big = default_checkpoints(100000);
  CHECK(big.front() == 2);
  CHECK(big.back() == 100000);
  CHECK(std::is_sorted(big.begin(), big.end()));
}

TEST_CASE("config file parsing, overrides, and validation errors") {
  const std::string dir = temp_dir("cfg");
  const std::string path = dir + "/exp.cfg";
  write_file(path,
             "# comment\n"
             "theta = 0.9, 0.8, 0.657, 0.564\n"
             "p_d = 0.8\n"
             "p_f = 0.3\n"
             "policy = alg3\n"
             "m = 2\n"
             "k = 1\n"
             "slots = 5000\n"
             "runs = 3\n"
             "master_seed = 7\n"
             "label = parsed\n");
  ExperimentConfig c = load_config_file(path);
  CHECK(c.model.n() == 4);
  CHECK(c.model.p_d == std::vector<double>(4, 0.8));
  CHECK(c.policy == "alg3");
  CHECK(c.sensing_case == SensingCase::kPartial);
  CHECK(c.m == 2);
  CHECK(c.slots == 5000);
  apply_override(c, "k", "2");
  apply_override(c, "seed", "99");
  CHECK(c.k == 2);
  CHECK(c.master_seed == 99);
  CHECK_NOTHROW(validate_config(c));
  CHECK_FALSE(c.checkpoints.empty());

  CHECK_THROWS_AS(apply_override(c, "bogus_key", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "theta", "0.5"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "slots", "abc"), ConfigError);

  write_file(dir + "/bad.cfg", "theta = 0.5\np_d = 0.8\n");
  CHECK_THROWS_AS(load_config_file(dir + "/bad.cfg"), ConfigError);
  write_file(dir + "/dup.cfg", "theta = 0.5\ntheta = 0.6\np_d=.8\np_f=.3\n");
  CHECK_THROWS_AS(load_config_file(dir + "/dup.cfg"), ConfigError);
  CHECK_THROWS_AS(load_config_file(dir + "/missing.cfg"), ConfigError);
}

TEST_CASE("validation rejects inconsistent setups") {
  ExperimentConfig c = small_config();

  SUBCASE("k out of range") {
    c.k = 9;
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }
  SUBCASE("partial policy needs k <= m <= N") {
    c.policy = "alg3";
    c.sensing_case = SensingCase::kPartial;
    c.m = 0;
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }
  SUBCASE("alg3 needs homogeneous sensing") {
    c.policy = "alg3";
    c.sensing_case = SensingCase::kPartial;
    c.m = 4;
    c.model = osa_test::reference_heterogeneous_model();
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }
  SUBCASE("alg3 needs room for the init sweep") {
    c.policy = "alg3";
    c.sensing_case = SensingCase::kPartial;
    c.m = 4;
    c.slots = 2;
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }
  SUBCASE("case/policy mismatch") {
    c.policy = "alg2";
    c.sensing_case = SensingCase::kPartial;
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }
  SUBCASE("bad checkpoints") {
    c.checkpoints = {10, 10};
    CHECK_THROWS_AS(validate_config(c), ConfigError);
    c.checkpoints = {10, 1000000};
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }
  SUBCASE("bad policy name") {
    c.policy = "alg9";
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }
}

TEST_CASE("emit_csv formats exactly") {
  const std::string dir = temp_dir("csv");
  AggregateTrace empty;
  emit_csv(empty, dir + "/empty.csv");
  CHECK(slurp(dir + "/empty.csv") ==
        "slot,mean_regret,stderr_regret,mean_regret_over_log,runs\n");

  AggregateTrace one;
  one.slots = {2};
  one.mean_regret = {0.0};
  one.stderr_regret = {0.0};
  one.mean_regret_over_log = {0.0};
  one.runs = 100;
  emit_csv(one, dir + "/one.csv");
  CHECK(slurp(dir + "/one.csv") ==
        "slot,mean_regret,stderr_regret,mean_regret_over_log,runs\n"
        "2,0.000000000000,0.000000000000,0.000000000000,100\n");
}

TEST_CASE("csv round-trip preserves values at emitted precision") {
  const std::string dir = temp_dir("csv_rt");
  SplitMix64 rng(8181);
  AggregateTrace trace;
  trace.runs = 7;
  for (int i = 0; i < 40; ++i) {
    trace.slots.push_back(2 + i);
    const int mag = static_cast<int>(rng.next_index(7)) - 2;
    const double v = rng.next_double() * std::pow(10.0, mag);
    trace.mean_regret.push_back(v);
    trace.stderr_regret.push_back(v / 10.0);
    trace.mean_regret_over_log.push_back(v / std::log(2.0 + i));
  }
  emit_csv(trace, dir + "/rt.csv");
  const auto rows = read_csv(dir + "/rt.csv");
  REQUIRE(rows.size() == 41);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == 5);
    const double back = std::stod(rows[r][1]);
    const double orig = trace.mean_regret[r - 1];
    CHECK(std::abs(back - orig) <= std::max(std::abs(orig) * 5e-12, 5e-13));
    CHECK(rows[r][4] == "7");
  }
}

TEST_CASE("reruns are byte-identical and worker-count independent") {
  const std::string dir = temp_dir("determinism");
  ExperimentConfig c = small_config();
  c.out_dir = dir + "/a";
  ExperimentArtifacts first = run_experiment(c);
  c.out_dir = dir + "/b";
  c.workers = 1;
  ExperimentArtifacts second = run_experiment(c);
  c.out_dir = dir + "/c";
  c.workers = 5;
  ExperimentArtifacts third = run_experiment(c);
  const std::string bytes = slurp(dir + "/a/small.csv");
  CHECK(bytes == slurp(dir + "/b/small.csv"));
  CHECK(bytes == slurp(dir + "/c/small.csv"));
  CHECK(first.aggregate.runs == 6);
  CHECK(second.aggregate.mean_regret == third.aggregate.mean_regret);
}

TEST_CASE("alg2 with k = N yields an identically zero aggregate column") {
  const std::string dir = temp_dir("zero");
  ExperimentConfig c = small_config();
  c.k = 8;
  c.runs = 20;
  c.out_dir = dir;
  c.label = "zero";
  const ExperimentArtifacts art = run_experiment(c);
  for (double v : art.aggregate.mean_regret) CHECK(v == 0.0);
  for (double v : art.aggregate.stderr_regret) CHECK(v == 0.0);
  const std::string text = slurp(dir + "/zero.csv");
  CHECK(text.find(",0.000000000000,0.000000000000,") != std::string::npos);
}

TEST_CASE("per-run csv and svg artifacts are written") {
  const std::string dir = temp_dir("artifacts");
  ExperimentConfig c = small_config();
  c.per_run_csv = true;
  c.out_dir = dir;
  c.label = "full";
  const ExperimentArtifacts art = run_experiment(c);
  REQUIRE(art.files.size() == 3);
  CHECK(std::filesystem::exists(dir + "/full.csv"));
  CHECK(std::filesystem::exists(dir + "/full_runs.csv"));
  CHECK(std::filesystem::exists(dir + "/full.svg"));
  const std::string svg = slurp(dir + "/full.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  const auto rows = read_csv(dir + "/full_runs.csv");
  CHECK(rows.size() == 1 + 6 * default_checkpoints(c.slots).size());
}

TEST_CASE("alg4 sweep cap failures adjust the aggregate run count") {
  ExperimentConfig c;
  c.model.theta = {0.9, 1e-6};
  c.model.p_d = {1.0, 1.0};
  c.model.p_f = {0.0, 0.0};
  c.model.reward_unit = 1.0;
  c.policy = "alg4";
  c.sensing_case = SensingCase::kPartial;
  c.m = 2;
  c.k = 1;
  c.slots = 300;
  c.runs = 4;
  c.master_seed = 5;
  c.alg4_sweep_cap_slots = 100;
  c.plot = false;
  c.out_dir = temp_dir("sweepfail");
  c.label = "fail";
  const ExperimentArtifacts art = run_experiment(c);
  CHECK(art.aggregate.runs == 0);
  CHECK_FALSE(art.aggregate.warnings.empty());
}

TEST_CASE("alg4 horizon ending inside the sweep is a run failure") {
  ExperimentConfig c = small_config();
  c.model = osa_test::truncate_model(c.model, 3);
  c.policy = "alg4";
  c.sensing_case = SensingCase::kPartial;
  c.m = 2;
  c.slots = 2;  // the three-set sweep cannot finish in two slots
  c.runs = 2;
  c.checkpoints = {1, 2};
  c.plot = false;
  c.out_dir = temp_dir("sweep_horizon");
  const ExperimentArtifacts art = run_experiment(c);
  CHECK(art.aggregate.runs == 0);
  REQUIRE_FALSE(art.aggregate.warnings.empty());
  CHECK(art.aggregate.warnings[0].find("init sweep") != std::string::npos);
}

TEST_CASE("above the enumeration cap the benchmark falls back to Monte-Carlo") {
  ExperimentConfig c;
  SplitMix64 rng(21);
  for (int i = 0; i < 21; ++i) {
    c.model.theta.push_back(0.1 + 0.8 * rng.next_double());
    c.model.p_d.push_back(0.8);
    c.model.p_f.push_back(0.3);
  }
  c.policy = "alg2";
  c.k = 1;
  c.slots = 500;
  c.runs = 3;
  c.master_seed = 2121;
  c.genie_mc_samples = 50000;
  c.plot = false;
  c.out_dir = temp_dir("mc_fallback");
  c.label = "mc";
  const ExperimentArtifacts art = run_experiment(c);
  CHECK(art.aggregate.runs == 3);
  REQUIRE_FALSE(art.aggregate.warnings.empty());
  CHECK(art.aggregate.warnings[0].find("Monte-Carlo") != std::string::npos);
  CHECK(art.aggregate.genie_per_slot_value > 0.0);
}

TEST_CASE("a zero iteration budget still returns a candidate") {
  const SensingParams sensing{{0.8, 0.8}, {0.3, 0.3}};
  OutcomeTable t(2);
  t.record(0b01);
  t.record(0b11);
  FitOptions opts;
  opts.max_iters = 0;
  const FitResult fit = fit_theta(t, sensing, 2, opts);
  CHECK(fit.in_candidate_set);
  CHECK(fit.iterations == 0);
}

TEST_CASE("genie policy selection by name") {
  ExperimentConfig c = small_config();
  validate_config(c);
  for (const char* name : {"alg1", "alg2"}) {
    c.policy = name;
    CHECK(std::string(make_policy(c)->name()) == name);
  }
  c.policy = "alg3";
  c.m = 4;
  CHECK(std::string(make_policy(c)->name()) == "alg3");
  c.policy = "alg4";
  CHECK(std::string(make_policy(c)->name()) == "alg4");
}
