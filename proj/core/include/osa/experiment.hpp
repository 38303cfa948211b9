#ifndef OSA_EXPERIMENT_HPP
#define OSA_EXPERIMENT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "osa/channel_model.hpp"
#include "osa/genie.hpp"
#include "osa/optimizer.hpp"
#include "osa/regret.hpp"

namespace osa {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SensingCase { kFull, kPartial };

struct ExperimentConfig {
  ChannelModel model;
  SensingCase sensing_case = SensingCase::kFull;
  std::string policy = "alg2";  // alg1 | alg2 | alg3 | alg4
  int k = 1;                    // access width
  int m = 0;                    // sensing width, partial case only
  std::int64_t slots = 10000;
  std::int64_t runs = 1;
  std::uint64_t master_seed = 1;
  std::vector<std::int64_t> checkpoints;  // empty = default grid

  FitOptions alg1_fit;
  bool alg1_warm_start = true;
  std::int64_t alg4_sweep_cap_slots = 0;  // 0 = no cap
  int genie_enum_cap = 20;
  std::int64_t genie_mc_samples = 1'000'000;

  std::string label = "experiment";
  std::string out_dir = ".";
  bool per_run_csv = false;
  bool plot = true;
  int workers = 0;  // 0 = hardware concurrency
};

// Geometric grid {2,4,8,...} plus decade points plus the horizon.
std::vector<std::int64_t> default_checkpoints(std::int64_t slots);

// Fills defaults (checkpoints, case from policy) and throws ConfigError
// on any inconsistency.
void validate_config(ExperimentConfig& config);

// Reads the key = value experiment file. Unknown keys are errors.
ExperimentConfig load_config_file(const std::string& path);

// Applies one CLI-style override (same keys as the file format).
void apply_override(ExperimentConfig& config, const std::string& key,
                    const std::string& value);

std::unique_ptr<Policy> make_policy(const ExperimentConfig& config);

// Benchmark used for the regret traces: exact enumeration when
// feasible, Monte-Carlo per-slot value (with a warning) above the
// full-sensing cap.
GenieValue experiment_genie(const ExperimentConfig& config,
                            std::vector<std::string>* warnings = nullptr);

struct RunResult {
  bool failed = false;
  std::string error;
  RegretTrace trace;
};

// Executes runs 0..runs-1, each on its own derived stream; determinism
// does not depend on the worker count. validate_config must have run.
std::vector<RunResult> simulate_runs(const ExperimentConfig& config,
                                     const GenieValue& genie);

struct AggregateTrace {
  std::vector<std::int64_t> slots;
  std::vector<double> mean_regret;
  std::vector<double> stderr_regret;
  std::vector<double> mean_regret_over_log;  // NaN where undefined
  std::int64_t runs = 0;                     // successful runs
  std::vector<std::string> warnings;
  double genie_per_slot_value = 0.0;
};

// Index-ordered reduction over the per-run traces.
AggregateTrace aggregate_runs(const ExperimentConfig& config,
                              const std::vector<RunResult>& runs);

struct ExperimentArtifacts {
  AggregateTrace aggregate;
  std::vector<std::string> files;  // paths written
};

// validate + genie + runs + aggregate + artifact files.
ExperimentArtifacts run_experiment(ExperimentConfig config);

// Aggregate CSV: header
//   slot,mean_regret,stderr_regret,mean_regret_over_log,runs
// one row per checkpoint, fixed 12 decimal places, LF line endings.
// Undefined regret_over_log cells are left empty.
void emit_csv(const AggregateTrace& trace, const std::string& path);

// Per-run diagnostic CSV: run,slot,regret,regret_over_log,realized_reward.
void emit_per_run_csv(const std::vector<RunResult>& runs,
                      const std::string& path);

}  // namespace osa

#endif  // OSA_EXPERIMENT_HPP
