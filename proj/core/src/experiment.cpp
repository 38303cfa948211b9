#include "osa/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "osa/simulate.hpp"
#include "osa/svg_plot.hpp"

namespace osa {
namespace {

// Fixed 12 decimal places; parses back bit-faithfully at the precision
// the regret traces carry.
std::string csv_value(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

int resolve_workers(const ExperimentConfig& config) {
  if (config.workers > 0) return config.workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

std::unique_ptr<Policy> make_policy(const ExperimentConfig& c) {
  SensingParams sensing = sensing_of(c.model);
  if (c.policy == "alg1")
    return std::make_unique<Alg1Policy>(std::move(sensing), c.k, c.alg1_fit,
                                        c.alg1_warm_start);
  if (c.policy == "alg2")
    return std::make_unique<Alg2Policy>(std::move(sensing), c.k);
  if (c.policy == "alg3")
    return std::make_unique<Alg3Policy>(std::move(sensing), c.m, c.k);
  if (c.policy == "alg4")
    return std::make_unique<Alg4Policy>(std::move(sensing), c.m, c.k,
                                        c.alg4_sweep_cap_slots);
  throw ConfigError("config: unknown policy '" + c.policy + "'");
}

GenieValue experiment_genie(const ExperimentConfig& c,
                            std::vector<std::string>* warnings) {
  if (c.sensing_case == SensingCase::kPartial) {
    try {
      return genie_best_set_partial(c.model, c.m, c.k);
    } catch (const EnumerationCapError& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  try {
    return genie_value_full(c.model, c.k, c.genie_enum_cap);
  } catch (const EnumerationCapError&) {
    // Above the cap the benchmark degrades to a Monte-Carlo per-slot
    // value; regret traces then carry benchmark noise of the reported
    // standard error.
    const MonteCarloEstimate est = genie_value_monte_carlo(
        c.model, full_mask(c.model.n()), c.k, c.genie_mc_samples,
        derive_run_seed(c.master_seed, 0x67656e6965ull));
    GenieValue g;
    g.sense_set = full_mask(c.model.n());
    g.per_slot_value = est.mean;
    if (warnings)
      warnings->push_back(
          "genie benchmark estimated by Monte-Carlo (N above enumeration "
          "cap); std error " +
          std::to_string(est.std_error));
    return g;
  }
}

std::vector<RunResult> simulate_runs(const ExperimentConfig& config,
                                     const GenieValue& genie) {
  std::vector<RunResult> results(static_cast<std::size_t>(config.runs));
  std::atomic<std::int64_t> next_run{0};

  auto worker = [&]() {
    for (;;) {
      const std::int64_t r = next_run.fetch_add(1);
      if (r >= config.runs) return;
      RunResult& result = results[static_cast<std::size_t>(r)];
      try {
        SplitMix64 rng(derive_run_seed(config.master_seed,
                                       static_cast<std::uint64_t>(r)));
        std::unique_ptr<Policy> policy = make_policy(config);
        RegretAccumulator acc(config.model, genie, config.checkpoints);
        simulate_run(config.model, *policy, config.slots, rng,
                     [&](const PolicyDecision& d, const SlotOutcome& o) {
                       acc.on_slot(d, o);
                     });
        if (auto* alg4 = dynamic_cast<Alg4Policy*>(policy.get());
            alg4 && alg4->in_init_sweep())
          throw SweepAbort(
              "alg4: horizon ended inside the init sweep (slots = " +
              std::to_string(config.slots) + "); increase slots");
        result.trace = acc.take_trace();
      } catch (const std::exception& e) {
        result.failed = true;
        result.error = e.what();
      }
    }
  };

  const int workers =
      static_cast<int>(std::min<std::int64_t>(resolve_workers(config), config.runs));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return results;
}

AggregateTrace aggregate_runs(const ExperimentConfig& config,
                              const std::vector<RunResult>& runs) {
  AggregateTrace agg;
  agg.slots = config.checkpoints;
  const std::size_t cps = agg.slots.size();

  std::int64_t ok = 0;
  for (const RunResult& r : runs) ok += r.failed ? 0 : 1;
  agg.runs = ok;

  std::size_t reported = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (!runs[r].failed) continue;
    if (reported < 5)
      agg.warnings.push_back("run " + std::to_string(r) +
                             " failed: " + runs[r].error);
    ++reported;
  }
  if (reported > 5)
    agg.warnings.push_back(std::to_string(reported - 5) + " more runs failed");

  if (ok == 0) {
    agg.slots.clear();  // no rows without at least one successful run
    return agg;
  }

  agg.mean_regret.assign(cps, 0.0);
  agg.stderr_regret.assign(cps, 0.0);
  agg.mean_regret_over_log.assign(cps, 0.0);
  // Two index-ordered passes keep the reduction independent of worker
  // count and scheduling.
  for (const RunResult& r : runs) {
    if (r.failed) continue;
    for (std::size_t i = 0; i < cps; ++i) agg.mean_regret[i] += r.trace.regret[i];
  }
  for (std::size_t i = 0; i < cps; ++i)
    agg.mean_regret[i] /= static_cast<double>(ok);
  if (ok > 1) {
    for (const RunResult& r : runs) {
      if (r.failed) continue;
      for (std::size_t i = 0; i < cps; ++i) {
        const double dev = r.trace.regret[i] - agg.mean_regret[i];
        agg.stderr_regret[i] += dev * dev;
      }
    }
    for (std::size_t i = 0; i < cps; ++i)
      agg.stderr_regret[i] = std::sqrt(agg.stderr_regret[i] /
                                       static_cast<double>(ok - 1) /
                                       static_cast<double>(ok));
  }
  for (std::size_t i = 0; i < cps; ++i) {
    agg.mean_regret_over_log[i] =
        agg.slots[i] >= 2
            ? agg.mean_regret[i] / std::log(static_cast<double>(agg.slots[i]))
            : std::numeric_limits<double>::quiet_NaN();
  }
  return agg;
}

void emit_csv(const AggregateTrace& trace, const std::string& path) {
  if (trace.mean_regret.size() != trace.slots.size() ||
      trace.stderr_regret.size() != trace.slots.size() ||
      trace.mean_regret_over_log.size() != trace.slots.size())
    throw std::invalid_argument("csv: ragged aggregate trace");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("csv: cannot open " + path);
  out << "slot,mean_regret,stderr_regret,mean_regret_over_log,runs\n";
  for (std::size_t i = 0; i < trace.slots.size(); ++i) {
    out << trace.slots[i] << ',' << csv_value(trace.mean_regret[i]) << ','
        << csv_value(trace.stderr_regret[i]) << ','
        << csv_value(trace.mean_regret_over_log[i]) << ',' << trace.runs
        << '\n';
  }
  if (!out) throw std::runtime_error("csv: write failed for " + path);
}

void emit_per_run_csv(const std::vector<RunResult>& runs,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("csv: cannot open " + path);
  out << "run,slot,regret,regret_over_log,realized_reward\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].failed) continue;
    const RegretTrace& t = runs[r].trace;
    for (std::size_t i = 0; i < t.slots.size(); ++i) {
      out << r << ',' << t.slots[i] << ',' << csv_value(t.regret[i]) << ','
          << csv_value(t.regret_over_log[i]) << ','
          << csv_value(t.realized_reward[i]) << '\n';
    }
  }
  if (!out) throw std::runtime_error("csv: write failed for " + path);
}

ExperimentArtifacts run_experiment(ExperimentConfig config) {
  validate_config(config);

  ExperimentArtifacts artifacts;
  std::vector<std::string> warnings;
  const GenieValue genie = experiment_genie(config, &warnings);
  const std::vector<RunResult> runs = simulate_runs(config, genie);
  artifacts.aggregate = aggregate_runs(config, runs);
  artifacts.aggregate.genie_per_slot_value = genie.per_slot_value;
  artifacts.aggregate.warnings.insert(artifacts.aggregate.warnings.begin(),
                                      warnings.begin(), warnings.end());

  std::filesystem::create_directories(config.out_dir);
  const std::string base = config.out_dir + "/" + config.label;

  emit_csv(artifacts.aggregate, base + ".csv");
  artifacts.files.push_back(base + ".csv");
  if (config.per_run_csv) {
    emit_per_run_csv(runs, base + "_runs.csv");
    artifacts.files.push_back(base + "_runs.csv");
  }
  if (config.plot && artifacts.aggregate.runs > 0) {
    const bool full = config.sensing_case == SensingCase::kFull;
    PlotSeries series;
    series.label = config.policy + " k=" + std::to_string(config.k) +
                   (full ? "" : " m=" + std::to_string(config.m));
    for (std::size_t i = 0; i < artifacts.aggregate.slots.size(); ++i) {
      series.x.push_back(static_cast<double>(artifacts.aggregate.slots[i]));
      series.y.push_back(full ? artifacts.aggregate.mean_regret[i]
                              : artifacts.aggregate.mean_regret_over_log[i]);
    }
    write_svg_line_plot(base + ".svg", config.label, "t (slots)",
                        full ? "mean R(t)" : "mean R(t) / ln t", {series},
                        /*log_x=*/true);
    artifacts.files.push_back(base + ".svg");
  }
  return artifacts;
}

}  // namespace osa
