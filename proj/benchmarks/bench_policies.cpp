// Throughput benchmarks: slots per second for each policy loop, fit
// cost for the candidate-set rule, and the oracle enumeration. The
// headline target is the partial-sensing experiment at reference scale:
// 1e5 slots x 500 runs should finish within a desktop minute.

#include <benchmark/benchmark.h>

#include "osa/experiment.hpp"
#include "osa/genie.hpp"
#include "osa/optimizer.hpp"
#include "osa/simulate.hpp"

namespace {

osa::ChannelModel homogeneous_model() {
  return osa::make_homogeneous_model(
      {0.9, 0.8, 0.657, 0.564, 0.5, 0.456, 0.404, 0.34}, 0.8, 0.3);
}

osa::ChannelModel heterogeneous_model() {
  osa::ChannelModel m;
  m.theta = {0.9, 0.8, 0.657, 0.564, 0.5, 0.456, 0.404, 0.34};
  m.p_d = {0.8, 0.8, 0.7, 0.75, 0.9, 0.67, 0.85, 0.8};
  m.p_f = {0.3, 0.3, 0.2, 0.25, 0.36, 0.15, 0.32, 0.3};
  m.reward_unit = 1.0;
  return m;
}

template <typename MakePolicy>
void run_slots(benchmark::State& state, const osa::ChannelModel& model,
               MakePolicy&& make) {
  const std::int64_t slots = state.range(0);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto policy = make();
    osa::SplitMix64 rng(seed++);
    double sink = 0.0;
    osa::simulate_run(model, *policy, slots, rng,
                      [&](const osa::PolicyDecision& d, const osa::SlotOutcome&) {
                        sink += static_cast<double>(d.access_set);
                      });
    benchmark::DoNotOptimize(sink);
  }
  state.SetItemsProcessed(state.iterations() * slots);
}

void BM_Alg2Slots(benchmark::State& state) {
  const auto model = homogeneous_model();
  run_slots(state, model, [&] {
    return std::make_unique<osa::Alg2Policy>(osa::sensing_of(model), 1);
  });
}
BENCHMARK(BM_Alg2Slots)->Arg(100000);

void BM_Alg3Slots(benchmark::State& state) {
  const auto model = homogeneous_model();
  run_slots(state, model, [&] {
    return std::make_unique<osa::Alg3Policy>(osa::sensing_of(model), 4, 1);
  });
}
BENCHMARK(BM_Alg3Slots)->Arg(100000);

void BM_Alg4Slots(benchmark::State& state) {
  const auto model = heterogeneous_model();
  run_slots(state, model, [&] {
    return std::make_unique<osa::Alg4Policy>(osa::sensing_of(model), 4, 1);
  });
}
BENCHMARK(BM_Alg4Slots)->Arg(100000);

void BM_Alg1Slots(benchmark::State& state) {
  const auto model = homogeneous_model();
  osa::FitOptions fit;
  fit.starts = 2;
  fit.max_iters = 60;
  fit.grad_tol = 1e-8;
  run_slots(state, model, [&] {
    return std::make_unique<osa::Alg1Policy>(osa::sensing_of(model), 1, fit);
  });
}
BENCHMARK(BM_Alg1Slots)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_FitTheta(benchmark::State& state) {
  const auto model = homogeneous_model();
  osa::OutcomeTable table(model.n());
  osa::SplitMix64 rng(7);
  for (int t = 1; t <= state.range(0); ++t)
    table.record(
        osa::sample_slot(model, osa::full_mask(model.n()), t, rng).sensed_free);
  const osa::SensingParams sensing = osa::sensing_of(model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        osa::fit_theta(table, sensing, state.range(0)));
  }
}
BENCHMARK(BM_FitTheta)->Arg(1000)->Arg(100000);

void BM_GenieFull(benchmark::State& state) {
  const auto model = heterogeneous_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(osa::genie_value_full(model, 1));
  }
}
BENCHMARK(BM_GenieFull);

void BM_GenieBestSetPartial(benchmark::State& state) {
  const auto model = heterogeneous_model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(osa::genie_best_set_partial(model, 4, 1));
  }
}
BENCHMARK(BM_GenieBestSetPartial);

// The reference-scale partial-sensing experiment end to end.
void BM_Alg3Experiment(benchmark::State& state) {
  for (auto _ : state) {
    osa::ExperimentConfig config;
    config.model = homogeneous_model();
    config.policy = "alg3";
    config.sensing_case = osa::SensingCase::kPartial;
    config.m = 4;
    config.k = 1;
    config.slots = 100000;
    config.runs = state.range(0);
    config.master_seed = 9;
    osa::validate_config(config);
    const osa::GenieValue genie = osa::experiment_genie(config);
    benchmark::DoNotOptimize(osa::simulate_runs(config, genie));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100000);
}
BENCHMARK(BM_Alg3Experiment)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
