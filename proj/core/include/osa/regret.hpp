#ifndef OSA_REGRET_HPP
#define OSA_REGRET_HPP

#include <cstdint>
#include <vector>

#include "osa/channel_model.hpp"
#include "osa/genie.hpp"
#include "osa/policies.hpp"

namespace osa {

// Semi-analytic per-slot expected reward of one decision: conditional
// on the realized sensing outcome, accessing channel i is worth
// cond_reward(theta_i) reward units. Throws on a decision inconsistent
// with the outcome (access outside the sensed-free set, sense-set
// mismatch).
double slot_expected_reward(const PolicyDecision& decision,
                            const SlotOutcome& outcome,
                            const ChannelModel& model);

struct RegretTrace {
  std::vector<std::int64_t> slots;
  std::vector<double> regret;           // R(t), reward units
  std::vector<double> regret_over_log;  // R(t)/ln t; NaN (absent) for t <= 1
  std::vector<double> realized_reward;  // ACK-based cumulative reward
};

// Streaming regret accounting against a fixed genie benchmark.
//
// When the genie senses every channel (Case I), the benchmark term is
// paired on the realized outcome — both sides of each slot's increment
// condition on the same sensing vector, so a policy whose decision
// coincides with the genie's accumulates exactly zero. With partial
// sensing the genie's outcome is unobserved and the exact enumerated
// per-slot value is used instead.
class RegretAccumulator {
 public:
  RegretAccumulator(const ChannelModel& model, const GenieValue& genie,
                    std::vector<std::int64_t> checkpoints);

  void on_slot(const PolicyDecision& decision, const SlotOutcome& outcome);
  RegretTrace take_trace();

 private:
  const ChannelModel* model_;
  const GenieValue* genie_;
  bool paired_;
  std::vector<std::int64_t> checkpoints_;
  std::size_t next_checkpoint_ = 0;
  std::int64_t slot_ = 0;
  double cum_regret_ = 0.0;
  double cum_realized_ = 0.0;
  RegretTrace trace_;
};

struct SlotRecord {
  PolicyDecision decision;
  SlotOutcome outcome;
};

// Batch form of the accumulator over a recorded run log.
RegretTrace regret_trace(const std::vector<SlotRecord>& log,
                         const GenieValue& genie,
                         const std::vector<std::int64_t>& checkpoints,
                         const ChannelModel& model);

// Inputs of the closed-form logarithmic regret bound for the
// homogeneous partial-sensing rule.
struct BoundInputs {
  double delta = 0.0;  // maximal per-slot genie expected reward, reward units
  std::vector<double> theta_sorted;  // strictly decreasing
  double p_d = 0.0, p_f = 0.0;
  int m = 0;
};

// Computes delta by enumerating the 2^M outcomes of the top-M set.
// Requires homogeneous sensing and strictly distinct theta.
BoundInputs make_alg3_bound_inputs(const ChannelModel& model, int m);

// The four-term bound: two log terms over the (theta_M - theta_i) and
// in-set (theta_i - theta_k) gaps, plus two constant terms.
double alg3_regret_bound(const BoundInputs& inputs, std::int64_t t);

}  // namespace osa

#endif  // OSA_REGRET_HPP
