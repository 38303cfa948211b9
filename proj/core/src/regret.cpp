#include "osa/regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "osa/combinatorics.hpp"

namespace osa {

double slot_expected_reward(const PolicyDecision& decision,
                            const SlotOutcome& outcome,
                            const ChannelModel& model) {
  if (decision.sense_set != outcome.sensed_set ||
      (decision.access_set & ~outcome.sensed_free) != 0)
    throw std::invalid_argument(
        "slot_expected_reward: decision inconsistent with outcome");
  double v = 0.0;
  for (ChannelMask m = decision.access_set; m;) {
    v += model.cond(std::countr_zero(m));
    m &= m - 1;
  }
  return v * model.reward_unit;
}

RegretAccumulator::RegretAccumulator(const ChannelModel& model,
                                     const GenieValue& genie,
                                     std::vector<std::int64_t> checkpoints)
    : model_(&model), genie_(&genie),
      // Pairing needs the per-outcome table; a Monte-Carlo benchmark
      // (above the enumeration cap) only carries the scalar value.
      paired_(genie.sense_set == full_mask(model.n()) &&
              !genie.outcome_value.empty()),
      checkpoints_(std::move(checkpoints)) {
  if (!std::is_sorted(checkpoints_.begin(), checkpoints_.end()))
    throw std::invalid_argument("regret: checkpoints must be ascending");
}

void RegretAccumulator::on_slot(const PolicyDecision& decision,
                                const SlotOutcome& outcome) {
  ++slot_;
  const double policy_term = slot_expected_reward(decision, outcome, *model_);
  if (paired_ && outcome.sensed_set != genie_->sense_set)
    throw std::invalid_argument(
        "regret: slot sensing set does not match the full-sensing benchmark");
  const double genie_term =
      paired_ ? genie_->outcome_value[outcome.sensed_free]
              : genie_->per_slot_value;
  cum_regret_ += genie_term - policy_term;
  cum_realized_ += model_->reward_unit * mask_size(outcome.acks);
  while (next_checkpoint_ < checkpoints_.size() &&
         checkpoints_[next_checkpoint_] == slot_) {
    trace_.slots.push_back(slot_);
    trace_.regret.push_back(cum_regret_);
    trace_.regret_over_log.push_back(
        slot_ >= 2 ? cum_regret_ / std::log(static_cast<double>(slot_))
                   : std::numeric_limits<double>::quiet_NaN());
    trace_.realized_reward.push_back(cum_realized_);
    ++next_checkpoint_;
  }
}

RegretTrace RegretAccumulator::take_trace() { return std::move(trace_); }

RegretTrace regret_trace(const std::vector<SlotRecord>& log,
                         const GenieValue& genie,
                         const std::vector<std::int64_t>& checkpoints,
                         const ChannelModel& model) {
  RegretAccumulator acc(model, genie, checkpoints);
  for (const SlotRecord& rec : log) acc.on_slot(rec.decision, rec.outcome);
  return acc.take_trace();
}

BoundInputs make_alg3_bound_inputs(const ChannelModel& model, int m) {
  model.validate();
  if (!model.homogeneous_sensing())
    throw std::invalid_argument("alg3 bound: requires homogeneous sensing");
  if (m < 1 || m > model.n())
    throw std::invalid_argument("alg3 bound: m out of range");

  BoundInputs in;
  in.theta_sorted = model.theta;
  std::sort(in.theta_sorted.rbegin(), in.theta_sorted.rend());
  for (std::size_t i = 1; i < in.theta_sorted.size(); ++i) {
    if (!(in.theta_sorted[i - 1] > in.theta_sorted[i]))
      throw std::domain_error("alg3 bound: theta must be strictly decreasing");
  }
  in.p_d = model.p_d[0];
  in.p_f = model.p_f[0];
  in.m = m;

  // Delta: expected reward of the genie sensing the top-M channels and
  // accessing the best sensed-free one.
  std::vector<int> order(model.n());
  for (int i = 0; i < model.n(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return model.theta[a] > model.theta[b]; });
  ChannelMask top_m = 0;
  for (int j = 0; j < m; ++j) top_m |= ChannelMask{1} << order[j];
  in.delta = genie_set_value(model, top_m, 1).per_slot_value;
  return in;
}

double alg3_regret_bound(const BoundInputs& in, std::int64_t t) {
  if (t < 2) throw std::invalid_argument("alg3_regret_bound: t must be >= 2");
  const int n = static_cast<int>(in.theta_sorted.size());
  const int m = in.m;
  const double d_sq = (in.p_d - in.p_f) * (in.p_d - in.p_f);
  const double pi_sq = std::numbers::pi * std::numbers::pi;

  double outside = 0.0;  // channels below the top M
  for (int i = m; i < n; ++i) {
    const double gap = in.theta_sorted[m - 1] - in.theta_sorted[i];
    if (!(gap > 0.0))
      throw std::domain_error("alg3_regret_bound: zero theta gap");
    outside += 8.0 / (gap * gap * d_sq);
  }
  double inside = 0.0;  // pairs within the top M
  for (int i = 0; i < m; ++i) {
    for (int k = i + 1; k < m; ++k) {
      const double gap = in.theta_sorted[i] - in.theta_sorted[k];
      if (!(gap > 0.0))
        throw std::domain_error("alg3_regret_bound: zero theta gap");
      inside += 8.0 / (gap * gap * d_sq);
    }
  }
  const double ln_t = std::log(static_cast<double>(t));
  const double pairs_m = static_cast<double>(binomial(m, 2));
  return in.delta * ln_t * (outside + inside) +
         in.delta * static_cast<double>(n - m) * (m * pi_sq / 3.0 + 1.0) +
         in.delta * pairs_m * (pi_sq / 3.0 + 1.0);
}

}  // namespace osa
