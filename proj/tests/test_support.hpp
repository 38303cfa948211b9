#ifndef OSA_TEST_SUPPORT_HPP
#define OSA_TEST_SUPPORT_HPP

#include <stdexcept>
#include <vector>

#include "osa/channel_model.hpp"
#include "osa/policies.hpp"
#include "osa/regret.hpp"
#include "osa/rng.hpp"
#include "osa/simulate.hpp"

namespace osa_test {

inline const std::vector<double>& reference_theta() {
  static const std::vector<double> theta = {0.9,   0.8,   0.657, 0.564,
                                            0.5,   0.456, 0.404, 0.34};
  return theta;
}

inline osa::ChannelModel reference_homogeneous_model(double reward_unit = 1.0) {
  return osa::make_homogeneous_model(reference_theta(), 0.8, 0.3, reward_unit);
}

inline osa::ChannelModel reference_heterogeneous_model(double reward_unit = 1.0) {
  osa::ChannelModel m;
  m.theta = reference_theta();
  m.p_d = {0.8, 0.8, 0.7, 0.75, 0.9, 0.67, 0.85, 0.8};
  m.p_f = {0.3, 0.3, 0.2, 0.25, 0.36, 0.15, 0.32, 0.3};
  m.reward_unit = reward_unit;
  m.validate();
  return m;
}

// First n channels of either reference model.
inline osa::ChannelModel truncate_model(const osa::ChannelModel& m, int n) {
  osa::ChannelModel out = m;
  out.theta.resize(n);
  out.p_d.resize(n);
  out.p_f.resize(n);
  out.validate();
  return out;
}

// Runs a policy while asserting the structural invariants on every
// slot: access within the sensed-free set and at most k_limit wide.
template <typename PerSlot>
void run_checked(const osa::ChannelModel& model, osa::Policy& policy,
                 std::int64_t slots, std::uint64_t seed, int k_limit,
                 PerSlot&& per_slot) {
  osa::SplitMix64 rng(seed);
  osa::simulate_run(model, policy, slots, rng,
                    [&](const osa::PolicyDecision& d, const osa::SlotOutcome& o) {
                      if ((d.access_set & ~o.sensed_free) != 0)
                        throw std::logic_error("access outside sensed-free set");
                      if (osa::mask_size(d.access_set) > k_limit)
                        throw std::logic_error("access set wider than K");
                      per_slot(d, o);
                    });
}

inline std::vector<osa::SlotRecord> run_logged(const osa::ChannelModel& model,
                                               osa::Policy& policy,
                                               std::int64_t slots,
                                               std::uint64_t seed, int k_limit) {
  std::vector<osa::SlotRecord> log;
  log.reserve(static_cast<std::size_t>(slots));
  run_checked(model, policy, slots, seed, k_limit,
              [&](const osa::PolicyDecision& d, const osa::SlotOutcome& o) {
                log.push_back({d, o});
              });
  return log;
}

}  // namespace osa_test

#endif  // OSA_TEST_SUPPORT_HPP
