#ifndef OSA_SIMULATE_HPP
#define OSA_SIMULATE_HPP

#include <cstdint>
#include <utility>

#include "osa/channel_model.hpp"
#include "osa/policies.hpp"
#include "osa/rng.hpp"

namespace osa {

// Drives one policy against a fresh channel process for `slots` slots.
// Slot indices start at 1. The ACK of an accessed channel is its true
// state (a primary collision yields no ACK). per_slot receives the
// completed decision and outcome of every slot.
template <typename PerSlot>
void simulate_run(const ChannelModel& model, Policy& policy,
                  std::int64_t slots, SplitMix64& rng, PerSlot&& per_slot) {
  for (std::int64_t t = 1; t <= slots; ++t) {
    const ChannelMask sense = policy.select_sense_set(t);
    SlotOutcome outcome = sample_slot(model, sense, t, rng);
    policy.observe_sensing(t, outcome.sensed_free);
    const ChannelMask access =
        policy.select_access_set(t, outcome.sensed_free, rng);
    outcome.accessed = access;
    outcome.acks = access & outcome.true_states;
    policy.observe_acks(t, access, outcome.acks);
    per_slot(PolicyDecision{sense, access}, std::as_const(outcome));
  }
}

}  // namespace osa

#endif  // OSA_SIMULATE_HPP
