#ifndef OSA_CHANNEL_MODEL_HPP
#define OSA_CHANNEL_MODEL_HPP

#include <bit>
#include <cstdint>
#include <vector>

#include "osa/rng.hpp"

namespace osa {

// Channel subsets and per-slot binary vectors are bitmasks: bit i is
// channel i (0-based). A sensing-outcome bit is meaningful only for
// channels inside the slot's sensed set; unsensed channels carry no
// sensing value at all.
using ChannelMask = std::uint64_t;

inline int mask_size(ChannelMask m) { return std::popcount(m); }
inline ChannelMask full_mask(int n) {
  return n >= 64 ? ~ChannelMask{0} : ((ChannelMask{1} << n) - 1);
}

// Probability a channel is sensed free: mixes the true state with the
// sensor's miss/false-alarm behaviour.
//   f(theta) = (1 - p_f) * theta + (1 - p_d) * (1 - theta)
double sensed_free_prob(double theta, double p_d, double p_f);

// Expected reward of accessing a sensed-free channel:
//   E[S | X = 1] = (1 - p_f) * theta / f(theta)
// Returns 0 at the degenerate point f(theta) = 0 (theta = 0 with
// p_d = 1), which can only arise from estimator outputs, never from a
// validated model.
double cond_reward(double theta, double p_d, double p_f);

// Ground truth hidden from the policies: per-channel free probability
// plus sensing quality, and the reward earned per successfully used
// channel-slot.
struct ChannelModel {
  std::vector<double> theta;  // free probability, in (0, 1]
  std::vector<double> p_d;    // detection probability
  std::vector<double> p_f;    // false-alarm probability, p_f < p_d
  double reward_unit = 1.0;

  int n() const { return static_cast<int>(theta.size()); }

  double sensed_free(int i) const {
    return sensed_free_prob(theta[i], p_d[i], p_f[i]);
  }
  double cond(int i) const { return cond_reward(theta[i], p_d[i], p_f[i]); }

  bool homogeneous_sensing() const;

  // Throws std::invalid_argument when any invariant fails:
  // 0 < theta_i <= 1, 0 <= p_f_i < p_d_i <= 1, reward_unit > 0.
  void validate() const;
};

ChannelModel make_homogeneous_model(std::vector<double> theta, double p_d,
                                    double p_f, double reward_unit = 1.0);

// What a policy is allowed to know about the channel process: the
// sensor quality, never the free probabilities.
struct SensingParams {
  std::vector<double> p_d;
  std::vector<double> p_f;

  int n() const { return static_cast<int>(p_d.size()); }
  bool homogeneous() const;
  double cond(int i, double theta_hat) const {
    return cond_reward(theta_hat, p_d[i], p_f[i]);
  }
};

SensingParams sensing_of(const ChannelModel& model);

// One slot of the channel process as seen by the simulator.
struct SlotOutcome {
  std::int64_t slot = 0;
  ChannelMask true_states = 0;  // S_i, all N channels
  ChannelMask sensed_set = 0;
  ChannelMask sensed_free = 0;  // X_i = 1, bits within sensed_set
  ChannelMask accessed = 0;     // filled by the policy step
  ChannelMask acks = 0;         // ACK iff the accessed channel was truly free
};

// Draws the true states for all N channels (ascending index), then the
// sensing outcome for each sensed channel (ascending index). The access
// and ACK fields are left empty for the policy step to fill.
SlotOutcome sample_slot(const ChannelModel& model, ChannelMask sensed_set,
                        std::int64_t slot, SplitMix64& rng);

// Probability that u is the full-sensing outcome vector. Channels are
// independent, so the joint factorizes over f(theta_i).
double joint_outcome_prob(ChannelMask u, const ChannelModel& model);

}  // namespace osa

#endif  // OSA_CHANNEL_MODEL_HPP
