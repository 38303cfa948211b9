#include "osa/channel_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace osa {

double sensed_free_prob(double theta, double p_d, double p_f) {
  return (1.0 - p_f) * theta + (1.0 - p_d) * (1.0 - theta);
}

double cond_reward(double theta, double p_d, double p_f) {
  const double f = sensed_free_prob(theta, p_d, p_f);
  if (f <= 0.0) return 0.0;
  return (1.0 - p_f) * theta / f;
}

bool ChannelModel::homogeneous_sensing() const {
  for (int i = 1; i < n(); ++i) {
    if (p_d[i] != p_d[0] || p_f[i] != p_f[0]) return false;
  }
  return true;
}

void ChannelModel::validate() const {
  const int nch = n();
  if (nch < 1) throw std::invalid_argument("model: need at least one channel");
  if (nch > 63) throw std::invalid_argument("model: at most 63 channels");
  if (static_cast<int>(p_d.size()) != nch || static_cast<int>(p_f.size()) != nch)
    throw std::invalid_argument("model: theta/p_d/p_f lengths differ");
  for (int i = 0; i < nch; ++i) {
    if (!(theta[i] > 0.0 && theta[i] <= 1.0))
      throw std::invalid_argument("model: theta[" + std::to_string(i) +
                                  "] outside (0,1]");
    if (!(p_f[i] >= 0.0 && p_f[i] < p_d[i] && p_d[i] <= 1.0))
      throw std::invalid_argument("model: need 0 <= p_f < p_d <= 1 at channel " +
                                  std::to_string(i));
  }
  if (!(reward_unit > 0.0))
    throw std::invalid_argument("model: reward_unit must be positive");
}

ChannelModel make_homogeneous_model(std::vector<double> theta, double p_d,
                                    double p_f, double reward_unit) {
  ChannelModel m;
  const std::size_t n = theta.size();
  m.theta = std::move(theta);
  m.p_d.assign(n, p_d);
  m.p_f.assign(n, p_f);
  m.reward_unit = reward_unit;
  m.validate();
  return m;
}

bool SensingParams::homogeneous() const {
  for (int i = 1; i < n(); ++i) {
    if (p_d[i] != p_d[0] || p_f[i] != p_f[0]) return false;
  }
  return true;
}

SensingParams sensing_of(const ChannelModel& model) {
  return SensingParams{model.p_d, model.p_f};
}

SlotOutcome sample_slot(const ChannelModel& model, ChannelMask sensed_set,
                        std::int64_t slot, SplitMix64& rng) {
  SlotOutcome out;
  out.slot = slot;
  out.sensed_set = sensed_set;
  const int n = model.n();
  for (int i = 0; i < n; ++i) {
    if (rng.bernoulli(model.theta[i])) out.true_states |= ChannelMask{1} << i;
  }
  for (int i = 0; i < n; ++i) {
    const ChannelMask bit = ChannelMask{1} << i;
    if (!(sensed_set & bit)) continue;
    const bool free = (out.true_states & bit) != 0;
    const double p_sensed_free = free ? 1.0 - model.p_f[i] : 1.0 - model.p_d[i];
    if (rng.bernoulli(p_sensed_free)) out.sensed_free |= bit;
  }
  return out;
}

double joint_outcome_prob(ChannelMask u, const ChannelModel& model) {
  double p = 1.0;
  for (int i = 0; i < model.n(); ++i) {
    const double f = model.sensed_free(i);
    p *= (u >> i) & 1 ? f : 1.0 - f;
  }
  return p;
}

}  // namespace osa
