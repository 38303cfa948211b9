#include "osa/genie.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "osa/combinatorics.hpp"
#include "osa/rng.hpp"

namespace osa {
namespace {

// Members of the sensing set ordered by decreasing cond_reward, ties by
// lower channel index. Picking the first k sensed-free members of this
// list is the genie's access rule for every pattern.
std::vector<int> preference_order(const ChannelModel& model,
                                  const std::vector<int>& members) {
  std::vector<int> order = members;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return model.cond(a) > model.cond(b);
  });
  return order;
}

// Conditional expected reward (reward units) of accessing `access`,
// summed in ascending channel order so it matches
// slot_expected_reward bit for bit.
double access_value(const ChannelModel& model, ChannelMask access) {
  double v = 0.0;
  for (ChannelMask m = access; m;) {
    const int i = std::countr_zero(m);
    v += model.cond(i);
    m &= m - 1;
  }
  return v * model.reward_unit;
}

}  // namespace

GenieValue genie_set_value(const ChannelModel& model, ChannelMask sense_set,
                           int k) {
  model.validate();
  const std::vector<int> members = mask_members(sense_set);
  const int m = static_cast<int>(members.size());
  if (m < 1 || m > model.n())
    throw std::invalid_argument("genie: empty or oversized sensing set");
  if (k < 1) throw std::invalid_argument("genie: k must be positive");

  const std::vector<int> order = preference_order(model, members);

  GenieValue g;
  g.sense_set = sense_set;
  const std::size_t patterns = std::size_t{1} << m;
  g.access_by_outcome.resize(patterns);
  g.outcome_value.resize(patterns);

  // f probabilities per local member position.
  std::vector<double> f(m);
  for (int j = 0; j < m; ++j) f[j] = model.sensed_free(members[j]);
  // Local bit position of each channel in the pattern.
  std::vector<int> local_bit(model.n(), -1);
  for (int j = 0; j < m; ++j) local_bit[members[j]] = j;

  double total = 0.0;
  for (std::size_t p = 0; p < patterns; ++p) {
    ChannelMask access = 0;
    int taken = 0;
    for (int ch : order) {
      if (taken == k) break;
      if ((p >> local_bit[ch]) & 1) {
        access |= ChannelMask{1} << ch;
        ++taken;
      }
    }
    double prob = 1.0;
    for (int j = 0; j < m; ++j) prob *= (p >> j) & 1 ? f[j] : 1.0 - f[j];
    const double value = access_value(model, access);
    g.access_by_outcome[p] = access;
    g.outcome_value[p] = value;
    total += prob * value;
  }
  g.per_slot_value = total;
  return g;
}

GenieValue genie_value_full(const ChannelModel& model, int k, int enum_cap) {
  model.validate();
  if (model.n() > enum_cap)
    throw EnumerationCapError("genie_value_full: N = " +
                              std::to_string(model.n()) +
                              " exceeds enumeration cap " +
                              std::to_string(enum_cap));
  if (k < 1 || k > model.n())
    throw std::invalid_argument("genie_value_full: need 1 <= k <= N");
  return genie_set_value(model, full_mask(model.n()), k);
}

GenieValue genie_best_set_partial(const ChannelModel& model, int m, int k,
                                  std::uint64_t enum_budget) {
  model.validate();
  const int n = model.n();
  if (!(1 <= k && k <= m && m <= n))
    throw std::invalid_argument("genie_best_set_partial: need 1 <= k <= m <= N");
  const std::uint64_t cost = binomial(n, m) << m;
  if (cost > enum_budget)
    throw EnumerationCapError(
        "genie_best_set_partial: C(N,M)*2^M = " + std::to_string(cost) +
        " exceeds enumeration budget " + std::to_string(enum_budget));

  GenieValue best;
  bool have = false;
  for (ChannelMask set : subsets_of_size(n, m)) {
    GenieValue g = genie_set_value(model, set, k);
    if (!have || g.per_slot_value > best.per_slot_value) {
      best = std::move(g);
      have = true;
    }
  }
  return best;
}

MonteCarloEstimate genie_value_monte_carlo(const ChannelModel& model,
                                           ChannelMask sense_set, int k,
                                           std::int64_t samples,
                                           std::uint64_t seed) {
  model.validate();
  const std::vector<int> members = mask_members(sense_set);
  const std::vector<int> order = preference_order(model, members);
  std::vector<double> f(members.size());
  for (std::size_t j = 0; j < members.size(); ++j)
    f[j] = model.sensed_free(members[j]);

  SplitMix64 rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    ChannelMask sensed_free = 0;
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (rng.bernoulli(f[j])) sensed_free |= ChannelMask{1} << members[j];
    }
    ChannelMask access = 0;
    int taken = 0;
    for (int ch : order) {
      if (taken == k) break;
      if ((sensed_free >> ch) & 1) {
        access |= ChannelMask{1} << ch;
        ++taken;
      }
    }
    const double v = access_value(model, access);
    sum += v;
    sum_sq += v * v;
  }
  MonteCarloEstimate est;
  est.samples = samples;
  est.mean = sum / static_cast<double>(samples);
  const double var =
      (sum_sq - sum * sum / static_cast<double>(samples)) /
      static_cast<double>(samples - 1);
  est.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
  return est;
}

}  // namespace osa
