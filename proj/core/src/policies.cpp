#include "osa/policies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "osa/combinatorics.hpp"

namespace osa {
namespace {

double guarded_log_bonus(std::int64_t slot, std::int64_t count) {
  const double ln_prev = std::log(static_cast<double>(std::max<std::int64_t>(slot - 1, 1)));
  return std::sqrt(2.0 * ln_prev / static_cast<double>(count));
}

// Argmax over the set bits of `candidates`, ties to the lower index.
template <typename Score>
int argmax_bit(ChannelMask candidates, Score&& score) {
  int best = -1;
  double best_score = 0.0;
  for (ChannelMask m = candidates; m;) {
    const int i = std::countr_zero(m);
    m &= m - 1;
    const double s = score(i);
    if (best < 0 || s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

// Top-min(k, |candidates|) set bits by score, ties to the lower index.
template <typename Score>
ChannelMask top_k_bits(ChannelMask candidates, int k, Score&& score) {
  const int count = mask_size(candidates);
  if (count <= k) return candidates;
  if (k == 1) {
    const int i = argmax_bit(candidates, score);
    return i < 0 ? 0 : ChannelMask{1} << i;
  }
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(count);
  for (ChannelMask m = candidates; m;) {
    const int i = std::countr_zero(m);
    m &= m - 1;
    ranked.emplace_back(score(i), i);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  ChannelMask out = 0;
  for (int j = 0; j < k; ++j) out |= ChannelMask{1} << ranked[j].second;
  return out;
}

}  // namespace

Alg2Estimate alg2_estimate(const std::vector<double>& sensed_free_rate,
                           const SensingParams& sensing) {
  const int n = sensing.n();
  if (static_cast<int>(sensed_free_rate.size()) != n)
    throw std::invalid_argument("alg2_estimate: rate dimension mismatch");
  Alg2Estimate e;
  e.raw.resize(n);
  e.clamped.resize(n);
  for (int i = 0; i < n; ++i) {
    e.raw[i] = (sensed_free_rate[i] + sensing.p_d[i] - 1.0) /
               (sensing.p_d[i] - sensing.p_f[i]);
    e.clamped[i] = std::min(std::max(e.raw[i], 0.0), 1.0);
  }
  return e;
}

ChannelMask choose_access_by_cond(const std::vector<double>& theta_hat,
                                  const SensingParams& sensing,
                                  ChannelMask sensed_free, int k) {
  if (sensed_free == 0 || k < 1) return 0;
  return top_k_bits(sensed_free, k,
                    [&](int i) { return sensing.cond(i, theta_hat[i]); });
}

double alg3_index(std::int64_t y, std::int64_t t_count, std::int64_t slot,
                  double p_d, double p_f) {
  const double inv_d = 1.0 / (p_d - p_f);
  const double theta_hat =
      (static_cast<double>(y) / static_cast<double>(t_count) + p_d - 1.0) * inv_d;
  return theta_hat + inv_d * guarded_log_bonus(slot, t_count);
}

double alg4_set_index(std::int64_t y, std::int64_t t_set, std::int64_t slot) {
  return static_cast<double>(y) / static_cast<double>(t_set) +
         guarded_log_bonus(slot, t_set);
}

// --- Alg1 ------------------------------------------------------------

Alg1Policy::Alg1Policy(SensingParams sensing, int k, FitOptions fit_options,
                       bool warm_start)
    : sensing_(std::move(sensing)), k_(k), fit_options_(fit_options),
      warm_start_(warm_start), table_(sensing_.n()) {
  if (k_ < 1 || k_ > sensing_.n())
    throw std::invalid_argument("alg1: need 1 <= k <= N");
}

ChannelMask Alg1Policy::select_sense_set(std::int64_t) {
  return full_mask(sensing_.n());
}

void Alg1Policy::observe_sensing(std::int64_t, ChannelMask sensed_free) {
  table_.record(sensed_free);
}

ChannelMask Alg1Policy::select_access_set(std::int64_t t,
                                          ChannelMask sensed_free,
                                          SplitMix64&) {
  if (sensed_free == 0) return 0;
  std::vector<std::vector<double>> extra;
  if (warm_start_ && !last_theta_.empty()) extra.push_back(last_theta_);
  FitResult fit = fit_theta(table_, sensing_, t, fit_options_, extra);
  last_theta_ = fit.theta_hat;
  return choose_access_by_cond(fit.theta_hat, sensing_, sensed_free, k_);
}

// --- Alg2 ------------------------------------------------------------

Alg2Policy::Alg2Policy(SensingParams sensing, int k)
    : sensing_(std::move(sensing)), k_(k), x_sum_(sensing_.n(), 0) {
  if (k_ < 1 || k_ > sensing_.n())
    throw std::invalid_argument("alg2: need 1 <= k <= N");
}

ChannelMask Alg2Policy::select_sense_set(std::int64_t) {
  return full_mask(sensing_.n());
}

void Alg2Policy::observe_sensing(std::int64_t t, ChannelMask sensed_free) {
  t_ = t;
  for (ChannelMask m = sensed_free; m;) {
    ++x_sum_[std::countr_zero(m)];
    m &= m - 1;
  }
}

Alg2Estimate Alg2Policy::estimate() const {
  std::vector<double> rate(sensing_.n());
  for (int i = 0; i < sensing_.n(); ++i)
    rate[i] = t_ == 0 ? 0.0
                      : static_cast<double>(x_sum_[i]) / static_cast<double>(t_);
  return alg2_estimate(rate, sensing_);
}

ChannelMask Alg2Policy::select_access_set(std::int64_t t,
                                          ChannelMask sensed_free, SplitMix64&) {
  if (sensed_free == 0) return 0;
  const double inv_t = 1.0 / static_cast<double>(t);
  return top_k_bits(sensed_free, k_, [&](int i) {
    const double raw = (static_cast<double>(x_sum_[i]) * inv_t + sensing_.p_d[i] -
                        1.0) /
                       (sensing_.p_d[i] - sensing_.p_f[i]);
    return sensing_.cond(i, std::min(std::max(raw, 0.0), 1.0));
  });
}

// --- Alg3 ------------------------------------------------------------

Alg3Policy::Alg3Policy(SensingParams sensing, int m, int k)
    : sensing_(std::move(sensing)), n_(sensing_.n()), m_(m), k_(k) {
  if (!(1 <= k_ && k_ <= m_ && m_ <= n_))
    throw std::invalid_argument("alg3: need 1 <= k <= m <= N");
  if (!sensing_.homogeneous())
    throw std::invalid_argument("alg3: requires homogeneous sensing");
  p_d_ = sensing_.p_d[0];
  p_f_ = sensing_.p_f[0];
  init_slots_ = (n_ + m_ - 1) / m_;
  init_blocks_.resize(init_slots_);
  for (std::int64_t b = 0; b < init_slots_; ++b) {
    ChannelMask block = 0;
    for (int i = static_cast<int>(b) * m_;
         i < std::min((static_cast<int>(b) + 1) * m_, n_); ++i)
      block |= ChannelMask{1} << i;
    // Pad a short final block back to width M with the lowest channels.
    for (int i = 0; mask_size(block) < m_; ++i) {
      block |= ChannelMask{1} << i;
    }
    init_blocks_[b] = block;
  }
  stats_.t_count.assign(n_, 0);
  stats_.y_count.assign(n_, 0);
  cached_index_.assign(n_, 0.0);
}

ChannelMask Alg3Policy::select_sense_set(std::int64_t t) {
  if (in_init(t)) {
    current_sense_ = init_blocks_[t - 1];
    return current_sense_;
  }
  for (int i = 0; i < n_; ++i)
    cached_index_[i] =
        alg3_index(stats_.y_count[i], stats_.t_count[i], t, p_d_, p_f_);
  current_sense_ =
      top_k_bits(full_mask(n_), m_, [&](int i) { return cached_index_[i]; });
  return current_sense_;
}

void Alg3Policy::observe_sensing(std::int64_t, ChannelMask sensed_free) {
  for (ChannelMask m = current_sense_; m;) {
    const int i = std::countr_zero(m);
    m &= m - 1;
    ++stats_.t_count[i];
    if ((sensed_free >> i) & 1) ++stats_.y_count[i];
  }
}

ChannelMask Alg3Policy::select_access_set(std::int64_t t,
                                          ChannelMask sensed_free,
                                          SplitMix64& rng) {
  if (sensed_free == 0) return 0;
  if (in_init(t)) {
    const int count = mask_size(sensed_free);
    std::uint64_t pick = rng.next_index(static_cast<std::uint64_t>(count));
    ChannelMask m = sensed_free;
    while (pick--) m &= m - 1;
    return ChannelMask{1} << std::countr_zero(m);
  }
  return top_k_bits(sensed_free, k_, [&](int i) { return cached_index_[i]; });
}

// --- Alg4 ------------------------------------------------------------

Alg4Policy::Alg4Policy(SensingParams sensing, int m, int k,
                       std::int64_t sweep_cap_slots)
    : sensing_(std::move(sensing)), n_(sensing_.n()), m_(m), k_(k),
      sweep_cap_slots_(sweep_cap_slots) {
  if (!(1 <= k_ && k_ <= m_ && m_ <= n_))
    throw std::invalid_argument("alg4: need 1 <= k <= m <= N");
  stats_.sets = subsets_of_size(n_, m_);
  const std::size_t c = stats_.sets.size();
  stats_.members.resize(c);
  for (std::size_t i = 0; i < c; ++i) stats_.members[i] = mask_members(stats_.sets[i]);
  stats_.t_set.assign(c, 0);
  stats_.y_set.assign(c, 0);
  stats_.t_pair.assign(c, std::vector<std::int64_t>(m_, 0));
  stats_.y_pair.assign(c, std::vector<std::int64_t>(m_, 0));
}

ChannelMask Alg4Policy::select_sense_set(std::int64_t t) {
  if (in_init_sweep()) {
    current_set_ = sweep_pos_;
    return stats_.sets[current_set_];
  }
  std::size_t best = 0;
  double best_index = alg4_set_index(stats_.y_set[0], stats_.t_set[0], t);
  for (std::size_t i = 1; i < sets_count(); ++i) {
    const double idx = alg4_set_index(stats_.y_set[i], stats_.t_set[i], t);
    if (idx > best_index) {
      best = i;
      best_index = idx;
    }
  }
  current_set_ = best;
  return stats_.sets[best];
}

ChannelMask Alg4Policy::select_access_set(std::int64_t t,
                                          ChannelMask sensed_free, SplitMix64&) {
  if (sensed_free == 0) return 0;
  const auto& members = stats_.members[current_set_];
  if (in_init_sweep()) {
    // Lowest-index sensed-free member not yet accessed under this set.
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (stats_.t_pair[current_set_][j] == 0 &&
          ((sensed_free >> members[j]) & 1))
        return ChannelMask{1} << members[j];
    }
    return 0;
  }
  ChannelMask candidates = 0;
  for (int ch : members)
    if ((sensed_free >> ch) & 1) candidates |= ChannelMask{1} << ch;
  std::vector<double> index_of(n_, 0.0);
  for (std::size_t j = 0; j < members.size(); ++j) {
    if ((candidates >> members[j]) & 1)
      index_of[members[j]] = alg4_set_index(stats_.y_pair[current_set_][j],
                                            stats_.t_pair[current_set_][j], t);
  }
  return top_k_bits(candidates, k_, [&](int i) { return index_of[i]; });
}

void Alg4Policy::observe_acks(std::int64_t t, ChannelMask accessed,
                              ChannelMask acks) {
  const std::size_t i = current_set_;
  ++stats_.t_set[i];
  stats_.y_set[i] += mask_size(acks);
  const auto& members = stats_.members[i];
  for (std::size_t j = 0; j < members.size(); ++j) {
    const ChannelMask bit = ChannelMask{1} << members[j];
    if (accessed & bit) {
      ++stats_.t_pair[i][j];
      if (acks & bit) ++stats_.y_pair[i][j];
    }
  }
  if (in_init_sweep()) {
    ++sweep_slots_used_;
    bool complete = true;
    for (std::size_t j = 0; j < members.size(); ++j)
      complete &= stats_.t_pair[i][j] >= 1;
    if (complete) ++sweep_pos_;
    if (in_init_sweep() && sweep_cap_slots_ > 0 && t >= sweep_cap_slots_)
      throw SweepAbort("alg4: init sweep still incomplete at slot " +
                       std::to_string(t) + " (cap " +
                       std::to_string(sweep_cap_slots_) +
                       "); some channel may be nearly never sensed free");
  }
}

// --- Genie reference ---------------------------------------------------

GenieReferencePolicy::GenieReferencePolicy(GenieValue genie, int n_channels)
    : genie_(std::move(genie)), local_bit_(n_channels, -1) {
  const std::vector<int> members = mask_members(genie_.sense_set);
  for (std::size_t j = 0; j < members.size(); ++j)
    local_bit_[members[j]] = static_cast<int>(j);
}

ChannelMask GenieReferencePolicy::select_access_set(std::int64_t,
                                                    ChannelMask sensed_free,
                                                    SplitMix64&) {
  std::size_t pattern = 0;
  for (ChannelMask m = sensed_free & genie_.sense_set; m;) {
    const int ch = std::countr_zero(m);
    m &= m - 1;
    pattern |= std::size_t{1} << local_bit_[ch];
  }
  return genie_.access_by_outcome[pattern];
}

}  // namespace osa
