#ifndef OSA_OUTCOME_TABLE_HPP
#define OSA_OUTCOME_TABLE_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "osa/channel_model.hpp"

namespace osa {

// Empirical distribution of full-sensing outcome vectors: sparse counts
// over the observed u only, plus per-channel marginals for the moment
// estimate. L_u = counts[u] / total_slots.
class OutcomeTable {
 public:
  explicit OutcomeTable(int n_channels)
      : n_channels_(n_channels), marginal_(n_channels, 0) {}

  void record(ChannelMask u) {
    ++counts_[u];
    ++total_slots_;
    for (ChannelMask m = u; m;) {
      ++marginal_[std::countr_zero(m)];
      m &= m - 1;
    }
  }

  int n_channels() const { return n_channels_; }
  std::int64_t total_slots() const { return total_slots_; }
  const std::unordered_map<ChannelMask, std::int64_t>& counts() const {
    return counts_;
  }

  double rate(ChannelMask u) const {
    auto it = counts_.find(u);
    if (it == counts_.end() || total_slots_ == 0) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(total_slots_);
  }

  // Per-channel sensed-free rate (1/t) sum X_i(j).
  double marginal_rate(int i) const {
    return total_slots_ == 0
               ? 0.0
               : static_cast<double>(marginal_[i]) /
                     static_cast<double>(total_slots_);
  }

 private:
  int n_channels_;
  std::unordered_map<ChannelMask, std::int64_t> counts_;
  std::vector<std::int64_t> marginal_;
  std::int64_t total_slots_ = 0;
};

}  // namespace osa

#endif  // OSA_OUTCOME_TABLE_HPP
