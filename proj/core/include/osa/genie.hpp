#ifndef OSA_GENIE_HPP
#define OSA_GENIE_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "osa/channel_model.hpp"

namespace osa {

struct EnumerationCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact value of the genie-aided rule for one sensing set.
//
// access_by_outcome is indexed by the local sensing pattern over the
// members of sense_set in ascending channel order (bit j of the pattern
// is the j-th lowest member); each entry is the global channel mask the
// genie accesses for that pattern. outcome_value holds the matching
// conditional expected reward in reward units.
struct GenieValue {
  double per_slot_value = 0.0;  // expected reward per slot, reward units
  ChannelMask sense_set = 0;
  std::vector<ChannelMask> access_by_outcome;
  std::vector<double> outcome_value;
};

// Genie value of a fixed sensing set: enumerates the 2^|set| sensing
// patterns and, for each, sums the largest min(k, #sensed-free)
// conditional rewards. Ties in cond_reward break toward the lower
// channel index.
GenieValue genie_set_value(const ChannelModel& model, ChannelMask sense_set,
                           int k);

// Full-sensing genie (Case I). Throws EnumerationCapError when
// N > enum_cap; callers may fall back to genie_value_monte_carlo.
GenieValue genie_value_full(const ChannelModel& model, int k,
                            int enum_cap = 20);

// Partial-sensing genie (Case II): evaluates every size-m subset and
// returns the maximizer; ties break toward the lexicographically
// smallest subset. Throws EnumerationCapError when C(N,m) * 2^m
// exceeds enum_budget.
GenieValue genie_best_set_partial(const ChannelModel& model, int m, int k,
                                  std::uint64_t enum_budget = 1ull << 26);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Monte-Carlo estimate of genie_set_value(...).per_slot_value, for
// models above the enumeration cap (and for cross-checks).
MonteCarloEstimate genie_value_monte_carlo(const ChannelModel& model,
                                           ChannelMask sense_set, int k,
                                           std::int64_t samples,
                                           std::uint64_t seed);

}  // namespace osa

#endif  // OSA_GENIE_HPP
