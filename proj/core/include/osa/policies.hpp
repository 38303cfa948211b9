#ifndef OSA_POLICIES_HPP
#define OSA_POLICIES_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "osa/channel_model.hpp"
#include "osa/genie.hpp"
#include "osa/optimizer.hpp"
#include "osa/outcome_table.hpp"
#include "osa/rng.hpp"

namespace osa {

struct PolicyDecision {
  ChannelMask sense_set = 0;
  ChannelMask access_set = 0;  // subset of the sensed-free channels, <= K
};

// One learning rule instance, owned by a single run. The per-slot
// protocol is: select_sense_set, (simulator senses), observe_sensing,
// select_access_set, (simulator resolves ACKs), observe_acks. A policy
// never sees theta, only its own observations and the sensor quality.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual ChannelMask select_sense_set(std::int64_t t) = 0;
  virtual void observe_sensing(std::int64_t t, ChannelMask sensed_free) = 0;
  virtual ChannelMask select_access_set(std::int64_t t, ChannelMask sensed_free,
                                        SplitMix64& rng) = 0;
  virtual void observe_acks(std::int64_t t, ChannelMask accessed,
                            ChannelMask acks) = 0;
  virtual const char* name() const = 0;
};

// --- Index and estimator primitives ------------------------------------

struct Alg2Estimate {
  std::vector<double> raw;      // may leave [0,1] at small t
  std::vector<double> clamped;  // used for cond_reward ranking
};

// Inverts the sensed-free rate through f: (r + p_d - 1) / (p_d - p_f).
Alg2Estimate alg2_estimate(const std::vector<double>& sensed_free_rate,
                           const SensingParams& sensing);

// Top-min(k, |sensed free|) channels by cond_reward(theta_hat_i), ties
// to the lower channel index. Shared by the candidate-set rule and the
// sample-mean rule, which differ only in how theta_hat is produced.
ChannelMask choose_access_by_cond(const std::vector<double>& theta_hat,
                                  const SensingParams& sensing,
                                  ChannelMask sensed_free, int k);

inline ChannelMask alg2_choose_access(const std::vector<double>& theta_hat,
                                      const SensingParams& sensing,
                                      ChannelMask sensed_free, int k) {
  return choose_access_by_cond(theta_hat, sensing, sensed_free, k);
}
inline ChannelMask alg1_choose_access(const std::vector<double>& theta_hat,
                                      const SensingParams& sensing,
                                      ChannelMask sensed_free, int k) {
  return choose_access_by_cond(theta_hat, sensing, sensed_free, k);
}

// Per-channel UCB index of the homogeneous partial-sensing rule:
//   theta_hat + (1/(p_d-p_f)) sqrt(2 ln(t-1) / t_count),
// theta_hat = (y/t_count + p_d - 1)/(p_d - p_f), left unclamped.
// ln(max(t-1,1)) guards the first post-init slot.
double alg3_index(std::int64_t y, std::int64_t t_count, std::int64_t slot,
                  double p_d, double p_f);

// Sample-mean-plus-bonus index at the sensing-set (and set-member)
// level: y/t + sqrt(2 ln(t-1) / t).
double alg4_set_index(std::int64_t y, std::int64_t t_set, std::int64_t slot);

// --- Statistics containers ----------------------------------------------

struct ChannelStats {
  std::vector<std::int64_t> t_count;  // slots the channel was sensed
  std::vector<std::int64_t> y_count;  // slots it was sensed free
};

struct SetStats {
  std::vector<ChannelMask> sets;               // lexicographic C(N,M) sets
  std::vector<std::vector<int>> members;       // ascending channels per set
  std::vector<std::int64_t> t_set, y_set;      // per set: slots sensed, ACKs
  std::vector<std::vector<std::int64_t>> t_pair, y_pair;  // per (set, member)
};

// --- The four rules ------------------------------------------------------

// Candidate-set rule (Case I): full sensing, empirical outcome table,
// per-slot theta fit, access by estimated conditional reward.
class Alg1Policy : public Policy {
 public:
  Alg1Policy(SensingParams sensing, int k, FitOptions fit_options = {},
             bool warm_start = true);

  ChannelMask select_sense_set(std::int64_t t) override;
  void observe_sensing(std::int64_t t, ChannelMask sensed_free) override;
  ChannelMask select_access_set(std::int64_t t, ChannelMask sensed_free,
                                SplitMix64& rng) override;
  void observe_acks(std::int64_t, ChannelMask, ChannelMask) override {}
  const char* name() const override { return "alg1"; }

  const OutcomeTable& table() const { return table_; }
  const std::vector<double>& last_theta_hat() const { return last_theta_; }

 private:
  SensingParams sensing_;
  int k_;
  FitOptions fit_options_;
  bool warm_start_;
  OutcomeTable table_;
  std::vector<double> last_theta_;
};

// Sample-mean rule (Case I): full sensing, moment estimate of theta,
// access by estimated conditional reward. Linear per-slot cost.
class Alg2Policy : public Policy {
 public:
  Alg2Policy(SensingParams sensing, int k);

  ChannelMask select_sense_set(std::int64_t t) override;
  void observe_sensing(std::int64_t t, ChannelMask sensed_free) override;
  ChannelMask select_access_set(std::int64_t t, ChannelMask sensed_free,
                                SplitMix64& rng) override;
  void observe_acks(std::int64_t, ChannelMask, ChannelMask) override {}
  const char* name() const override { return "alg2"; }

  Alg2Estimate estimate() const;

 private:
  SensingParams sensing_;
  int k_;
  std::int64_t t_ = 0;
  std::vector<std::int64_t> x_sum_;
};

// Homogeneous-sensing UCB rule (Case II): senses the M highest-index
// channels, accesses the sensed-free channels with the largest indices.
// Initialization sweeps all N channels in ceil(N/M) fixed blocks; a
// short final block is padded with the lowest-index channels. Init
// slots access one uniformly random sensed-free channel.
class Alg3Policy : public Policy {
 public:
  Alg3Policy(SensingParams sensing, int m, int k);

  ChannelMask select_sense_set(std::int64_t t) override;
  void observe_sensing(std::int64_t t, ChannelMask sensed_free) override;
  ChannelMask select_access_set(std::int64_t t, ChannelMask sensed_free,
                                SplitMix64& rng) override;
  void observe_acks(std::int64_t, ChannelMask, ChannelMask) override {}
  const char* name() const override { return "alg3"; }

  std::int64_t init_slots() const { return init_slots_; }
  const ChannelStats& stats() const { return stats_; }

 private:
  bool in_init(std::int64_t t) const { return t <= init_slots_; }

  SensingParams sensing_;
  int n_, m_, k_;
  double p_d_, p_f_;
  std::int64_t init_slots_;
  std::vector<ChannelMask> init_blocks_;
  ChannelStats stats_;
  ChannelMask current_sense_ = 0;
  std::vector<double> cached_index_;
};

struct SweepAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Heterogeneous-sensing bi-level UCB rule (Case II) over the C(N,M)
// sensing sets in lexicographic order. The init sweep keeps sensing one
// set, each slot accessing the lowest-index sensed-free member not yet
// accessed under that set, until every member has been accessed once.
// Rewards are ACK bits. sweep_cap_slots > 0 aborts a stalled sweep with
// a diagnostic; 0 disables the cap.
class Alg4Policy : public Policy {
 public:
  Alg4Policy(SensingParams sensing, int m, int k,
             std::int64_t sweep_cap_slots = 0);

  ChannelMask select_sense_set(std::int64_t t) override;
  void observe_sensing(std::int64_t, ChannelMask) override {}
  ChannelMask select_access_set(std::int64_t t, ChannelMask sensed_free,
                                SplitMix64& rng) override;
  void observe_acks(std::int64_t t, ChannelMask accessed,
                    ChannelMask acks) override;
  const char* name() const override { return "alg4"; }

  bool in_init_sweep() const { return sweep_pos_ < sets_count(); }
  std::int64_t sweep_slots_used() const { return sweep_slots_used_; }
  const SetStats& stats() const { return stats_; }

 private:
  std::size_t sets_count() const { return stats_.sets.size(); }

  SensingParams sensing_;
  int n_, m_, k_;
  std::int64_t sweep_cap_slots_;
  std::int64_t sweep_slots_used_ = 0;
  SetStats stats_;
  std::size_t sweep_pos_ = 0;
  std::size_t current_set_ = 0;
};

// Benchmark policy fed the true model through a precomputed genie
// table; used for regret self-tests and diagnostics.
class GenieReferencePolicy : public Policy {
 public:
  GenieReferencePolicy(GenieValue genie, int n_channels);

  ChannelMask select_sense_set(std::int64_t) override { return genie_.sense_set; }
  void observe_sensing(std::int64_t, ChannelMask) override {}
  ChannelMask select_access_set(std::int64_t, ChannelMask sensed_free,
                                SplitMix64&) override;
  void observe_acks(std::int64_t, ChannelMask, ChannelMask) override {}
  const char* name() const override { return "genie"; }

 private:
  GenieValue genie_;
  std::vector<int> local_bit_;
};

}  // namespace osa

#endif  // OSA_POLICIES_HPP
