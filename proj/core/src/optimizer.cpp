#include "osa/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace osa {
namespace {

constexpr int kDenseLimit = 16;  // dense 2^N enumeration up to here

double clamp_box(double x, double floor) {
  return std::min(std::max(x, floor), 1.0);
}

// Shared evaluation state for one fit: the empirical distribution is
// frozen, so the dense L vector (or the observed list) and the scratch
// buffers are built once.
//
// Dense path: P^theta is a rank-1 tensor over N binary modes, so all
// 2^N probabilities come from iterated doubling, and the gradient for
// every channel comes from one prefix sweep (A, partial products over
// low channels) plus one suffix sweep (B, the residual contracted over
// high channels), O(2^N) total instead of O(N 2^N).
class Eval {
 public:
  Eval(const OutcomeTable& table, const SensingParams& sensing)
      : n_(table.n_channels()), sensing_(sensing),
        dense_(n_ <= kDenseLimit), total_(table.total_slots()) {
    if (sensing.n() != n_)
      throw std::invalid_argument("fit: sensing/table dimension mismatch");
    if (total_ < 1) throw std::invalid_argument("fit: empty outcome table");
    if (dense_) {
      dense_l_.assign(std::size_t{1} << n_, 0.0);
      for (const auto& [u, c] : table.counts())
        dense_l_[u] = static_cast<double>(c) / static_cast<double>(total_);
      a_.resize((std::size_t{2} << n_) - 1);
      b_.resize((std::size_t{2} << n_) - 1);
    } else {
      observed_.reserve(table.counts().size());
      for (const auto& [u, c] : table.counts())
        observed_.emplace_back(u, static_cast<double>(c) /
                                      static_cast<double>(total_));
      std::sort(observed_.begin(), observed_.end());
      pre_.resize(n_ + 1);
      suf_.resize(n_ + 1);
    }
    g0_.resize(n_);
    g1_.resize(n_);
    d_.resize(n_);
  }

  int n() const { return n_; }

  double value(const std::vector<double>& theta) {
    prepare(theta);
    return dense_ ? dense_value() : sparse_value();
  }

  double value_grad(const std::vector<double>& theta,
                    std::vector<double>* grad) {
    prepare(theta);
    grad->assign(n_, 0.0);
    return dense_ ? dense_value_grad(grad) : sparse_value_grad(grad);
  }

 private:
  void prepare(const std::vector<double>& theta) {
    for (int i = 0; i < n_; ++i) {
      const double f = sensed_free_prob(theta[i], sensing_.p_d[i], sensing_.p_f[i]);
      g1_[i] = f;
      g0_[i] = 1.0 - f;
      d_[i] = sensing_.p_d[i] - sensing_.p_f[i];
    }
  }

  static std::size_t stage_offset(int k) { return (std::size_t{1} << k) - 1; }

  // A^(k), partial products over channels 0..k-1, laid out contiguously.
  void build_prefix() {
    a_[0] = 1.0;
    for (int i = 0; i < n_; ++i) {
      const double* src = a_.data() + stage_offset(i);
      double* dst = a_.data() + stage_offset(i + 1);
      const std::size_t half = std::size_t{1} << i;
      for (std::size_t w = 0; w < half; ++w) {
        dst[w] = src[w] * g0_[i];
        dst[w + half] = src[w] * g1_[i];
      }
    }
  }

  double dense_value() {
    build_prefix();
    const double* p = a_.data() + stage_offset(n_);
    const std::size_t size = std::size_t{1} << n_;
    double sq = 0.0;
    for (std::size_t u = 0; u < size; ++u) {
      const double r = p[u] - dense_l_[u];
      sq += r * r;
    }
    return sq;
  }

  double dense_value_grad(std::vector<double>* grad) {
    build_prefix();
    const double* p = a_.data() + stage_offset(n_);
    const std::size_t size = std::size_t{1} << n_;
    double sq = 0.0;
    double* w_top = b_.data() + stage_offset(n_);
    for (std::size_t u = 0; u < size; ++u) {
      const double r = p[u] - dense_l_[u];
      sq += r * r;
      w_top[u] = 2.0 * r;  // dD/dP_u
    }
    // B^(k): residual contracted over channels k..n-1.
    for (int k = n_ - 1; k >= 0; --k) {
      const double* src = b_.data() + stage_offset(k + 1);
      double* dst = b_.data() + stage_offset(k);
      const std::size_t half = std::size_t{1} << k;
      for (std::size_t w = 0; w < half; ++w) {
        dst[w] = src[w] * g0_[k] + src[w + half] * g1_[k];
      }
    }
    // grad_i = d_i * (C_i(1) - C_i(0)) with
    // C_i(b) = sum_w A^(i)[w] * B^(i+1)[w + b*2^i].
    for (int i = 0; i < n_; ++i) {
      const double* a = a_.data() + stage_offset(i);
      const double* b = b_.data() + stage_offset(i + 1);
      const std::size_t half = std::size_t{1} << i;
      double c0 = 0.0, c1 = 0.0;
      for (std::size_t w = 0; w < half; ++w) {
        c0 += a[w] * b[w];
        c1 += a[w] * b[w + half];
      }
      (*grad)[i] = d_[i] * (c1 - c0);
    }
    return sq;
  }

  // sum_u P_u^2 factorizes over channels.
  double sum_p_sq() const {
    double s = 1.0;
    for (int i = 0; i < n_; ++i) s *= g0_[i] * g0_[i] + g1_[i] * g1_[i];
    return s;
  }

  double outcome_prob(ChannelMask u) const {
    double p = 1.0;
    for (int i = 0; i < n_; ++i) p *= (u >> i) & 1 ? g1_[i] : g0_[i];
    return p;
  }

  // D = sum_u P_u^2 - sum_obs L_u (2 P_u - L_u), no 2^N materialization.
  double sparse_value() const {
    double s = sum_p_sq();
    for (const auto& [u, l] : observed_) s -= l * (2.0 * outcome_prob(u) - l);
    return s;
  }

  double sparse_value_grad(std::vector<double>* grad) {
    double sq = sum_p_sq();
    // d/dtheta_i of the factorized square-sum, via prefix/suffix products.
    pre_[0] = 1.0;
    for (int i = 0; i < n_; ++i)
      pre_[i + 1] = pre_[i] * (g0_[i] * g0_[i] + g1_[i] * g1_[i]);
    suf_[n_] = 1.0;
    for (int i = n_ - 1; i >= 0; --i)
      suf_[i] = suf_[i + 1] * (g0_[i] * g0_[i] + g1_[i] * g1_[i]);
    for (int i = 0; i < n_; ++i)
      (*grad)[i] = pre_[i] * suf_[i + 1] * 2.0 * d_[i] * (g1_[i] - g0_[i]);

    for (const auto& [u, l] : observed_) {
      pre_[0] = 1.0;
      for (int i = 0; i < n_; ++i)
        pre_[i + 1] = pre_[i] * ((u >> i) & 1 ? g1_[i] : g0_[i]);
      suf_[n_] = 1.0;
      for (int i = n_ - 1; i >= 0; --i)
        suf_[i] = suf_[i + 1] * ((u >> i) & 1 ? g1_[i] : g0_[i]);
      const double p_u = pre_[n_];
      sq -= l * (2.0 * p_u - l);
      for (int i = 0; i < n_; ++i) {
        const double dp = pre_[i] * suf_[i + 1] * ((u >> i) & 1 ? d_[i] : -d_[i]);
        (*grad)[i] -= 2.0 * l * dp;
      }
    }
    return sq;
  }

  int n_;
  SensingParams sensing_;
  bool dense_;
  std::int64_t total_;
  std::vector<double> dense_l_;
  std::vector<std::pair<ChannelMask, double>> observed_;
  std::vector<double> a_, b_;        // dense sweep stages
  std::vector<double> pre_, suf_;    // sparse per-outcome products
  std::vector<double> g0_, g1_, d_;
};

struct DescentResult {
  std::vector<double> x;
  double value_sq = 0.0;
  int iterations = 0;
};

DescentResult project_and_descend(Eval& eval, std::vector<double> x,
                                  const FitOptions& opts) {
  const int n = eval.n();
  for (double& v : x) v = clamp_box(v, opts.box_floor);

  std::vector<double> grad(n), x_new(n);
  double value = eval.value_grad(x, &grad);
  double step = 1.0;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    double pg_norm = 0.0;
    for (int i = 0; i < n; ++i)
      pg_norm = std::max(pg_norm,
                         std::abs(x[i] - clamp_box(x[i] - grad[i], opts.box_floor)));
    if (pg_norm <= opts.grad_tol) break;

    bool accepted = false;
    double s = step;
    for (int bt = 0; bt < 60 && !accepted; ++bt, s *= 0.5) {
      double pred = 0.0;
      bool moved = false;
      for (int i = 0; i < n; ++i) {
        x_new[i] = clamp_box(x[i] - s * grad[i], opts.box_floor);
        pred += grad[i] * (x_new[i] - x[i]);
        moved |= x_new[i] != x[i];
      }
      if (!moved) break;
      const double v_new = eval.value(x_new);
      if (v_new <= value + 1e-4 * pred) {
        x.swap(x_new);
        value = eval.value_grad(x, &grad);
        step = std::min(s * 2.0, 1e6);
        accepted = true;
      }
    }
    if (!accepted) break;  // no admissible step: treat as stationary
  }
  return DescentResult{std::move(x), value, it};
}

std::vector<double> quasi_random_start(int n, int index, double floor) {
  static constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                    37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
                                    83, 89, 97, 101, 103, 107, 109, 113, 127,
                                    131, 137, 139, 149, 151, 157, 163, 167, 173,
                                    179, 181, 191, 193, 197, 199, 211, 223, 227,
                                    229, 233, 239, 241, 251, 257, 263, 269, 271,
                                    277, 281, 283, 293, 307, 311};
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    const double alpha = std::sqrt(static_cast<double>(kPrimes[i % 64]));
    const double w = std::fmod(static_cast<double>(index) * alpha + 0.5, 1.0);
    x[i] = floor + (1.0 - floor) * w;
  }
  return x;
}

}  // namespace

double fit_objective(const std::vector<double>& theta, const OutcomeTable& table,
                     const SensingParams& sensing) {
  if (static_cast<int>(theta.size()) != table.n_channels())
    throw std::invalid_argument("fit_objective: theta dimension mismatch");
  Eval eval(table, sensing);
  return std::sqrt(std::max(eval.value(theta), 0.0));
}

double fit_objective_sq_grad(const std::vector<double>& theta,
                             const OutcomeTable& table,
                             const SensingParams& sensing,
                             std::vector<double>* grad) {
  if (static_cast<int>(theta.size()) != table.n_channels())
    throw std::invalid_argument("fit_objective_sq_grad: theta dimension mismatch");
  Eval eval(table, sensing);
  return eval.value_grad(theta, grad);
}

std::vector<double> moment_theta_estimate(const OutcomeTable& table,
                                          const SensingParams& sensing,
                                          double floor) {
  std::vector<double> theta(table.n_channels());
  for (int i = 0; i < table.n_channels(); ++i) {
    const double r = table.marginal_rate(i);
    const double raw = (r + sensing.p_d[i] - 1.0) / (sensing.p_d[i] - sensing.p_f[i]);
    theta[i] = clamp_box(raw, floor);
  }
  return theta;
}

FitResult fit_theta(const OutcomeTable& table, const SensingParams& sensing,
                    std::int64_t t, const FitOptions& opts,
                    const std::vector<std::vector<double>>& extra_starts) {
  if (t < 1) throw std::invalid_argument("fit_theta: t must be >= 1");
  if (opts.starts < 1 && extra_starts.empty())
    throw std::invalid_argument("fit_theta: no starts configured");
  Eval eval(table, sensing);
  const int n = eval.n();

  FitResult best;
  int total_iters = 0;
  bool have = false;
  auto try_start = [&](std::vector<double> start) {
    DescentResult r = project_and_descend(eval, std::move(start), opts);
    total_iters += r.iterations;
    if (!have || r.value_sq < best.best_objective_found) {
      best.theta_hat = std::move(r.x);
      best.best_objective_found = r.value_sq;
      have = true;
    }
  };

  if (opts.starts >= 1)
    try_start(moment_theta_estimate(table, sensing, opts.box_floor));
  for (int s = 1; s < opts.starts; ++s)
    try_start(quasi_random_start(n, s, opts.box_floor));
  for (const auto& x : extra_starts) {
    if (static_cast<int>(x.size()) != n)
      throw std::invalid_argument("fit_theta: extra start dimension mismatch");
    try_start(x);
  }

  best.best_objective_found = std::sqrt(std::max(best.best_objective_found, 0.0));
  best.objective = best.best_objective_found;
  best.in_candidate_set =
      best.objective <= best.best_objective_found + 1.0 / static_cast<double>(t);
  best.iterations = total_iters;
  return best;
}

}  // namespace osa
