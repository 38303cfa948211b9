#ifndef OSA_OPTIMIZER_HPP
#define OSA_OPTIMIZER_HPP

#include <cstdint>
#include <vector>

#include "osa/channel_model.hpp"
#include "osa/outcome_table.hpp"

namespace osa {

// Hyperparameters of the theta-fit local search. Start 0 is always the
// clamped per-channel moment estimate; starts 1..starts-1 are
// quasi-random points in (0,1]^N.
struct FitOptions {
  int starts = 8;
  int max_iters = 500;
  double grad_tol = 1e-9;
  double box_floor = 1e-6;
};

struct FitResult {
  std::vector<double> theta_hat;      // in [box_floor, 1]^N
  double objective = 0.0;             // euclidean distance at theta_hat
  double best_objective_found = 0.0;  // minimum over all starts
  bool in_candidate_set = false;      // objective <= best + 1/t
  int iterations = 0;                 // total descent iterations spent
};

// Euclidean distance between the factorized outcome distribution P^theta
// and the empirical table L over all 2^N outcome vectors.
double fit_objective(const std::vector<double>& theta, const OutcomeTable& table,
                     const SensingParams& sensing);

// Squared distance and its analytic gradient. The gradient uses
// dP_u/dtheta_i = (prod_{j!=i} g_j) * (+-(p_d_i - p_f_i)), assembled
// without divisions so box corners (f = 0 or 1) stay finite. Dense
// enumeration for N <= 16; factorized complement terms above that.
double fit_objective_sq_grad(const std::vector<double>& theta,
                             const OutcomeTable& table,
                             const SensingParams& sensing,
                             std::vector<double>* grad);

// Moment estimate from the table marginals, clamped into [floor, 1].
std::vector<double> moment_theta_estimate(const OutcomeTable& table,
                                          const SensingParams& sensing,
                                          double floor);

// Multi-start projected-gradient fit of theta to the empirical table.
// extra_starts (e.g. the previous slot's solution, for warm starting)
// are appended after the canonical starts. Exhausting the iteration
// budget is not an error: the best iterate is returned, and it is a
// member of the candidate set relative to its own best objective.
FitResult fit_theta(const OutcomeTable& table, const SensingParams& sensing,
                    std::int64_t t, const FitOptions& opts = {},
                    const std::vector<std::vector<double>>& extra_starts = {});

}  // namespace osa

#endif  // OSA_OPTIMIZER_HPP
