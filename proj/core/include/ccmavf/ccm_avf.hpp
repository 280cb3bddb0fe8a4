// SPDX-License-Identifier: Apache-2.0

#ifndef CCMAVF_CCM_AVF_HPP
#define CCMAVF_CCM_AVF_HPP

#include <cstddef>
#include <functional>

#include "ccmavf/array_model.hpp"
#include "ccmavf/linalg.hpp"
#include "ccmavf/stats_estimators.hpp"

namespace ccmavf {

struct AvfConfig {
  double mu0 = 0.01;            // scalar factor that seeds g_1
  int max_iterations = 3;       // K
  double exit_tolerance = 1e-8; // stop once ||g_k|| <= tol * ||p_tilde_y||
  double modulus_target = 1.0;  // nu
  // Recompute the newest snapshot's moment contribution with each w_k.
  bool refresh_estimates = true;
  // Scale every g_k to unit norm. The weight update is invariant to this;
  // mu_last still reports the factor of the unnormalized vector.
  bool normalize_auxiliary = false;

  void validate() const;
};

struct AvfState {
  CVector w_current;
  CVector g_last;
  Complex mu_last{0.0, 0.0};
  int iterations_run = 0;
  bool exited_early = false;
  // Steps whose scalar factor came out exactly zero (no-op updates).
  int zero_mu_steps = 0;
};

// Snapshot of one inner iteration, handed to an observer before the
// estimates are refreshed with the new weights.
struct AvfIterate {
  int k;
  const CVector& g;
  Complex mu;
  const CVector& w_prev;
  const CVector& w;
  const MomentEstimates& estimates;
};

using AvfObserver = std::function<void(const AvfIterate&)>;

// w_0 = a0 / ||a0||^2, the constrained reference filter.
CVector initialize_weights(const SteeringVector& a0);

// Component of v orthogonal to a0: v - (a0^H v / ||a0||^2) a0.
CVector project_off_steering(const CVector& v, const SteeringVector& a0);

// g = mu_prev^* (p_tilde_y - (a0^H p_tilde_y / ||a0||^2) a0).
CVector auxiliary_vector(Complex mu_prev, const CVector& p_tilde_y, const SteeringVector& a0);

// Exact minimizer over complex mu of E|(w_prev - mu g)^H x~ - nu|^2:
//   mu = (g^H R~ w_prev - nu g^H p~) / (g^H R~ g).
// Throws SingularDenominatorError when g^H R~ g is numerically zero.
Complex scalar_factor(const CVector& g, const CMatrix& r_tilde, const CVector& p_tilde,
                      const CVector& w_prev, double modulus_target = 1.0);

// Empirical cost (1/i) sum |w^H x~(l) - nu|^2 expressed through the moments.
double ccm_quadratic_cost(const CVector& w, const MomentEstimates& est);

// Runs up to K auxiliary-vector iterations from w_0 on the current estimates.
// With refresh enabled the estimates and the newest history entry are
// updated after every step.
AvfState avf_weight_iteration(const AvfConfig& config, const SteeringVector& a0,
                              MomentEstimates& estimates, HistoryBuffer& history,
                              const AvfObserver& observer = {});

// Streaming CCM-AVF beamformer. The weights produced for snapshot i form the
// transformed snapshot at i + 1; the first snapshot is transformed with w_0.
class CcmAvfBeamformer {
 public:
  CcmAvfBeamformer(SteeringVector presumed, AvfConfig config, std::size_t expected_snapshots = 0);

  const AvfState& process(const CVector& received);

  const CVector& weights() const { return weights_; }
  const AvfState& state() const { return state_; }
  const MomentEstimates& estimates() const { return estimates_; }
  const HistoryBuffer& history() const { return history_; }
  const AvfConfig& config() const { return config_; }
  const SteeringVector& presumed_steering() const { return presumed_; }

  void set_observer(AvfObserver observer) { observer_ = std::move(observer); }

 private:
  SteeringVector presumed_;
  AvfConfig config_;
  MomentEstimates estimates_;
  HistoryBuffer history_;
  CVector weights_;
  AvfState state_;
  AvfObserver observer_;
};

}  // namespace ccmavf

#endif  // CCMAVF_CCM_AVF_HPP
