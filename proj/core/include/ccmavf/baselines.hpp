// SPDX-License-Identifier: Apache-2.0

#ifndef CCMAVF_BASELINES_HPP
#define CCMAVF_BASELINES_HPP

#include <cstddef>

#include "ccmavf/array_model.hpp"
#include "ccmavf/linalg.hpp"

namespace ccmavf {

// R = E[|y|^2 x x^H] and p = E[y^* x] for the CCM closed form.
struct BatchMoments {
  CMatrix r_mat;
  CVector p_vec;
};

enum class Criterion { Cmv, Ccm };
enum class Algorithm { Sg, Rls, Avf };

struct AdaptiveFilterConfig {
  Criterion criterion = Criterion::Ccm;
  Algorithm algorithm = Algorithm::Sg;
  double step_size = 1e-3;
  double forgetting_factor = 0.998;
  int rank = 8;
  double diagonal_load = 1e-2;
  double modulus_target = 1.0;
  double exit_tolerance = 1e-8;

  void validate() const;
};

// Minimizer of w^H R w - 2 Re(w^H p) subject to w^H a0 = 1:
//   w = R^-1 (p - [(a0^H R^-1 p - 1) / (a0^H R^-1 a0)] a0).
// diagonal_load is added to the diagonal of R before the solve.
CVector ccm_closed_form(const BatchMoments& moments, const SteeringVector& a0,
                        double diagonal_load = 0.0);

// R^-1 a0 / (a0^H R^-1 a0).
CVector mvdr_oracle(const CMatrix& covariance, const SteeringVector& a0);

// MVDR form with an optional diagonal load, used by CMV-RLS.
CVector cmv_closed_form(const CMatrix& covariance, const SteeringVector& a0,
                        double diagonal_load = 0.0);

// Moves w onto the constraint plane w^H a0 = 1 along a0.
CVector project_onto_constraint(const CVector& w, const SteeringVector& a0);

// --- CMV auxiliary-vector filter -------------------------------------------

struct CmvAvfResult {
  CVector weights;
  int iterations_run = 0;
  bool exited_early = false;
};

// Up to `rank` auxiliary-vector steps from w_0 on covariance R:
// g_k = P R w_{k-1}, mu_k = g^H R w_{k-1} / g^H R g, w_k = w_{k-1} - mu_k g_k,
// where P projects off a0.
CmvAvfResult cmv_avf_weights(const CMatrix& covariance, const SteeringVector& a0, int rank,
                             double exit_tolerance = 1e-8);

struct CmvAvfState {
  CMatrix r_hat;  // plain sample covariance of x
  std::size_t count = 0;
  CVector weights;
  int iterations_run = 0;

  explicit CmvAvfState(const SteeringVector& a0);
};

void cmv_avf_update(CmvAvfState& state, const CVector& received, const SteeringVector& a0,
                    const AdaptiveFilterConfig& config);

// --- Stochastic gradient ----------------------------------------------------

struct SgState {
  CVector weights;
  std::size_t count = 0;

  explicit SgState(const SteeringVector& a0);
};

// One gradient step on the instantaneous CMV (|y|^2) or CCM ((|y|^2 - nu)^2)
// cost followed by re-projection onto w^H a0 = 1.
void sg_update(SgState& state, const CVector& received, const SteeringVector& a0,
               const AdaptiveFilterConfig& config);

// --- Exponentially weighted closed-form ("RLS") -----------------------------

struct RlsState {
  CMatrix r_sum;  // sum lambda^(i-l) (|y|^2) x x^H ; |y|^2 factor only for CCM
  CVector p_sum;  // sum lambda^(i-l) y^* x (CCM only)
  double weight_sum = 0.0;
  std::size_t count = 0;
  CVector weights;

  explicit RlsState(const SteeringVector& a0);

  CMatrix r_average() const { return r_sum / weight_sum; }
  CVector p_average() const { return p_sum / weight_sum; }
};

// Absorbs x into the exponentially weighted moments of the configured
// criterion and re-solves the closed form. While count < 2m a load of
// diagonal_load * tr(R)/m is added.
void rls_update(RlsState& state, const CVector& received, const SteeringVector& a0,
                const AdaptiveFilterConfig& config);

// Re-solves the closed form from the moments currently held in `state`.
void rls_solve(RlsState& state, const SteeringVector& a0, const AdaptiveFilterConfig& config);

}  // namespace ccmavf

#endif  // CCMAVF_BASELINES_HPP
