// SPDX-License-Identifier: Apache-2.0

#include "ccmavf/ccm_avf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccmavf/errors.hpp"

namespace ccmavf {

void AvfConfig::validate() const {
  if (!(mu0 > 0.0)) throw ConfigError("avf mu0 must be positive");
  if (max_iterations < 1) throw ConfigError("avf iteration count K must be at least 1");
  if (!(exit_tolerance > 0.0)) throw ConfigError("avf exit tolerance must be positive");
  if (!(modulus_target > 0.0)) throw ConfigError("avf modulus target must be positive");
}

CVector initialize_weights(const SteeringVector& a0) {
  const double norm2 = a0.squared_norm();
  if (!(norm2 > 0.0)) {
    throw DomainError("steering vector is zero");
  }
  return a0.entries() / norm2;
}

CVector project_off_steering(const CVector& v, const SteeringVector& a0) {
  const CVector& a = a0.entries();
  if (v.size() != a.size()) {
    throw DimensionError("vector and steering vector differ in length");
  }
  const double norm2 = a.squaredNorm();
  if (!(norm2 > 0.0)) {
    throw DomainError("steering vector is zero");
  }
  return v - (a.dot(v) / norm2) * a;
}

CVector auxiliary_vector(Complex mu_prev, const CVector& p_tilde_y, const SteeringVector& a0) {
  return std::conj(mu_prev) * project_off_steering(p_tilde_y, a0);
}

Complex scalar_factor(const CVector& g, const CMatrix& r_tilde, const CVector& p_tilde,
                      const CVector& w_prev, double modulus_target) {
  const auto m = g.size();
  if (r_tilde.rows() != m || r_tilde.cols() != m || p_tilde.size() != m || w_prev.size() != m) {
    throw DimensionError("scalar_factor operands have inconsistent dimensions");
  }
  const CVector rg = r_tilde * g;
  const Complex denom = g.dot(rg);
  const double scale = g.squaredNorm() * r_tilde.norm();
  if (!(std::abs(denom) >= 1e-14 * scale) || scale == 0.0) {
    throw SingularDenominatorError("g^H R g vanishes; moment estimates are degenerate");
  }
  // Residual form g^H (R w - nu p).
  const CVector residual = r_tilde * w_prev - modulus_target * p_tilde;
  return g.dot(residual) / denom;
}

double ccm_quadratic_cost(const CVector& w, const MomentEstimates& est) {
  const double nu = est.modulus_target;
  const Complex quad = w.dot(est.r_tilde * w);
  return quad.real() - 2.0 * nu * w.dot(est.p_tilde).real() + nu * nu;
}

AvfState avf_weight_iteration(const AvfConfig& config, const SteeringVector& a0,
                              MomentEstimates& estimates, HistoryBuffer& history,
                              const AvfObserver& observer) {
  if (estimates.count == 0) {
    throw DomainError("avf iteration needs at least one absorbed snapshot");
  }
  if (estimates.dimension() != a0.size()) {
    throw DimensionError("estimates and steering vector differ in dimension");
  }

  AvfState state;
  state.w_current = initialize_weights(a0);
  state.mu_last = Complex(config.mu0, 0.0);
  state.g_last = CVector::Zero(a0.size());

  for (int k = 1; k <= config.max_iterations; ++k) {
    CVector g = auxiliary_vector(state.mu_last, estimates.p_tilde_y, a0);
    const double g_norm = g.norm();
    if (g_norm <= config.exit_tolerance * std::max(estimates.p_tilde_y.norm(), 1e-30)) {
      state.exited_early = true;
      break;
    }
    if (config.normalize_auxiliary) {
      g /= g_norm;
    }

    const Complex mu = scalar_factor(g, estimates.r_tilde, estimates.p_tilde, state.w_current,
                                     estimates.modulus_target);
    if (mu == Complex(0.0, 0.0)) {
      ++state.zero_mu_steps;
    }
    CVector w_next = state.w_current - mu * g;

    if (observer) {
      observer(AvfIterate{k, g, mu, state.w_current, w_next, estimates});
    }

    state.w_current = std::move(w_next);
    state.g_last = std::move(g);
    // Carry the scalar of the unnormalized vector so that g_{k+1} and its exit
    // test do not depend on the normalization.
    state.mu_last = config.normalize_auxiliary ? mu / g_norm : mu;
    state.iterations_run = k;

    if (config.refresh_estimates) {
      refresh_current_term(estimates, history, state.w_current);
    }
  }
  return state;
}

CcmAvfBeamformer::CcmAvfBeamformer(SteeringVector presumed, AvfConfig config,
                                   std::size_t expected_snapshots)
    : presumed_(std::move(presumed)),
      config_(config),
      estimates_(presumed_.size(), config.modulus_target) {
  config_.validate();
  weights_ = initialize_weights(presumed_);
  history_.reserve(expected_snapshots);
}

const AvfState& CcmAvfBeamformer::process(const CVector& received) {
  accumulate(estimates_, history_, received, weights_);
  state_ = avf_weight_iteration(config_, presumed_, estimates_, history_, observer_);
  weights_ = state_.w_current;
  return state_;
}

}  // namespace ccmavf
