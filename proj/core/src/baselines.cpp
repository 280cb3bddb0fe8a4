// SPDX-License-Identifier: Apache-2.0

#include "ccmavf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccmavf/ccm_avf.hpp"
#include "ccmavf/errors.hpp"

namespace ccmavf {

namespace {

constexpr double kMinReciprocalCondition = 1e-13;

Eigen::LLT<CMatrix> factorize(const CMatrix& r, double diagonal_load) {
  if (r.rows() != r.cols()) {
    throw DimensionError("covariance matrix must be square");
  }
  CMatrix loaded = r;
  if (diagonal_load != 0.0) {
    loaded.diagonal().array() += diagonal_load;
  }
  Eigen::LLT<CMatrix> llt(loaded);
  if (llt.info() != Eigen::Success || !(llt.rcond() > kMinReciprocalCondition)) {
    throw SingularMatrixError(
        "covariance matrix is numerically singular; apply diagonal loading");
  }
  return llt;
}

void check_dims(const CVector& v, const SteeringVector& a0, const char* what) {
  if (v.size() != a0.size()) {
    throw DimensionError(std::string(what) + " has " + std::to_string(v.size()) +
                         " entries, steering vector has " + std::to_string(a0.size()));
  }
}

double early_load(const CMatrix& r, std::size_t count, double factor) {
  const auto m = static_cast<std::size_t>(r.rows());
  if (count >= 2 * m) return 0.0;
  return factor * r.trace().real() / static_cast<double>(m);
}

}  // namespace

void AdaptiveFilterConfig::validate() const {
  if (algorithm == Algorithm::Sg && !(step_size >= 0.0)) {
    throw ConfigError("SG step size must be non-negative");
  }
  if (algorithm == Algorithm::Rls && !(forgetting_factor > 0.0 && forgetting_factor <= 1.0)) {
    throw ConfigError("RLS forgetting factor must lie in (0, 1]");
  }
  if (algorithm == Algorithm::Avf && rank < 1) {
    throw ConfigError("AVF rank must be at least 1");
  }
  if (!(diagonal_load >= 0.0)) {
    throw ConfigError("diagonal load must be non-negative");
  }
}

CVector ccm_closed_form(const BatchMoments& moments, const SteeringVector& a0,
                        double diagonal_load) {
  check_dims(moments.p_vec, a0, "p vector");
  if (moments.r_mat.rows() != a0.size()) {
    throw DimensionError("R matrix does not match steering vector");
  }
  const auto llt = factorize(moments.r_mat, diagonal_load);
  const CVector& a = a0.entries();
  const CVector r_inv_a = llt.solve(a);
  const CVector r_inv_p = llt.solve(moments.p_vec);
  const double a_r_a = a.dot(r_inv_a).real();
  const Complex lagrange = (a.dot(r_inv_p) - 1.0) / a_r_a;
  return r_inv_p - lagrange * r_inv_a;
}

CVector cmv_closed_form(const CMatrix& covariance, const SteeringVector& a0,
                        double diagonal_load) {
  if (covariance.rows() != a0.size()) {
    throw DimensionError("covariance does not match steering vector");
  }
  const auto llt = factorize(covariance, diagonal_load);
  const CVector r_inv_a = llt.solve(a0.entries());
  return r_inv_a / a0.entries().dot(r_inv_a).real();
}

CVector mvdr_oracle(const CMatrix& covariance, const SteeringVector& a0) {
  return cmv_closed_form(covariance, a0, 0.0);
}

CVector project_onto_constraint(const CVector& w, const SteeringVector& a0) {
  check_dims(w, a0, "weight vector");
  const CVector& a = a0.entries();
  const Complex excess = w.dot(a) - 1.0;
  return w - (std::conj(excess) / a.squaredNorm()) * a;
}

CmvAvfResult cmv_avf_weights(const CMatrix& covariance, const SteeringVector& a0, int rank,
                             double exit_tolerance) {
  if (covariance.rows() != a0.size() || covariance.cols() != a0.size()) {
    throw DimensionError("covariance does not match steering vector");
  }
  CmvAvfResult out;
  out.weights = initialize_weights(a0);
  const CVector zero = CVector::Zero(a0.size());
  for (int k = 1; k <= rank; ++k) {
    const CVector rw = covariance * out.weights;
    const CVector g = project_off_steering(rw, a0);
    if (g.norm() <= exit_tolerance * std::max(rw.norm(), 1e-30)) {
      out.exited_early = true;
      break;
    }
    const Complex mu = scalar_factor(g, covariance, zero, out.weights);
    out.weights -= mu * g;
    out.iterations_run = k;
  }
  return out;
}

CmvAvfState::CmvAvfState(const SteeringVector& a0)
    : r_hat(CMatrix::Zero(a0.size(), a0.size())), weights(initialize_weights(a0)) {}

void cmv_avf_update(CmvAvfState& state, const CVector& received, const SteeringVector& a0,
                    const AdaptiveFilterConfig& config) {
  check_dims(received, a0, "snapshot");
  ++state.count;
  const double inv = 1.0 / static_cast<double>(state.count);
  state.r_hat *= 1.0 - inv;
  state.r_hat.noalias() += inv * (received * received.adjoint());
  auto result = cmv_avf_weights(state.r_hat, a0, config.rank, config.exit_tolerance);
  state.weights = std::move(result.weights);
  state.iterations_run = result.iterations_run;
}

SgState::SgState(const SteeringVector& a0) : weights(initialize_weights(a0)) {}

void sg_update(SgState& state, const CVector& received, const SteeringVector& a0,
               const AdaptiveFilterConfig& config) {
  check_dims(received, a0, "snapshot");
  const Complex y = state.weights.dot(received);
  // Gradient with respect to w^* of the instantaneous cost.
  Complex factor = std::conj(y);
  if (config.criterion == Criterion::Ccm) {
    factor *= std::norm(y) - config.modulus_target;
  }
  if (config.step_size != 0.0) {
    state.weights -= (config.step_size * factor) * received;
    state.weights = project_onto_constraint(state.weights, a0);
  }
  ++state.count;
}

RlsState::RlsState(const SteeringVector& a0)
    : r_sum(CMatrix::Zero(a0.size(), a0.size())),
      p_sum(CVector::Zero(a0.size())),
      weights(initialize_weights(a0)) {}

void rls_update(RlsState& state, const CVector& received, const SteeringVector& a0,
                const AdaptiveFilterConfig& config) {
  check_dims(received, a0, "snapshot");
  const double lambda = config.forgetting_factor;
  const Complex y = state.weights.dot(received);

  state.r_sum *= lambda;
  state.weight_sum = lambda * state.weight_sum + 1.0;
  if (config.criterion == Criterion::Ccm) {
    state.r_sum.noalias() += std::norm(y) * (received * received.adjoint());
    state.p_sum = lambda * state.p_sum + std::conj(y) * received;
  } else {
    state.r_sum.noalias() += received * received.adjoint();
  }
  ++state.count;
  rls_solve(state, a0, config);
}

void rls_solve(RlsState& state, const SteeringVector& a0, const AdaptiveFilterConfig& config) {
  if (!(state.weight_sum > 0.0)) {
    throw DomainError("RLS moments are empty");
  }
  const CMatrix r = state.r_average();
  const double load = early_load(r, state.count, config.diagonal_load);
  if (config.criterion == Criterion::Ccm) {
    state.weights =
        ccm_closed_form(BatchMoments{r, config.modulus_target * state.p_average()}, a0, load);
  } else {
    state.weights = cmv_closed_form(r, a0, load);
  }
}

}  // namespace ccmavf
