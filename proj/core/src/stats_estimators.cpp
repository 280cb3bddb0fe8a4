// SPDX-License-Identifier: Apache-2.0

#include "ccmavf/stats_estimators.hpp"

#include <string>

#include "ccmavf/errors.hpp"

namespace ccmavf {

namespace {

void check_pair(const CVector& received, const CVector& weights, Eigen::Index dim) {
  if (received.size() != dim || weights.size() != dim) {
    throw DimensionError("estimator has dimension " + std::to_string(dim) +
                         ", got snapshot of " + std::to_string(received.size()) +
                         " and weights of " + std::to_string(weights.size()));
  }
  if (weights.squaredNorm() == 0.0) {
    throw DomainError("zero weight vector makes the transformed snapshot degenerate");
  }
}

// Adds scale * (term formed from (x, w)) to the averages.
void apply_term(MomentEstimates& est, const TransformedSnapshot& t, double scale) {
  est.r_tilde.noalias() += scale * (t.x_tilde * t.x_tilde.adjoint());
  est.p_tilde += scale * t.x_tilde;
  est.p_tilde_y += scale * std::conj(Complex(est.modulus_target, 0.0) - t.y_tilde) * t.x_tilde;
}

}  // namespace

TransformedSnapshot transform_snapshot(const CVector& received, const CVector& weights) {
  const Complex y = weights.dot(received);
  TransformedSnapshot t;
  t.x_tilde = std::conj(y) * received;
  t.y_tilde = weights.dot(t.x_tilde);
  return t;
}

MomentEstimates::MomentEstimates(Eigen::Index num_sensors, double target)
    : r_tilde(CMatrix::Zero(num_sensors, num_sensors)),
      p_tilde(CVector::Zero(num_sensors)),
      p_tilde_y(CVector::Zero(num_sensors)),
      modulus_target(target) {}

void HistoryBuffer::push(CVector received, CVector weights) {
  entries_.push_back({std::move(received), std::move(weights)});
}

void HistoryBuffer::set_current_weights(CVector weights) {
  if (entries_.empty()) {
    throw DomainError("history is empty");
  }
  entries_.back().weights = std::move(weights);
}

void accumulate(MomentEstimates& est, HistoryBuffer& hist, const CVector& received,
                const CVector& weights) {
  check_pair(received, weights, est.dimension());
  if (hist.size() != est.count) {
    throw DimensionError("history length does not match estimator count");
  }
  const auto t = transform_snapshot(received, weights);
  ++est.count;
  const double inv = 1.0 / static_cast<double>(est.count);
  // Running mean: avg <- (1 - 1/i) avg + (1/i) term.
  est.r_tilde *= 1.0 - inv;
  est.p_tilde *= 1.0 - inv;
  est.p_tilde_y *= 1.0 - inv;
  apply_term(est, t, inv);
  hist.push(received, weights);
}

void refresh_current_term(MomentEstimates& est, HistoryBuffer& hist, const CVector& weights) {
  if (est.count == 0 || hist.empty()) {
    throw DomainError("cannot refresh an estimator with no snapshots");
  }
  const auto& current = hist.back();
  check_pair(current.received, weights, est.dimension());
  const double inv = 1.0 / static_cast<double>(est.count);
  apply_term(est, transform_snapshot(current.received, current.weights), -inv);
  apply_term(est, transform_snapshot(current.received, weights), inv);
  hist.set_current_weights(weights);
}

}  // namespace ccmavf
