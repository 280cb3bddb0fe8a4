// SPDX-License-Identifier: Apache-2.0

#include "ccmavf/metrics.hpp"

#include <cmath>
#include <limits>

#include "ccmavf/baselines.hpp"
#include "ccmavf/errors.hpp"

namespace ccmavf {

CMatrix interference_plus_noise_covariance(const ArrayGeometry& geometry,
                                           const SourceSet& sources, double noise_power) {
  geometry.validate();
  const auto m = geometry.num_sensors;
  CMatrix r = noise_power * CMatrix::Identity(m, m);
  for (std::size_t k = 1; k < sources.size(); ++k) {
    const CVector a = steering_vector(geometry, sources.doas_deg[k]).entries();
    r.noalias() += sources.powers[k] * (a * a.adjoint());
  }
  return r;
}

double output_sinr_linear(const CVector& w, const CVector& soi_steering, double soi_power,
                          const CMatrix& interference_plus_noise) {
  if (w.size() != soi_steering.size() || interference_plus_noise.rows() != w.size()) {
    throw DimensionError("SINR operands have inconsistent dimensions");
  }
  if (w.squaredNorm() == 0.0) {
    throw DomainError("SINR is undefined for a zero weight vector");
  }
  const double signal = soi_power * std::norm(w.dot(soi_steering));
  const double disturbance = w.dot(interference_plus_noise * w).real();
  if (!(disturbance > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return signal / disturbance;
}

double output_sinr(const CVector& w, const SourceSet& sources, const ArrayGeometry& geometry,
                   double noise_power) {
  const CVector a0 = steering_vector(geometry, sources.doas_deg.at(0)).entries();
  const CMatrix rin = interference_plus_noise_covariance(geometry, sources, noise_power);
  return to_db(output_sinr_linear(w, a0, sources.powers.at(0), rin));
}

double optimal_sinr(const SourceSet& sources, const ArrayGeometry& geometry, double noise_power) {
  const auto a0 = steering_vector(geometry, sources.doas_deg.at(0));
  const CMatrix rin = interference_plus_noise_covariance(geometry, sources, noise_power);
  const CVector w = mvdr_oracle(rin, a0);
  return to_db(output_sinr_linear(w, a0.entries(), sources.powers.at(0), rin));
}

std::vector<double> beampattern(const CVector& w, const ArrayGeometry& geometry,
                                std::span<const double> grid_deg) {
  if (w.size() != geometry.num_sensors) {
    throw DimensionError("weight vector does not match the array");
  }
  std::vector<double> out;
  out.reserve(grid_deg.size());
  for (double theta : grid_deg) {
    const CVector a = steering_vector(geometry, theta).entries();
    out.push_back(20.0 * std::log10(std::abs(w.dot(a))));
  }
  return out;
}

SinrTrace aggregate_trials(std::span<const std::vector<double>> linear_traces,
                           std::string label) {
  if (linear_traces.empty()) {
    throw DomainError("cannot aggregate an empty set of trials");
  }
  const std::size_t n = linear_traces.front().size();
  std::vector<double> sum(n, 0.0);
  for (const auto& trace : linear_traces) {
    if (trace.size() != n) {
      throw DimensionError("trial traces differ in length");
    }
    for (std::size_t i = 0; i < n; ++i) sum[i] += trace[i];
  }
  SinrTrace out;
  out.trials = static_cast<int>(linear_traces.size());
  out.label = std::move(label);
  out.per_snapshot_db.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.per_snapshot_db[i] = to_db(sum[i] / static_cast<double>(linear_traces.size()));
  }
  return out;
}

}  // namespace ccmavf
