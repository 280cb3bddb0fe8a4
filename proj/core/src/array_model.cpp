// SPDX-License-Identifier: Apache-2.0

#include "ccmavf/array_model.hpp"

#include <cmath>
#include <string>

#include "ccmavf/errors.hpp"

namespace ccmavf {

void ArrayGeometry::validate() const {
  if (num_sensors < 1) {
    throw DomainError("array needs at least one sensor, got " + std::to_string(num_sensors));
  }
  if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio)) {
    throw DomainError("element spacing ratio must be positive");
  }
}

SteeringVector::SteeringVector(CVector entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0) {
    throw DimensionError("steering vector must be non-empty");
  }
}

void SourceSet::validate() const {
  if (doas_deg.empty()) {
    throw DomainError("source set needs at least the signal of interest");
  }
  if (powers.size() != doas_deg.size()) {
    throw DimensionError("source set has " + std::to_string(doas_deg.size()) + " DOAs but " +
                         std::to_string(powers.size()) + " powers");
  }
  for (std::size_t k = 0; k < doas_deg.size(); ++k) {
    if (!(powers[k] > 0.0)) {
      throw DomainError("source " + std::to_string(k) + " has non-positive power");
    }
    for (std::size_t l = 0; l < k; ++l) {
      if (doas_deg[k] == doas_deg[l]) {
        throw DomainError("sources " + std::to_string(l) + " and " + std::to_string(k) +
                          " share a DOA; steering vectors must be linearly independent");
      }
    }
  }
}

SteeringVector steering_vector(const ArrayGeometry& geometry, double doa_deg) {
  geometry.validate();
  if (!(doa_deg > 0.0 && doa_deg < 180.0)) {
    throw DomainError("DOA must lie in (0, 180) degrees, got " + std::to_string(doa_deg));
  }
  const double phase_step = -2.0 * kPi * geometry.spacing_ratio * std::cos(deg_to_rad(doa_deg));
  CVector entries(geometry.num_sensors);
  entries(0) = Complex(1.0, 0.0);
  for (int j = 1; j < geometry.num_sensors; ++j) {
    entries(j) = std::polar(1.0, phase_step * j);
  }
  return SteeringVector(std::move(entries));
}

CMatrix steering_matrix(const ArrayGeometry& geometry, const SourceSet& sources) {
  CMatrix a(geometry.num_sensors, static_cast<Eigen::Index>(sources.size()));
  for (std::size_t k = 0; k < sources.size(); ++k) {
    a.col(static_cast<Eigen::Index>(k)) = steering_vector(geometry, sources.doas_deg[k]).entries();
  }
  return a;
}

Snapshot generate_snapshot(const ArrayGeometry& geometry, const SourceSet& sources,
                           double noise_power, Rng& rng) {
  return generate_snapshot(steering_matrix(geometry, sources), sources, noise_power, rng);
}

Snapshot generate_snapshot(const CMatrix& steering, const SourceSet& sources, double noise_power,
                           Rng& rng) {
  const auto q = static_cast<Eigen::Index>(sources.size());
  if (steering.cols() != q || sources.powers.size() != sources.size()) {
    throw DimensionError("steering matrix columns do not match the source set");
  }
  if (!(noise_power >= 0.0)) {
    throw DomainError("noise power must be non-negative");
  }

  Snapshot snap;
  snap.true_symbols.resize(q);
  for (Eigen::Index k = 0; k < q; ++k) {
    const double amplitude = std::sqrt(sources.powers[static_cast<std::size_t>(k)]);
    const bool positive = (rng() >> 63) != 0;
    snap.true_symbols(k) = Complex(positive ? amplitude : -amplitude, 0.0);
  }

  snap.received = steering * snap.true_symbols;
  if (noise_power > 0.0) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_power / 2.0));
    for (Eigen::Index j = 0; j < snap.received.size(); ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      snap.received(j) += Complex(re, im);
    }
  }
  return snap;
}

Complex beamformer_output(const CVector& weights, const CVector& received) {
  if (weights.size() != received.size()) {
    throw DimensionError("weight vector has " + std::to_string(weights.size()) +
                         " entries but snapshot has " + std::to_string(received.size()));
  }
  return weights.dot(received);
}

}  // namespace ccmavf
