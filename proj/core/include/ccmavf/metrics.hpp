// SPDX-License-Identifier: Apache-2.0

#ifndef CCMAVF_METRICS_HPP
#define CCMAVF_METRICS_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ccmavf/array_model.hpp"
#include "ccmavf/linalg.hpp"

namespace ccmavf {

struct SinrTrace {
  std::vector<double> per_snapshot_db;
  int trials = 0;
  std::string label;
};

// sum_{k>=1} sigma_k^2 a(theta_k) a(theta_k)^H + noise_power I, from the
// true scenario parameters.
CMatrix interference_plus_noise_covariance(const ArrayGeometry& geometry,
                                           const SourceSet& sources, double noise_power);

// sigma_0^2 |w^H a(theta_0)|^2 / (w^H R_{i+n} w), linear scale.
double output_sinr_linear(const CVector& w, const CVector& soi_steering, double soi_power,
                          const CMatrix& interference_plus_noise);

// Output SINR in dB for the true scenario (clairvoyant evaluation).
double output_sinr(const CVector& w, const SourceSet& sources, const ArrayGeometry& geometry,
                   double noise_power);

// sigma_0^2 a0^H R_{i+n}^-1 a0 in dB: the ceiling reached by the MVDR filter.
double optimal_sinr(const SourceSet& sources, const ArrayGeometry& geometry, double noise_power);

// 20 log10 |w^H a(theta)| over a DOA grid in degrees.
std::vector<double> beampattern(const CVector& w, const ArrayGeometry& geometry,
                                std::span<const double> grid_deg);

// Averages per-trial linear SINR series index by index, then converts to dB.
SinrTrace aggregate_trials(std::span<const std::vector<double>> linear_traces,
                           std::string label = {});

inline double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace ccmavf

#endif  // CCMAVF_METRICS_HPP
