// SPDX-License-Identifier: Apache-2.0

#ifndef CCMAVF_ARRAY_MODEL_HPP
#define CCMAVF_ARRAY_MODEL_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "ccmavf/linalg.hpp"

namespace ccmavf {

using Rng = std::mt19937_64;

// Uniform linear array: num_sensors elements spaced spacing_ratio wavelengths apart.
struct ArrayGeometry {
  int num_sensors = 40;
  double spacing_ratio = 0.5;

  void validate() const;
};

// Phase response of the array to a far-field plane wave.
//
// Entries have unit modulus with the first entry equal to 1, so the squared
// norm equals the number of sensors.
class SteeringVector {
 public:
  SteeringVector() = default;
  explicit SteeringVector(CVector entries);

  const CVector& entries() const { return entries_; }
  Eigen::Index size() const { return entries_.size(); }
  double squared_norm() const { return entries_.squaredNorm(); }

 private:
  CVector entries_;
};

enum class Modulation { Bpsk };

// Source index 0 is the signal of interest.
struct SourceSet {
  std::vector<double> doas_deg;
  std::vector<double> powers;
  Modulation modulation = Modulation::Bpsk;

  std::size_t size() const { return doas_deg.size(); }
  void validate() const;
};

struct Snapshot {
  CVector received;
  CVector true_symbols;
};

SteeringVector steering_vector(const ArrayGeometry& geometry, double doa_deg);

// Columns are the steering vectors of every source, in source order.
CMatrix steering_matrix(const ArrayGeometry& geometry, const SourceSet& sources);

// Draws s(i) and n(i) and returns x(i) = A s(i) + n(i).
Snapshot generate_snapshot(const ArrayGeometry& geometry, const SourceSet& sources,
                           double noise_power, Rng& rng);

// Same as above with a precomputed steering matrix, for hot loops.
Snapshot generate_snapshot(const CMatrix& steering, const SourceSet& sources,
                           double noise_power, Rng& rng);

// y = w^H x.
Complex beamformer_output(const CVector& weights, const CVector& received);

}  // namespace ccmavf

#endif  // CCMAVF_ARRAY_MODEL_HPP
