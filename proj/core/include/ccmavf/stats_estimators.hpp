// SPDX-License-Identifier: Apache-2.0

#ifndef CCMAVF_STATS_ESTIMATORS_HPP
#define CCMAVF_STATS_ESTIMATORS_HPP

#include <cstddef>
#include <vector>

#include "ccmavf/linalg.hpp"

namespace ccmavf {

// x~ = y* x with y = w^H x, and y~ = w^H x~ (= |y|^2).
struct TransformedSnapshot {
  CVector x_tilde;
  Complex y_tilde;
};

TransformedSnapshot transform_snapshot(const CVector& received, const CVector& weights);

// Sample averages over transformed snapshots l = 1..count:
//   r_tilde   = (1/i) sum x~(l) x~(l)^H
//   p_tilde   = (1/i) sum x~(l)
//   p_tilde_y = (1/i) sum (nu - y~(l))^* x~(l)
// All three are zero while count == 0.
struct MomentEstimates {
  CMatrix r_tilde;
  CVector p_tilde;
  CVector p_tilde_y;
  std::size_t count = 0;
  double modulus_target = 1.0;

  MomentEstimates() = default;
  explicit MomentEstimates(Eigen::Index num_sensors, double modulus_target = 1.0);

  Eigen::Index dimension() const { return p_tilde.size(); }
};

// Raw snapshots absorbed so far, each with the weight vector its current
// contribution to the estimates was formed with.
class HistoryBuffer {
 public:
  struct Entry {
    CVector received;
    CVector weights;
  };

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Entry& operator[](std::size_t l) const { return entries_[l]; }
  const Entry& back() const { return entries_.back(); }
  const std::vector<Entry>& entries() const { return entries_; }

  void reserve(std::size_t n) { entries_.reserve(n); }
  void push(CVector received, CVector weights);
  void set_current_weights(CVector weights);

 private:
  std::vector<Entry> entries_;
};

// Absorbs snapshot x transformed with w; appends it to the history.
void accumulate(MomentEstimates& est, HistoryBuffer& hist, const CVector& received,
                const CVector& weights);

// Replaces the newest snapshot's contribution with the one formed by w_k.
// Older contributions stay as they were.
void refresh_current_term(MomentEstimates& est, HistoryBuffer& hist, const CVector& weights);

}  // namespace ccmavf

#endif  // CCMAVF_STATS_ESTIMATORS_HPP
