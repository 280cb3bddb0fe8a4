// SPDX-License-Identifier: Apache-2.0

#ifndef CCMAVF_HARNESS_HPP
#define CCMAVF_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ccmavf/array_model.hpp"
#include "ccmavf/scenario.hpp"

namespace ccmavf {

// Streaming beamformer as seen by the experiment runner.
class Beamformer {
 public:
  virtual ~Beamformer() = default;

  virtual void process(const CVector& received) = 0;
  virtual const CVector& weights() const = 0;
  // Vector c of the linear constraint w^H c = 1 this beamformer maintains.
  virtual const CVector& constraint_steering() const = 0;
  virtual std::string_view label() const = 0;
};

// Everything a beamformer may know about one trial. `truth` and the true
// steering vector are only used by the clairvoyant MVDR reference.
struct TrialContext {
  const Scenario& scenario;
  const SourceSet& truth;
  const SteeringVector& presumed;
  const CMatrix& interference_plus_noise;
};

std::unique_ptr<Beamformer> make_beamformer(BeamformerKind kind, const TrialContext& ctx);

struct ResultMetadata {
  std::string scenario_name;
  std::string scenario_hash;
  std::uint64_t master_seed = 0;
  int trials = 0;
  int num_snapshots = 0;
  std::string version;
};

// First column is the snapshot index (or K for sweeps); one SINR column in
// dB per beamformer.
struct ResultTable {
  std::string index_name = "snapshot";
  std::vector<std::int64_t> index;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> columns_db;
  // Largest |w^H c - 1| seen per beamformer over every snapshot and trial.
  std::vector<double> max_constraint_error;
  ResultMetadata metadata;

  std::size_t rows() const { return index.size(); }
  // Column for a beamformer label; throws std::out_of_range if absent.
  const std::vector<double>& column(std::string_view label) const;
};

struct RunOptions {
  // 0 means: BEAMFORM_THREADS if set, otherwise hardware concurrency.
  // A positive request is still capped by BEAMFORM_THREADS.
  int threads = 0;
  // Called after each finished trial with (done, total). May be invoked from
  // worker threads, one at a time.
  std::function<void(int, int)> progress;
};

int resolve_thread_count(int requested);

// Streams every trial through all configured beamformers on identical data
// and averages the clairvoyant output SINR per snapshot.
ResultTable run_scenario(const Scenario& s, const RunOptions& options = {});

// One run per K (CCM-AVF iterations and CMV-AVF rank), reporting the SINR at
// the last snapshot. Uses the scenario's k_values when `k_values` is empty.
ResultTable run_k_sweep(const Scenario& s, std::span<const int> k_values,
                        const RunOptions& options = {});

struct TrialWeights {
  SourceSet truth;
  std::vector<std::string> labels;
  std::vector<CVector> weights;
};

// Final weight vectors of every beamformer after one full trial.
TrialWeights run_trial_weights(const Scenario& s, int trial);

// Header line then one row per index, 6 decimals, LF line endings.
void write_csv(const ResultTable& table, std::ostream& out);
std::string to_csv(const ResultTable& table);

// JSON sidecar with the metadata needed to re-run the table bit-identically.
std::string metadata_json(const ResultTable& table);

std::string library_version();

// Per-trial generator: seeded from (master_seed, trial).
Rng trial_rng(std::uint64_t master_seed, int trial);

}  // namespace ccmavf

#endif  // CCMAVF_HARNESS_HPP
