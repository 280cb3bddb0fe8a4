// SPDX-License-Identifier: Apache-2.0

#ifndef CCMAVF_SCENARIO_HPP
#define CCMAVF_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccmavf/array_model.hpp"
#include "ccmavf/baselines.hpp"
#include "ccmavf/ccm_avf.hpp"

namespace ccmavf {

enum class BeamformerKind { CcmAvf, CmvAvf, CcmSg, CmvSg, CcmRls, CmvRls, Mvdr };

std::string_view beamformer_label(BeamformerKind kind);
std::optional<BeamformerKind> parse_beamformer_kind(std::string_view text);

// Either a fixed list of interferer DOAs or a per-trial uniform draw on
// (range_min_deg, range_max_deg) that keeps clear of the SOI by guard_deg.
struct InterfererPlacement {
  std::vector<double> fixed_doas_deg;
  int count = 9;
  double range_min_deg = 20.0;
  double range_max_deg = 160.0;
  double guard_deg = 4.0;

  bool is_random() const { return fixed_doas_deg.empty(); }
  int num_interferers() const {
    return is_random() ? count : static_cast<int>(fixed_doas_deg.size());
  }
};

struct BaselineTuning {
  double sg_step_size = 1e-3;
  double rls_forgetting_factor = 0.998;
  double diagonal_load = 1e-2;
  int cmv_avf_rank = 8;
};

struct Scenario {
  std::string name = "custom";
  ArrayGeometry geometry;
  double soi_doa_deg = 90.0;
  double soi_power = 1.0;
  InterfererPlacement interferers;
  // One entry per interferer, or a single entry applied to all of them.
  std::vector<double> interferer_powers{1.0};
  double noise_power = 1.0;
  int num_snapshots = 500;
  int num_trials = 100;
  // Added to the SOI DOA handed to the beamformers; data use the true DOA.
  double mismatch_deg = 0.0;
  std::vector<BeamformerKind> beamformers;
  AvfConfig avf;
  BaselineTuning baselines;
  std::vector<int> k_values;
  std::uint64_t master_seed = 1;

  // Throws ConfigError describing the first problem found.
  void validate() const;
};

inline constexpr int kFullTrials = 1000;

// Built-in scenarios: "fig1a", "fig1b", "fig2".
std::vector<std::string> builtin_scenario_names();
std::optional<Scenario> builtin_scenario(std::string_view name);

// Flat "key = value" text, '#' starts a comment, lists are comma separated.
// An optional leading "base = <builtin>" starts from that scenario.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario_file(const std::string& path);

// Builtin name or path to a scenario file.
Scenario resolve_scenario(const std::string& name_or_path);

// Canonical text form; parse_scenario(serialize_scenario(s)) reproduces s.
std::string serialize_scenario(const Scenario& s);

// FNV-1a over the canonical text, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

// Sources for one trial; interferer DOAs are drawn from rng when random.
SourceSet draw_sources(const Scenario& s, Rng& rng);

}  // namespace ccmavf

#endif  // CCMAVF_SCENARIO_HPP
