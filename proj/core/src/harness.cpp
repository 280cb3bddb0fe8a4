// SPDX-License-Identifier: Apache-2.0

#include "ccmavf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ccmavf/baselines.hpp"
#include "ccmavf/ccm_avf.hpp"
#include "ccmavf/errors.hpp"
#include "ccmavf/metrics.hpp"
#include "json.hpp"

#ifndef CCMAVF_VERSION
#define CCMAVF_VERSION "unknown"
#endif

namespace ccmavf {

namespace {

class CcmAvfAdapter final : public Beamformer {
 public:
  CcmAvfAdapter(const TrialContext& ctx)
      : filter_(ctx.presumed, ctx.scenario.avf,
                static_cast<std::size_t>(ctx.scenario.num_snapshots)) {}
  void process(const CVector& x) override { filter_.process(x); }
  const CVector& weights() const override { return filter_.weights(); }
  const CVector& constraint_steering() const override {
    return filter_.presumed_steering().entries();
  }
  std::string_view label() const override { return beamformer_label(BeamformerKind::CcmAvf); }

 private:
  CcmAvfBeamformer filter_;
};

class CmvAvfAdapter final : public Beamformer {
 public:
  CmvAvfAdapter(const TrialContext& ctx) : a0_(ctx.presumed), state_(a0_) {
    config_.algorithm = Algorithm::Avf;
    config_.criterion = Criterion::Cmv;
    config_.rank = ctx.scenario.baselines.cmv_avf_rank;
    config_.exit_tolerance = ctx.scenario.avf.exit_tolerance;
  }
  void process(const CVector& x) override { cmv_avf_update(state_, x, a0_, config_); }
  const CVector& weights() const override { return state_.weights; }
  const CVector& constraint_steering() const override { return a0_.entries(); }
  std::string_view label() const override { return beamformer_label(BeamformerKind::CmvAvf); }

 private:
  SteeringVector a0_;
  AdaptiveFilterConfig config_;
  CmvAvfState state_;
};

class SgAdapter final : public Beamformer {
 public:
  SgAdapter(const TrialContext& ctx, Criterion criterion) : a0_(ctx.presumed), state_(a0_) {
    config_.algorithm = Algorithm::Sg;
    config_.criterion = criterion;
    config_.step_size = ctx.scenario.baselines.sg_step_size;
    config_.modulus_target = ctx.scenario.avf.modulus_target;
  }
  void process(const CVector& x) override { sg_update(state_, x, a0_, config_); }
  const CVector& weights() const override { return state_.weights; }
  const CVector& constraint_steering() const override { return a0_.entries(); }
  std::string_view label() const override {
    return beamformer_label(config_.criterion == Criterion::Ccm ? BeamformerKind::CcmSg
                                                                : BeamformerKind::CmvSg);
  }

 private:
  SteeringVector a0_;
  AdaptiveFilterConfig config_;
  SgState state_;
};

class RlsAdapter final : public Beamformer {
 public:
  RlsAdapter(const TrialContext& ctx, Criterion criterion) : a0_(ctx.presumed), state_(a0_) {
    config_.algorithm = Algorithm::Rls;
    config_.criterion = criterion;
    config_.forgetting_factor = ctx.scenario.baselines.rls_forgetting_factor;
    config_.diagonal_load = ctx.scenario.baselines.diagonal_load;
    config_.modulus_target = ctx.scenario.avf.modulus_target;
  }
  void process(const CVector& x) override { rls_update(state_, x, a0_, config_); }
  const CVector& weights() const override { return state_.weights; }
  const CVector& constraint_steering() const override { return a0_.entries(); }
  std::string_view label() const override {
    return beamformer_label(config_.criterion == Criterion::Ccm ? BeamformerKind::CcmRls
                                                                : BeamformerKind::CmvRls);
  }

 private:
  SteeringVector a0_;
  AdaptiveFilterConfig config_;
  RlsState state_;
};

// Clairvoyant reference: true steering vector and true R_{i+n}.
class MvdrAdapter final : public Beamformer {
 public:
  MvdrAdapter(const TrialContext& ctx)
      : a0_(steering_vector(ctx.scenario.geometry, ctx.truth.doas_deg.at(0))),
        weights_(mvdr_oracle(ctx.interference_plus_noise, a0_)) {}
  void process(const CVector&) override {}
  const CVector& weights() const override { return weights_; }
  const CVector& constraint_steering() const override { return a0_.entries(); }
  std::string_view label() const override { return beamformer_label(BeamformerKind::Mvdr); }

 private:
  SteeringVector a0_;
  CVector weights_;
};

struct TrialResult {
  std::vector<std::vector<double>> sinr_linear;  // [beamformer][snapshot]
  std::vector<double> max_constraint_error;
};

TrialResult run_trial(const Scenario& s, int trial) {
  Rng rng = trial_rng(s.master_seed, trial);
  const SourceSet truth = draw_sources(s, rng);
  truth.validate();
  const CMatrix steering = steering_matrix(s.geometry, truth);
  const SteeringVector presumed = steering_vector(s.geometry, s.soi_doa_deg + s.mismatch_deg);
  const CMatrix rin = interference_plus_noise_covariance(s.geometry, truth, s.noise_power);
  const CVector soi = steering.col(0);
  const TrialContext ctx{s, truth, presumed, rin};

  std::vector<std::unique_ptr<Beamformer>> bank;
  bank.reserve(s.beamformers.size());
  for (auto kind : s.beamformers) bank.push_back(make_beamformer(kind, ctx));

  const auto n = static_cast<std::size_t>(s.num_snapshots);
  TrialResult out;
  out.sinr_linear.assign(bank.size(), std::vector<double>(n));
  out.max_constraint_error.assign(bank.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Snapshot snap = generate_snapshot(steering, truth, s.noise_power, rng);
    for (std::size_t b = 0; b < bank.size(); ++b) {
      auto& bf = *bank[b];
      bf.process(snap.received);
      const CVector& w = bf.weights();
      out.sinr_linear[b][i] = output_sinr_linear(w, soi, truth.powers[0], rin);
      const double err = std::abs(w.dot(bf.constraint_steering()) - 1.0);
      out.max_constraint_error[b] = std::max(out.max_constraint_error[b], err);
    }
  }
  return out;
}

std::vector<TrialResult> run_trials(const Scenario& s, const RunOptions& options) {
  const int total = s.num_trials;
  std::vector<TrialResult> results(static_cast<std::size_t>(total));
  const int threads = std::min(resolve_thread_count(options.threads), total);

  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;

  auto worker = [&] {
    while (!failed.load()) {
      const int t = next.fetch_add(1);
      if (t >= total) break;
      try {
        results[static_cast<std::size_t>(t)] = run_trial(s, t);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed = true;
        break;
      }
      const int finished = done.fetch_add(1) + 1;
      if (options.progress) {
        std::lock_guard lock(mu);
        options.progress(finished, total);
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

ResultMetadata make_metadata(const Scenario& s) {
  return ResultMetadata{s.name, scenario_hash(s), s.master_seed, s.num_trials, s.num_snapshots,
                        library_version()};
}

std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::unique_ptr<Beamformer> make_beamformer(BeamformerKind kind, const TrialContext& ctx) {
  switch (kind) {
    case BeamformerKind::CcmAvf: return std::make_unique<CcmAvfAdapter>(ctx);
    case BeamformerKind::CmvAvf: return std::make_unique<CmvAvfAdapter>(ctx);
    case BeamformerKind::CcmSg: return std::make_unique<SgAdapter>(ctx, Criterion::Ccm);
    case BeamformerKind::CmvSg: return std::make_unique<SgAdapter>(ctx, Criterion::Cmv);
    case BeamformerKind::CcmRls: return std::make_unique<RlsAdapter>(ctx, Criterion::Ccm);
    case BeamformerKind::CmvRls: return std::make_unique<RlsAdapter>(ctx, Criterion::Cmv);
    case BeamformerKind::Mvdr: return std::make_unique<MvdrAdapter>(ctx);
  }
  throw ConfigError("unknown beamformer kind");
}

const std::vector<double>& ResultTable::column(std::string_view label) const {
  for (std::size_t b = 0; b < labels.size(); ++b) {
    if (labels[b] == label) return columns_db[b];
  }
  throw std::out_of_range("no column labelled '" + std::string(label) + "'");
}

int resolve_thread_count(int requested) {
  int cap = 0;
  if (const char* env = std::getenv("BEAMFORM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) cap = static_cast<int>(v);
  }
  if (requested > 0) return cap > 0 ? std::min(requested, cap) : requested;
  if (cap > 0) return cap;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

TrialWeights run_trial_weights(const Scenario& s, int trial) {
  s.validate();
  Rng rng = trial_rng(s.master_seed, trial);
  TrialWeights out;
  out.truth = draw_sources(s, rng);
  out.truth.validate();
  const CMatrix steering = steering_matrix(s.geometry, out.truth);
  const SteeringVector presumed = steering_vector(s.geometry, s.soi_doa_deg + s.mismatch_deg);
  const CMatrix rin = interference_plus_noise_covariance(s.geometry, out.truth, s.noise_power);
  const TrialContext ctx{s, out.truth, presumed, rin};
  std::vector<std::unique_ptr<Beamformer>> bank;
  for (auto kind : s.beamformers) bank.push_back(make_beamformer(kind, ctx));
  for (int i = 0; i < s.num_snapshots; ++i) {
    const Snapshot snap = generate_snapshot(steering, out.truth, s.noise_power, rng);
    for (auto& bf : bank) bf->process(snap.received);
  }
  for (const auto& bf : bank) {
    out.labels.emplace_back(bf->label());
    out.weights.push_back(bf->weights());
  }
  return out;
}

Rng trial_rng(std::uint64_t master_seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed & 0xffffffffu),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  return Rng(seq);
}

ResultTable run_scenario(const Scenario& s, const RunOptions& options) {
  s.validate();
  const auto results = run_trials(s, options);

  ResultTable table;
  table.metadata = make_metadata(s);
  const auto n = static_cast<std::size_t>(s.num_snapshots);
  table.index.resize(n);
  for (std::size_t i = 0; i < n; ++i) table.index[i] = static_cast<std::int64_t>(i + 1);

  for (std::size_t b = 0; b < s.beamformers.size(); ++b) {
    std::vector<std::vector<double>> per_trial;
    per_trial.reserve(results.size());
    double worst = 0.0;
    for (const auto& r : results) {
      per_trial.push_back(r.sinr_linear[b]);
      worst = std::max(worst, r.max_constraint_error[b]);
    }
    const auto label = std::string(beamformer_label(s.beamformers[b]));
    auto trace = aggregate_trials(per_trial, label);
    table.labels.push_back(label);
    table.columns_db.push_back(std::move(trace.per_snapshot_db));
    table.max_constraint_error.push_back(worst);
  }
  return table;
}

ResultTable run_k_sweep(const Scenario& s, std::span<const int> k_values,
                        const RunOptions& options) {
  std::vector<int> ks(k_values.begin(), k_values.end());
  if (ks.empty()) ks = s.k_values;
  if (ks.empty()) throw ConfigError("K sweep needs at least one K value");
  for (int k : ks) {
    if (k < 1) throw ConfigError("K values must be at least 1");
  }

  ResultTable table;
  table.index_name = "K";
  table.metadata = make_metadata(s);
  for (int k : ks) {
    Scenario sk = s;
    sk.avf.max_iterations = k;
    sk.baselines.cmv_avf_rank = k;
    const ResultTable run = run_scenario(sk, options);
    if (table.labels.empty()) {
      table.labels = run.labels;
      table.columns_db.resize(run.labels.size());
      table.max_constraint_error.assign(run.labels.size(), 0.0);
    }
    table.index.push_back(k);
    for (std::size_t b = 0; b < run.labels.size(); ++b) {
      table.columns_db[b].push_back(run.columns_db[b].back());
      table.max_constraint_error[b] =
          std::max(table.max_constraint_error[b], run.max_constraint_error[b]);
    }
  }
  return table;
}

void write_csv(const ResultTable& table, std::ostream& out) {
  std::string text = table.index_name;
  for (const auto& label : table.labels) {
    text += ',';
    text += label;
    text += "_dB";
  }
  text += '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    text += std::to_string(table.index[r]);
    for (const auto& col : table.columns_db) {
      text += ',';
      text += format_fixed6(col[r]);
    }
    text += '\n';
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  write_csv(table, out);
  return out.str();
}

std::string metadata_json(const ResultTable& table) {
  const auto& m = table.metadata;
  nlohmann::ordered_json doc;
  doc["scenario"] = m.scenario_name;
  doc["scenario_hash"] = m.scenario_hash;
  doc["master_seed"] = m.master_seed;
  doc["trials"] = m.trials;
  doc["num_snapshots"] = m.num_snapshots;
  doc["version"] = m.version;
  auto& errors = doc["max_constraint_error"] = nlohmann::ordered_json::object();
  const auto n = std::min(table.labels.size(), table.max_constraint_error.size());
  for (std::size_t b = 0; b < n; ++b) {
    errors[table.labels[b]] = table.max_constraint_error[b];
  }
  return doc.dump(2) + "\n";
}

std::string library_version() { return CCMAVF_VERSION; }

}  // namespace ccmavf
