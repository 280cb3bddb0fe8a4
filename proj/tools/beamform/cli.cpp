// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccmavf/errors.hpp"
#include "ccmavf/harness.hpp"
#include "ccmavf/metrics.hpp"
#include "ccmavf/scenario.hpp"

namespace beamform {

namespace {

struct CommonOptions {
  std::string scenario;
  std::string out;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  bool full = false;
  bool quiet = false;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("--scenario", o.scenario, "Builtin scenario name or scenario file")->required();
  cmd.add_option("--out", o.out, "Output CSV path (stdout when omitted)");
  cmd.add_option("--trials", o.trials, "Override the number of Monte Carlo trials")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--seed", o.seed, "Override the master seed");
  cmd.add_flag("--full", o.full, "Use the full 1000-trial count");
  cmd.add_flag("--quiet", o.quiet, "Suppress progress and summary output");
}

ccmavf::Scenario load(const CommonOptions& o) {
  auto s = ccmavf::resolve_scenario(o.scenario);
  if (o.full) s.num_trials = ccmavf::kFullTrials;
  if (o.trials) s.num_trials = *o.trials;
  if (o.seed) s.master_seed = *o.seed;
  s.validate();
  return s;
}

ccmavf::RunOptions run_options(const CommonOptions& o, std::ostream& err) {
  ccmavf::RunOptions opts;
  if (!o.quiet) {
    opts.progress = [&err](int done, int total) {
      if (done == total || done % 10 == 0) {
        err << "\rtrials " << done << "/" << total << (done == total ? "\n" : "") << std::flush;
      }
    };
  }
  return opts;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ccmavf::ConfigError("cannot open '" + path + "' for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw ccmavf::ConfigError("failed writing '" + path + "'");
}

void emit(const ccmavf::ResultTable& table, const CommonOptions& o, std::ostream& out,
          std::ostream& err) {
  const std::string csv = ccmavf::to_csv(table);
  if (o.out.empty()) {
    out << csv;
  } else {
    write_text(o.out, csv);
    write_text(o.out + ".meta.json", ccmavf::metadata_json(table));
  }
  if (!o.quiet) {
    err << "scenario " << table.metadata.scenario_name << " (hash "
        << table.metadata.scenario_hash << ", seed " << table.metadata.master_seed << ", "
        << table.metadata.trials << " trials)\n";
    for (std::size_t b = 0; b < table.labels.size(); ++b) {
      char line[128];
      std::snprintf(line, sizeof line, "  %-8s final %8.3f dB\n", table.labels[b].c_str(),
                    table.columns_db[b].back());
      err << line;
    }
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive beamforming simulator (CCM-AVF and reference beamformers)", "beamform"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "Run a scenario and write SINR versus snapshot");
  add_common(*run, run_opts);

  CommonOptions sweep_opts;
  std::vector<int> k_values;
  auto* sweep = app.add_subcommand("sweep-k", "Final SINR versus the AVF iteration count K");
  add_common(*sweep, sweep_opts);
  sweep->add_option("--k", k_values, "K values (defaults to the scenario's k_values)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);

  CommonOptions bp_opts;
  int bp_trial = 0;
  double bp_step = 0.5;
  auto* bp = app.add_subcommand("beampattern", "Beampattern of the final weights of one trial");
  add_common(*bp, bp_opts);
  bp->add_option("--trial", bp_trial, "Trial index to simulate")->check(CLI::NonNegativeNumber);
  bp->add_option("--step", bp_step, "DOA grid step in degrees")->check(CLI::Range(0.01, 90.0));

  auto* list = app.add_subcommand("list-scenarios", "List builtin scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*list) {
      for (const auto& name : ccmavf::builtin_scenario_names()) {
        const auto s = *ccmavf::builtin_scenario(name);
        out << name << "  m=" << s.geometry.num_sensors << " q="
            << 1 + s.interferers.num_interferers() << " N=" << s.num_snapshots
            << " trials=" << s.num_trials << " mismatch=" << s.mismatch_deg << "deg"
            << " beamformers=";
        for (std::size_t i = 0; i < s.beamformers.size(); ++i) {
          out << (i ? "," : "") << ccmavf::beamformer_label(s.beamformers[i]);
        }
        out << '\n';
      }
      return 0;
    }
    if (*run) {
      const auto s = load(run_opts);
      emit(ccmavf::run_scenario(s, run_options(run_opts, err)), run_opts, out, err);
      return 0;
    }
    if (*sweep) {
      const auto s = load(sweep_opts);
      emit(ccmavf::run_k_sweep(s, k_values, run_options(sweep_opts, err)), sweep_opts, out, err);
      return 0;
    }
    if (*bp) {
      const auto s = load(bp_opts);
      const auto result = ccmavf::run_trial_weights(s, bp_trial);
      std::vector<double> grid;
      for (int k = 1; k * bp_step < 180.0 - 1e-9; ++k) grid.push_back(k * bp_step);
      std::string csv = "doa_deg";
      std::vector<std::vector<double>> patterns;
      for (std::size_t b = 0; b < result.labels.size(); ++b) {
        csv += "," + result.labels[b] + "_dB";
        patterns.push_back(ccmavf::beampattern(result.weights[b], s.geometry, grid));
      }
      csv += '\n';
      char buf[64];
      for (std::size_t g = 0; g < grid.size(); ++g) {
        std::snprintf(buf, sizeof buf, "%.6f", grid[g]);
        csv += buf;
        for (const auto& p : patterns) {
          std::snprintf(buf, sizeof buf, ",%.6f", p[g]);
          csv += buf;
        }
        csv += '\n';
      }
      if (bp_opts.out.empty()) {
        out << csv;
      } else {
        write_text(bp_opts.out, csv);
      }
      if (!bp_opts.quiet) {
        err << "trial " << bp_trial << " source DOAs:";
        for (double d : result.truth.doas_deg) err << ' ' << d;
        err << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace beamform
