// SPDX-License-Identifier: Apache-2.0

#include "ccmavf/scenario.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ccmavf/errors.hpp"

namespace ccmavf {

namespace {

struct KindName {
  BeamformerKind kind;
  std::string_view label;
};

constexpr std::array<KindName, 7> kKinds{{
    {BeamformerKind::CcmAvf, "CCM-AVF"},
    {BeamformerKind::CmvAvf, "CMV-AVF"},
    {BeamformerKind::CcmSg, "CCM-SG"},
    {BeamformerKind::CmvSg, "CMV-SG"},
    {BeamformerKind::CcmRls, "CCM-RLS"},
    {BeamformerKind::CmvRls, "CMV-RLS"},
    {BeamformerKind::Mvdr, "MVDR"},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = value.find(',');
    out.push_back(trim(value.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

class LineError {
 public:
  LineError(int line, std::string_view key) : line_(line), key_(key) {}
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("scenario line " + std::to_string(line_) + " (" + key_ + "): " + what);
  }

 private:
  int line_;
  std::string key_;
};

double to_double(std::string_view text, const LineError& err) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    err.fail("expected a decimal number, got '" + std::string(text) + "'");
  }
  return v;
}

std::int64_t to_int(std::string_view text, const LineError& err) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    err.fail("expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

int to_int32(std::string_view text, const LineError& err) {
  const auto v = to_int(text, err);
  if (v < -2147483647 || v > 2147483647) err.fail("integer out of range");
  return static_cast<int>(v);
}

bool to_bool(std::string_view text, const LineError& err) {
  if (iequals(text, "true") || text == "1") return true;
  if (iequals(text, "false") || text == "0") return false;
  err.fail("expected true or false, got '" + std::string(text) + "'");
}

std::vector<double> to_doubles(std::string_view text, const LineError& err) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (auto item : split_list(text)) out.push_back(to_double(item, err));
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

Scenario builtin_base() {
  Scenario s;
  s.geometry = ArrayGeometry{40, 0.5};
  s.soi_doa_deg = 90.0;
  s.soi_power = 1.0;
  s.interferers = InterfererPlacement{};
  s.interferer_powers = {1.0};
  s.noise_power = 1.0;  // SNR = 0 dB
  s.num_snapshots = 500;
  s.num_trials = 100;
  s.avf = AvfConfig{};
  s.master_seed = 1;
  return s;
}

using Setter = std::function<void(Scenario&, std::string_view, const LineError&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"name", [](Scenario& s, std::string_view v, const LineError&) { s.name = v; }},
      {"num_sensors",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.geometry.num_sensors = to_int32(v, e);
       }},
      {"spacing_ratio",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.geometry.spacing_ratio = to_double(v, e);
       }},
      {"soi_doa_deg",
       [](Scenario& s, std::string_view v, const LineError& e) { s.soi_doa_deg = to_double(v, e); }},
      {"soi_power",
       [](Scenario& s, std::string_view v, const LineError& e) { s.soi_power = to_double(v, e); }},
      {"interferer_doas_deg",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.interferers.fixed_doas_deg = to_doubles(v, e);
       }},
      {"num_interferers",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.interferers.count = to_int32(v, e);
       }},
      {"interferer_range_deg",
       [](Scenario& s, std::string_view v, const LineError& e) {
         const auto r = to_doubles(v, e);
         if (r.size() != 2) e.fail("expected two values: min, max");
         s.interferers.range_min_deg = r[0];
         s.interferers.range_max_deg = r[1];
       }},
      {"interferer_guard_deg",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.interferers.guard_deg = to_double(v, e);
       }},
      {"interferer_powers",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.interferer_powers = to_doubles(v, e);
       }},
      {"noise_power",
       [](Scenario& s, std::string_view v, const LineError& e) { s.noise_power = to_double(v, e); }},
      {"snr_db",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.noise_power = s.soi_power / std::pow(10.0, to_double(v, e) / 10.0);
       }},
      {"num_snapshots",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.num_snapshots = to_int32(v, e);
       }},
      {"num_trials",
       [](Scenario& s, std::string_view v, const LineError& e) { s.num_trials = to_int32(v, e); }},
      {"mismatch_deg",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.mismatch_deg = to_double(v, e);
       }},
      {"master_seed",
       [](Scenario& s, std::string_view v, const LineError& e) {
         const auto seed = to_int(v, e);
         if (seed < 0) e.fail("seed must be non-negative");
         s.master_seed = static_cast<std::uint64_t>(seed);
       }},
      {"beamformers",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.beamformers.clear();
         for (auto item : split_list(v)) {
           const auto kind = parse_beamformer_kind(item);
           if (!kind) e.fail("unknown beamformer '" + std::string(item) + "'");
           s.beamformers.push_back(*kind);
         }
       }},
      {"k_values",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.k_values.clear();
         if (trim(v).empty()) return;
         for (auto item : split_list(v)) s.k_values.push_back(to_int32(item, e));
       }},
      {"avf.mu0",
       [](Scenario& s, std::string_view v, const LineError& e) { s.avf.mu0 = to_double(v, e); }},
      {"avf.iterations",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.avf.max_iterations = to_int32(v, e);
       }},
      {"avf.exit_tolerance",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.avf.exit_tolerance = to_double(v, e);
       }},
      {"avf.modulus_target",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.avf.modulus_target = to_double(v, e);
       }},
      {"avf.refresh",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.avf.refresh_estimates = to_bool(v, e);
       }},
      {"avf.normalize",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.avf.normalize_auxiliary = to_bool(v, e);
       }},
      {"sg.step_size",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.baselines.sg_step_size = to_double(v, e);
       }},
      {"rls.forgetting_factor",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.baselines.rls_forgetting_factor = to_double(v, e);
       }},
      {"rls.diagonal_load",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.baselines.diagonal_load = to_double(v, e);
       }},
      {"cmv_avf.rank",
       [](Scenario& s, std::string_view v, const LineError& e) {
         s.baselines.cmv_avf_rank = to_int32(v, e);
       }},
  };
  return table;
}

}  // namespace

std::string_view beamformer_label(BeamformerKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.label;
  }
  return "?";
}

std::optional<BeamformerKind> parse_beamformer_kind(std::string_view text) {
  for (const auto& k : kKinds) {
    if (iequals(text, k.label)) return k.kind;
  }
  return std::nullopt;
}

void Scenario::validate() const {
  try {
    geometry.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!(soi_doa_deg > 0.0 && soi_doa_deg < 180.0)) throw ConfigError("soi_doa_deg must lie in (0, 180)");
  const double presumed = soi_doa_deg + mismatch_deg;
  if (!(presumed > 0.0 && presumed < 180.0)) {
    throw ConfigError("presumed SOI DOA (soi_doa_deg + mismatch_deg) must lie in (0, 180)");
  }
  if (!(soi_power > 0.0)) throw ConfigError("soi_power must be positive");
  if (!(noise_power >= 0.0)) throw ConfigError("noise_power must be non-negative");
  if (num_snapshots < 1) throw ConfigError("num_snapshots must be at least 1");
  if (num_trials < 1) throw ConfigError("num_trials must be at least 1");
  if (beamformers.empty()) throw ConfigError("no beamformers configured");

  const int q_i = interferers.num_interferers();
  if (q_i < 0) throw ConfigError("num_interferers must be non-negative");
  if (q_i > 0) {
    if (interferer_powers.size() != 1 && static_cast<int>(interferer_powers.size()) != q_i) {
      throw ConfigError("interferer_powers needs one value or one per interferer");
    }
    for (double p : interferer_powers) {
      if (!(p > 0.0)) throw ConfigError("interferer powers must be positive");
    }
  }
  if (interferers.is_random() && q_i > 0) {
    const auto& ip = interferers;
    if (!(ip.range_min_deg > 0.0 && ip.range_max_deg < 180.0 && ip.range_min_deg < ip.range_max_deg)) {
      throw ConfigError("interferer_range_deg must be an increasing pair inside (0, 180)");
    }
    if (!(ip.guard_deg >= 0.0)) throw ConfigError("interferer_guard_deg must be non-negative");
    const double lo = std::max(ip.range_min_deg, soi_doa_deg - ip.guard_deg);
    const double hi = std::min(ip.range_max_deg, soi_doa_deg + ip.guard_deg);
    const double excluded = hi > lo ? hi - lo : 0.0;
    if (excluded >= ip.range_max_deg - ip.range_min_deg) {
      throw ConfigError("guard interval around the SOI covers the whole interferer range");
    }
  }
  for (double d : interferers.fixed_doas_deg) {
    if (!(d > 0.0 && d < 180.0)) throw ConfigError("interferer DOAs must lie in (0, 180)");
    if (d == soi_doa_deg) throw ConfigError("an interferer shares the SOI DOA");
  }
  avf.validate();
  if (!(baselines.sg_step_size >= 0.0)) throw ConfigError("sg.step_size must be non-negative");
  if (!(baselines.rls_forgetting_factor > 0.0 && baselines.rls_forgetting_factor <= 1.0)) {
    throw ConfigError("rls.forgetting_factor must lie in (0, 1]");
  }
  if (!(baselines.diagonal_load >= 0.0)) throw ConfigError("rls.diagonal_load must be non-negative");
  if (baselines.cmv_avf_rank < 1) throw ConfigError("cmv_avf.rank must be at least 1");
  for (int k : k_values) {
    if (k < 1) throw ConfigError("k_values entries must be at least 1");
  }
}

std::vector<std::string> builtin_scenario_names() { return {"fig1a", "fig1b", "fig2"}; }

std::optional<Scenario> builtin_scenario(std::string_view name) {
  using K = BeamformerKind;
  if (name == "fig1a" || name == "fig1b") {
    Scenario s = builtin_base();
    s.name = std::string(name);
    s.mismatch_deg = name == "fig1b" ? 1.0 : 0.0;
    s.beamformers = {K::CmvSg, K::CcmSg, K::CmvRls, K::CcmRls, K::CmvAvf, K::CcmAvf, K::Mvdr};
    return s;
  }
  if (name == "fig2") {
    Scenario s = builtin_base();
    s.name = "fig2";
    s.beamformers = {K::CcmAvf, K::CmvAvf};
    s.k_values = {1, 2, 3, 4, 5, 6, 7, 8};
    return s;
  }
  return std::nullopt;
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  bool saw_setting = false;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("scenario line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const LineError err(line_no, key);
    if (key == "base") {
      if (saw_setting) err.fail("base must come before any other setting");
      auto base = builtin_scenario(value);
      if (!base) err.fail("unknown builtin scenario '" + std::string(value) + "'");
      s = *base;
      saw_setting = true;
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) err.fail("unknown key");
    it->second(s, value, err);
    saw_setting = true;
  }
  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read scenario file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Scenario resolve_scenario(const std::string& name_or_path) {
  if (auto s = builtin_scenario(name_or_path)) return *s;
  return load_scenario_file(name_or_path);
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "name = " << s.name << '\n'
      << "num_sensors = " << s.geometry.num_sensors << '\n'
      << "spacing_ratio = " << format_double(s.geometry.spacing_ratio) << '\n'
      << "soi_doa_deg = " << format_double(s.soi_doa_deg) << '\n'
      << "soi_power = " << format_double(s.soi_power) << '\n'
      << "interferer_doas_deg = " << join_doubles(s.interferers.fixed_doas_deg) << '\n'
      << "num_interferers = " << s.interferers.count << '\n'
      << "interferer_range_deg = " << format_double(s.interferers.range_min_deg) << ", "
      << format_double(s.interferers.range_max_deg) << '\n'
      << "interferer_guard_deg = " << format_double(s.interferers.guard_deg) << '\n'
      << "interferer_powers = " << join_doubles(s.interferer_powers) << '\n'
      << "noise_power = " << format_double(s.noise_power) << '\n'
      << "num_snapshots = " << s.num_snapshots << '\n'
      << "num_trials = " << s.num_trials << '\n'
      << "mismatch_deg = " << format_double(s.mismatch_deg) << '\n'
      << "master_seed = " << s.master_seed << '\n';
  out << "beamformers = ";
  for (std::size_t i = 0; i < s.beamformers.size(); ++i) {
    out << (i ? ", " : "") << beamformer_label(s.beamformers[i]);
  }
  out << '\n' << "k_values = ";
  for (std::size_t i = 0; i < s.k_values.size(); ++i) out << (i ? ", " : "") << s.k_values[i];
  out << '\n'
      << "avf.mu0 = " << format_double(s.avf.mu0) << '\n'
      << "avf.iterations = " << s.avf.max_iterations << '\n'
      << "avf.exit_tolerance = " << format_double(s.avf.exit_tolerance) << '\n'
      << "avf.modulus_target = " << format_double(s.avf.modulus_target) << '\n'
      << "avf.refresh = " << (s.avf.refresh_estimates ? "true" : "false") << '\n'
      << "avf.normalize = " << (s.avf.normalize_auxiliary ? "true" : "false") << '\n'
      << "sg.step_size = " << format_double(s.baselines.sg_step_size) << '\n'
      << "rls.forgetting_factor = " << format_double(s.baselines.rls_forgetting_factor) << '\n'
      << "rls.diagonal_load = " << format_double(s.baselines.diagonal_load) << '\n'
      << "cmv_avf.rank = " << s.baselines.cmv_avf_rank << '\n';
  return out.str();
}

std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_scenario(s)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SourceSet draw_sources(const Scenario& s, Rng& rng) {
  SourceSet src;
  src.doas_deg.push_back(s.soi_doa_deg);
  src.powers.push_back(s.soi_power);
  const int q_i = s.interferers.num_interferers();
  auto power_of = [&](int k) {
    return s.interferer_powers.size() == 1 ? s.interferer_powers[0]
                                           : s.interferer_powers[static_cast<std::size_t>(k)];
  };
  if (!s.interferers.is_random()) {
    for (int k = 0; k < q_i; ++k) {
      src.doas_deg.push_back(s.interferers.fixed_doas_deg[static_cast<std::size_t>(k)]);
      src.powers.push_back(power_of(k));
    }
    return src;
  }
  std::uniform_real_distribution<double> doa(s.interferers.range_min_deg,
                                             s.interferers.range_max_deg);
  for (int k = 0; k < q_i; ++k) {
    double d = 0.0;
    do {
      d = doa(rng);
    } while (std::abs(d - s.soi_doa_deg) <= s.interferers.guard_deg ||
             std::find(src.doas_deg.begin(), src.doas_deg.end(), d) != src.doas_deg.end() ||
             !(d > 0.0 && d < 180.0));
    src.doas_deg.push_back(d);
    src.powers.push_back(power_of(k));
  }
  return src;
}

}  // namespace ccmavf
