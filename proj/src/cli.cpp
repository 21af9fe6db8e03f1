#include "lhvsim/cli.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lhvsim/config.hpp"
#include "lhvsim/csv.hpp"
#include "lhvsim/errors.hpp"
#include "lhvsim/oracle.hpp"
#include "lhvsim/sweep.hpp"

namespace lhvsim::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A raw setting and where it came from (line 0: command line).
struct RawValue {
  std::string text;
  int line = 0;
};

[[noreturn]] void bad_value(const std::string& key, const RawValue& raw, const std::string& why) {
  const std::string msg = "invalid value '" + raw.text + "' for " + key + ": " + why;
  if (raw.line > 0) throw ParseError(raw.line, msg);
  throw UsageError(msg);
}

template <typename T>
T parse_number(const std::string& key, const RawValue& raw) {
  T value{};
  const char* first = raw.text.data();
  const char* last = first + raw.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) bad_value(key, raw, "not a number");
  return value;
}

std::array<double, 4> parse_angles(const std::string& key, const RawValue& raw) {
  std::array<double, 4> out{};
  std::size_t pos = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto comma = raw.text.find(',', pos);
    if ((comma == std::string::npos) != (i == out.size() - 1)) {
      bad_value(key, raw, "expected four comma-separated angles a,b,a2,b2");
    }
    const std::string part = raw.text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out[i] = parse_number<double>(key, RawValue{part, raw.line});
    pos = comma + 1;
  }
  return out;
}

// Resolved run configuration. Values not set by flag or file keep defaults.
struct Settings {
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> pairs;
  double decoherence = 0.0;
  double threshold = 0.0;
  double alpha_deg = 0.0;
  double beta_deg = 0.0;
  double alpha_step_deg = 1.8;
  std::array<double, 4> angles_deg{0.0, 22.5, 45.0, 67.5};
  std::string metric;
  int d_steps = 51;
  int t_steps = 51;
  std::string out;
  unsigned threads = 0;
  double quad_tol = 1e-4;
  int quad_max_subdivisions = 256;
};

void apply(Settings& s, const std::string& key, const RawValue& raw) {
  if (key == "seed") {
    s.seed = parse_number<std::uint64_t>(key, raw);
  } else if (key == "pairs") {
    s.pairs = parse_number<std::uint64_t>(key, raw);
    if (*s.pairs == 0) bad_value(key, raw, "must be positive");
  } else if (key == "decoherence") {
    s.decoherence = parse_number<double>(key, raw);
    if (!(s.decoherence >= 0.0 && s.decoherence <= 1.0)) bad_value(key, raw, "must lie in [0, 1]");
  } else if (key == "threshold") {
    s.threshold = parse_number<double>(key, raw);
    if (!(s.threshold >= 0.0 && s.threshold <= 0.5)) bad_value(key, raw, "must lie in [0, 0.5]");
  } else if (key == "alpha-deg") {
    s.alpha_deg = parse_number<double>(key, raw);
  } else if (key == "beta-deg") {
    s.beta_deg = parse_number<double>(key, raw);
  } else if (key == "alpha-step-deg") {
    s.alpha_step_deg = parse_number<double>(key, raw);
    if (!(s.alpha_step_deg > 0.0 && s.alpha_step_deg <= 180.0)) bad_value(key, raw, "must lie in (0, 180]");
  } else if (key == "angles-deg") {
    s.angles_deg = parse_angles(key, raw);
  } else if (key == "metric") {
    s.metric = raw.text;
  } else if (key == "d-steps") {
    s.d_steps = parse_number<int>(key, raw);
    if (s.d_steps < 1) bad_value(key, raw, "must be >= 1");
  } else if (key == "t-steps") {
    s.t_steps = parse_number<int>(key, raw);
    if (s.t_steps < 1) bad_value(key, raw, "must be >= 1");
  } else if (key == "out") {
    s.out = raw.text;
  } else if (key == "threads") {
    s.threads = parse_number<unsigned>(key, raw);
  } else if (key == "quad-tol") {
    s.quad_tol = parse_number<double>(key, raw);
    if (!(s.quad_tol > 0.0)) bad_value(key, raw, "must be positive");
  } else if (key == "quad-max-subdivisions") {
    s.quad_max_subdivisions = parse_number<int>(key, raw);
    if (s.quad_max_subdivisions < 1) bad_value(key, raw, "must be >= 1");
  }
}

struct Command {
  std::string name;
  std::string description;
  std::vector<std::string> keys;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"pair-trace", "Emit hidden variables and outcomes of individual pairs",
       {"seed", "pairs", "decoherence", "threshold", "alpha-deg", "beta-deg", "out"}},
      {"correlation", "Scan polarizer one over [0, 180) degrees and tabulate coincidences",
       {"seed", "pairs", "decoherence", "threshold", "beta-deg", "alpha-step-deg", "out"}},
      {"chsh", "One CHSH datapoint at four analyzer angles",
       {"seed", "pairs", "decoherence", "threshold", "angles-deg", "out"}},
      {"sweep", "Metric matrix over the decoherence x threshold grid",
       {"seed", "pairs", "metric", "d-steps", "t-steps", "threshold", "beta-deg", "alpha-step-deg",
        "angles-deg", "threads", "out"}},
      {"oracle", "Exact model probabilities by quadrature",
       {"decoherence", "threshold", "beta-deg", "alpha-step-deg", "angles-deg", "metric", "quad-tol",
        "quad-max-subdivisions", "out"}},
  };
  return table;
}

std::string real_text(double v) { return fmt::format("{}", v); }

std::string setting_text(const Settings& s, const std::string& key) {
  if (key == "seed") return std::to_string(s.seed);
  if (key == "pairs") return std::to_string(s.pairs.value_or(0));
  if (key == "decoherence") return real_text(s.decoherence);
  if (key == "threshold") return real_text(s.threshold);
  if (key == "alpha-deg") return real_text(s.alpha_deg);
  if (key == "beta-deg") return real_text(s.beta_deg);
  if (key == "alpha-step-deg") return real_text(s.alpha_step_deg);
  if (key == "angles-deg") {
    return fmt::format("{},{},{},{}", s.angles_deg[0], s.angles_deg[1], s.angles_deg[2], s.angles_deg[3]);
  }
  if (key == "metric") return s.metric;
  if (key == "d-steps") return std::to_string(s.d_steps);
  if (key == "t-steps") return std::to_string(s.t_steps);
  if (key == "out") return s.out;
  if (key == "threads") return std::to_string(s.threads);
  if (key == "quad-tol") return real_text(s.quad_tol);
  if (key == "quad-max-subdivisions") return std::to_string(s.quad_max_subdivisions);
  return {};
}

ExperimentConfig experiment(const Settings& s, std::uint64_t default_pairs) {
  ExperimentConfig cfg;
  cfg.pairs_per_setting = s.pairs.value_or(default_pairs);
  cfg.noise = NoiseConfig(s.decoherence);
  cfg.threshold = s.threshold;
  cfg.beta = Angle::from_degrees(s.beta_deg);
  cfg.alpha_step = degrees_to_radians(s.alpha_step_deg);
  cfg.master_seed = s.seed;
  cfg.validate();
  return cfg;
}

ChshAngles chsh_angles(const Settings& s) {
  return {Angle::from_degrees(s.angles_deg[0]), Angle::from_degrees(s.angles_deg[1]),
          Angle::from_degrees(s.angles_deg[2]), Angle::from_degrees(s.angles_deg[3])};
}

std::vector<std::string> chsh_cells(const ChshResult& r) {
  using io::format_real;
  return {format_real(r.e11), format_real(r.e12),     format_real(r.e21),
          format_real(r.e22), format_real(r.s_value), format_real(r.violation)};
}

void run_pair_trace(const Settings& s, io::RunManifest& m, std::ostream& out) {
  const std::uint64_t n = s.pairs.value_or(10);
  const NoiseConfig noise(s.decoherence);
  const AnalyzerConfig analyzer_a(Angle::from_degrees(s.alpha_deg), s.threshold);
  const AnalyzerConfig analyzer_b(Angle::from_degrees(s.beta_deg), s.threshold);
  RandomStream rng(s.seed);
  io::write_manifest(out, m);
  io::write_row(out, {"pair", "phase_deg", "phi1_deg", "phi2_deg", "a", "b"});
  for (std::uint64_t i = 0; i < n; ++i) {
    const PhotonPair emitted = emit_pair(rng);
    const PhotonPair pair = apply_decoherence(emitted, noise, rng);
    const PairOutcome o = measure_pair(pair, analyzer_a, analyzer_b);
    io::write_row(out, {std::to_string(i), io::format_real(emitted.phi1.degrees()),
                        io::format_real(pair.phi1.degrees()), io::format_real(pair.phi2.degrees()),
                        to_string(o.a), to_string(o.b)});
  }
}

void run_correlation(const Settings& s, io::RunManifest& m, std::ostream& out) {
  const ExperimentConfig cfg = experiment(s, 2000);
  const CorrelationCurve curve = correlation_scan(cfg);
  std::optional<double> vis;
  try {
    vis = visibility(curve);
  } catch (const AllZeroCounts&) {
  }
  m.results = {{"visibility", io::format_cell(vis)}, {"efficiency", io::format_real(efficiency(curve))}};
  io::write_manifest(out, m);
  io::write_row(out, {"alpha_deg", "n_pp", "n_pm", "n_mp", "n_mm", "n_lost", "n_total", "f_pp"});
  for (std::size_t k = 0; k < curve.alphas.size(); ++k) {
    const CoincidenceCounts& c = curve.counts[k];
    io::write_row(out, {io::format_real(curve.alphas[k].degrees()), std::to_string(c.n_pp),
                        std::to_string(c.n_pm), std::to_string(c.n_mp), std::to_string(c.n_mm),
                        std::to_string(c.n_lost), std::to_string(c.n_total),
                        io::format_real(static_cast<double>(c.n_pp) / static_cast<double>(c.n_total))});
  }
}

void run_chsh(const Settings& s, io::RunManifest& m, std::ostream& out) {
  const ExperimentConfig cfg = experiment(s, 10000);
  const std::uint64_t n = s.pairs.value_or(10000);
  const ChshResult r = chsh(cfg, chsh_angles(s), n);
  io::write_manifest(out, m);
  io::write_row(out, {"a_deg", "b_deg", "a2_deg", "b2_deg", "pairs", "e11", "e12", "e21", "e22", "s",
                      "violation"});
  std::vector<std::string> row;
  for (double a : s.angles_deg) row.push_back(io::format_real(a));
  row.push_back(std::to_string(n));
  for (auto& cell : chsh_cells(r)) row.push_back(std::move(cell));
  io::write_row(out, row);
}

void run_sweep_command(const Settings& s, io::RunManifest& m, std::ostream& out) {
  const std::string metric_name = s.metric.empty() ? "visibility" : s.metric;
  const sweep::Metric metric = sweep::parse_metric(metric_name);
  sweep::SweepSpec spec;
  spec.d_axis = {0.0, 1.0, s.d_steps};
  spec.t_axis = {0.0, 0.5, s.t_steps};
  spec.metrics = {metric};
  spec.base_config = experiment(s, 2000);
  spec.chsh_pairs = s.pairs.value_or(10000);
  spec.angles = chsh_angles(s);
  spec.threads = s.threads;

  if (metric == sweep::Metric::correlation) {
    const sweep::CorrelationSurface surface = sweep::correlation_surface(spec);
    sweep::MetricGrid grid(surface.d_values.size(), surface.alphas.size());
    std::vector<double> alphas_deg;
    for (const Angle& a : surface.alphas) alphas_deg.push_back(a.degrees());
    for (std::size_t i = 0; i < grid.rows; ++i) {
      for (std::size_t k = 0; k < grid.cols; ++k) grid.set(i, k, surface.frequency(i, k));
    }
    io::write_manifest(out, m);
    io::write_matrix(out, "decoherence\\alpha_deg", surface.d_values, alphas_deg, grid);
    return;
  }
  const sweep::GridResult result = sweep::run_sweep(spec);
  io::write_manifest(out, m);
  io::write_matrix(out, "decoherence\\threshold", result.d_values, result.t_values, result.grid(metric));
}

void run_oracle(const Settings& s, io::RunManifest& m, std::ostream& out) {
  const QuadratureSpec quad{s.quad_tol, s.quad_max_subdivisions};
  quad.validate();
  const std::string metric_name = s.metric.empty() ? "correlation" : s.metric;
  const sweep::Metric metric = sweep::parse_metric(metric_name);
  const ExperimentConfig cfg = experiment(s, 1);
  const std::string d = io::format_real(s.decoherence);
  const std::string t = io::format_real(s.threshold);

  switch (metric) {
    case sweep::Metric::correlation: {
      const auto scan = oracle::oracle_scan(cfg, quad);
      io::write_manifest(out, m);
      io::write_row(out, {"alpha_deg", "p_pp", "p_pm", "p_mp", "p_mm", "p_lost", "p_pp_ideal"});
      for (std::size_t k = 0; k < scan.size(); ++k) {
        const Angle alpha = cfg.alpha_at(k);
        const auto& p = scan[k];
        io::write_row(out, {io::format_real(alpha.degrees()), io::format_real(p.pp), io::format_real(p.pm),
                            io::format_real(p.mp), io::format_real(p.mm), io::format_real(p.lost),
                            io::format_real(oracle::ideal_coincidence_probability(alpha, cfg.beta))});
      }
      return;
    }
    case sweep::Metric::efficiency: {
      const double eff = oracle::oracle_efficiency(s.threshold, s.decoherence, quad);
      io::write_manifest(out, m);
      io::write_row(out, {"decoherence", "threshold", "efficiency"});
      io::write_row(out, {d, t, io::format_real(eff)});
      return;
    }
    case sweep::Metric::visibility: {
      std::optional<double> vis;
      try {
        vis = oracle::oracle_visibility(cfg, quad);
      } catch (const AllZeroCounts&) {
      }
      io::write_manifest(out, m);
      io::write_row(out, {"decoherence", "threshold", "visibility"});
      io::write_row(out, {d, t, io::format_cell(vis)});
      return;
    }
    case sweep::Metric::violation: {
      const ChshResult r = oracle::oracle_chsh(s.threshold, s.decoherence, chsh_angles(s), quad);
      io::write_manifest(out, m);
      io::write_row(out, {"decoherence", "threshold", "e11", "e12", "e21", "e22", "s", "violation"});
      std::vector<std::string> row{d, t};
      for (auto& cell : chsh_cells(r)) row.push_back(std::move(cell));
      io::write_row(out, row);
      return;
    }
  }
}

std::uint64_t default_pairs(const std::string& command, const std::string& metric) {
  if (command == "pair-trace") return 10;
  if (command == "chsh") return 10000;
  if (command == "sweep" && metric == "violation") return 10000;
  return 2000;
}

int dispatch(const Command& cmd, Settings s, std::ostream& out) {
  if (!s.pairs) s.pairs = default_pairs(cmd.name, s.metric);
  io::RunManifest manifest;
  manifest.command = cmd.name;
  manifest.master_seed = s.seed;
  manifest.timestamp = io::iso8601_utc_now();
  for (const auto& key : cmd.keys) {
    // Neither the destination nor the worker count changes the data.
    if (key == "out" || key == "threads") continue;
    manifest.config.emplace_back(key, setting_text(s, key));
  }

  std::ostringstream buffer;
  if (cmd.name == "pair-trace") {
    run_pair_trace(s, manifest, buffer);
  } else if (cmd.name == "correlation") {
    run_correlation(s, manifest, buffer);
  } else if (cmd.name == "chsh") {
    run_chsh(s, manifest, buffer);
  } else if (cmd.name == "sweep") {
    run_sweep_command(s, manifest, buffer);
  } else {
    run_oracle(s, manifest, buffer);
  }

  if (s.out.empty()) {
    out << buffer.str();
    return kExitOk;
  }
  std::ofstream file(s.out, std::ios::binary);
  file << buffer.str();
  if (!file.flush()) throw Error("cannot write " + s.out);
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local hidden-variable EPR photon-pair simulator"};
  app.name(std::string(io::kToolName));
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kToolVersion));

  // Stable storage for every subcommand's raw option text.
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::string> config_paths;
  for (const Command& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
    auto& slots = raw[cmd.name];
    for (const auto& key : cmd.keys) sub->add_option("--" + key, slots[key]);
    sub->add_option("--config", config_paths[cmd.name], "Plain-text 'key = value' file; flags win");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const auto cmd_it = std::find_if(commands().begin(), commands().end(),
                                   [&](const Command& c) { return c.name == sub->get_name(); });
  const Command& cmd = *cmd_it;

  Settings settings;
  try {
    std::map<std::string, ConfigEntry> file;
    const std::string& config_path = config_paths[cmd.name];
    if (!config_path.empty()) file = load_config(config_path);
    for (const auto& key : cmd.keys) {
      if (sub->get_option("--" + key)->count() > 0) {
        apply(settings, key, RawValue{raw[cmd.name][key], 0});
      } else if (const auto it = file.find(key); it != file.end()) {
        apply(settings, key, RawValue{it->second.value, it->second.line});
      }
    }
  } catch (const ParseError& e) {
    err << "error: " << config_paths[cmd.name] << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnknownKey& e) {
    err << "error: " << config_paths[cmd.name] << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    return dispatch(cmd, settings, out);
  } catch (const UnknownMetric& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace lhvsim::cli
