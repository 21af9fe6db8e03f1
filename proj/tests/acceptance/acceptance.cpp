// Acceptance suite: one line per criterion, exit status 0 only if every
// selected criterion passes. Usage: lhvsim_acceptance [criterion ...]

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "lhvsim/analysis.hpp"
#include "lhvsim/csv.hpp"
#include "lhvsim/oracle.hpp"
#include "lhvsim/sweep.hpp"
#include "support/run_cli.hpp"
#include "support/stats.hpp"

using namespace lhvsim;
using lhvsim::testing::run_cli;
using lhvsim::testing::split_csv;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Verdict()> run;
};

Verdict ideal_sawtooth() {
  const auto r = run_cli({"correlation", "--decoherence", "0", "--threshold", "0", "--pairs", "10000"});
  if (r.code != 0) return {false, "cli exit " + std::to_string(r.code) + ": " + r.err};
  const auto rows = io::data_rows(r.out);
  if (rows.size() != 101) return {false, fmt::format("{} data rows, expected 100", rows.size() - 1)};
  int outside = 0;
  double worst = 0.0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto cells = split_csv(rows[k]);
    const double n = std::stod(cells[6]);
    const double f = std::stod(cells[1]) / n;
    const double p = oracle::ideal_coincidence_probability(Angle((k - 1) * kPi / 100.0), Angle{});
    const double sigma = std::max(testing::binomial_sigma(p, n), 0.5 / n);
    worst = std::max(worst, std::abs(f - p) / sigma);
    if (!testing::within_sigma(f, p, n, 4.0)) ++outside;
  }
  return {outside == 0, fmt::format("100 settings, {} outside 4 sigma, worst {:.2f} sigma", outside, worst)};
}

Verdict kill_switch() {
  std::uint64_t detected_photons = 0;
  std::uint64_t pairs = 0;
  double worst_efficiency = 0.0;
  for (double d : {0.0, 0.5, 1.0}) {
    RandomStream rng = derive_stream(3, {static_cast<std::uint64_t>(d * 10)});
    const AnalyzerConfig a(Angle{}, 0.5);
    const AnalyzerConfig b(Angle(0.4), 0.5);
    for (int i = 0; i < 20'000; ++i, ++pairs) {
      const PhotonPair p = apply_decoherence(emit_pair(rng), NoiseConfig(d), rng);
      const PairOutcome o = measure_pair(p, a, b);
      detected_photons += (o.a != Channel::Undetected) + (o.b != Channel::Undetected);
    }
    ExperimentConfig cfg;
    cfg.noise = NoiseConfig(d);
    cfg.threshold = 0.5;
    cfg.pairs_per_setting = 500;
    worst_efficiency = std::max(worst_efficiency, efficiency(correlation_scan(cfg)));
  }
  return {detected_photons == 0 && worst_efficiency == 0.0,
          fmt::format("{} pairs traced, {} photons detected; scan efficiency {}", pairs, detected_photons,
                      worst_efficiency)};
}

Verdict efficiency_anchor() {
  // 10^5 pairs spread evenly over the standard polarizer-one scan.
  ExperimentConfig cfg;
  cfg.threshold = 0.1;
  cfg.pairs_per_setting = 1000;
  const double anchor = efficiency(correlation_scan(cfg));
  const bool anchor_ok = std::abs(anchor - 0.80) <= 0.03;

  sweep::SweepSpec spec;
  spec.d_axis = {0.0, 1.0, 6};
  spec.t_axis = {0.0, 0.5, 6};
  spec.metrics = {sweep::Metric::efficiency};
  const auto grid = sweep::run_sweep(spec);
  const double n = static_cast<double>(spec.base_config.pairs_per_setting * spec.base_config.setting_count());
  int outside = 0;
  double worst = 0.0;
  double worst_matched = 0.0;  // oracle pooled over the scan's own settings, reported only
  for (std::size_t i = 0; i < grid.d_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.t_values.size(); ++j) {
      const double mc = *grid.grid(sweep::Metric::efficiency).at(i, j);
      const double p = oracle::oracle_efficiency(grid.t_values[j], grid.d_values[i]);
      const double sigma = std::max(testing::binomial_sigma(p, n), 0.5 / n);
      worst = std::max(worst, std::abs(mc - p) / sigma);
      if (!testing::within_sigma(mc, p, n, 4.0)) ++outside;

      ExperimentConfig cell = spec.base_config;
      cell.noise = NoiseConfig(grid.d_values[i]);
      cell.threshold = grid.t_values[j];
      double matched = 0.0;
      const auto scan = oracle::oracle_scan(cell);
      for (const auto& c : scan) matched += c.coincidences();
      matched /= static_cast<double>(scan.size());
      worst_matched = std::max(worst_matched, std::abs(mc - matched) / sigma);
    }
  }
  return {anchor_ok && outside == 0,
          fmt::format("efficiency(d=0, ds=0.1) = {:.4f} (target 0.80 +- 0.03, oracle {:.4f}) [{}]; "
                      "6x6 MC vs oracle_efficiency: {} cells outside 4 sigma, worst {:.2f} sigma "
                      "(vs oracle on the scan settings: worst {:.2f} sigma)",
                      anchor, oracle::oracle_efficiency(0.1, 0.0), anchor_ok ? "ok" : "MISS", outside, worst,
                      worst_matched)};
}

Verdict visibility_anchor() {
  const auto r = run_cli({"correlation", "--decoherence", "0.2", "--threshold", "0.13"});
  if (r.code != 0) return {false, "cli exit " + std::to_string(r.code)};
  ExperimentConfig cfg;
  cfg.noise = NoiseConfig(0.2);
  cfg.threshold = 0.13;
  const double v = visibility(correlation_scan(cfg));
  const bool cli_agrees = r.out.find("# result visibility: " + io::format_real(v)) != std::string::npos;
  return {v >= 0.93 && cli_agrees, fmt::format("visibility = {:.4f} (>= 0.93; exact oracle {:.4f})", v,
                                               oracle::oracle_visibility(cfg))};
}

Verdict visibility_coverage() {
  sweep::SweepSpec spec;  // 51 x 51, 2000 pairs per setting
  spec.metrics = {sweep::Metric::visibility};
  const auto grid = sweep::run_sweep(spec);
  const double f = sweep::fraction_above(grid, sweep::Metric::visibility, 0.99);
  std::size_t ok = 0;
  for (auto s : grid.grid(sweep::Metric::visibility).status) ok += s == sweep::CellStatus::ok;
  return {std::abs(f - 0.25) <= 0.08,
          fmt::format("51x51 grid, {} defined cells, fraction above 0.99 = {:.4f} (target 0.25 +- 0.08)", ok, f)};
}

Verdict chsh_limits() {
  ExperimentConfig ideal;
  const double s_ideal = chsh(ideal).s_value;
  double worst_decohered = 0.0;
  double worst_oracle_decohered = 0.0;
  for (double t : {0.0, 0.1, 0.3}) {
    ExperimentConfig cfg;
    cfg.noise = NoiseConfig(1.0);
    cfg.threshold = t;
    worst_decohered = std::max(worst_decohered, std::abs(chsh(cfg).s_value));
    worst_oracle_decohered = std::max(worst_oracle_decohered, std::abs(oracle::oracle_chsh(t, 1.0).s_value));
  }
  const double o_ideal = oracle::oracle_chsh(0.0, 0.0).s_value;
  const bool pass = std::abs(s_ideal - 2.0) <= 0.06 && worst_decohered <= 0.1 &&
                    std::abs(o_ideal - 2.0) <= 1e-3 && worst_oracle_decohered <= 1e-3;
  return {pass, fmt::format("MC S(0,0) = {:.4f}, max |MC S(d=1)| = {:.4f}; oracle S(0,0) = {:.6f}, "
                            "max |oracle S(d=1)| = {:.2e}",
                            s_ideal, worst_decohered, o_ideal, worst_oracle_decohered)};
}

Verdict violation_range() {
  sweep::SweepSpec spec;  // 51 x 51, 10000 pairs per CHSH term
  spec.metrics = {sweep::Metric::violation};
  const auto grid = sweep::run_sweep(spec);
  double max_violation = 0.0;
  for (std::size_t i = 0; i < grid.d_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.t_values.size(); ++j) {
      if (grid.t_values[j] <= 0.2) continue;
      if (const auto v = grid.grid(sweep::Metric::violation).at(i, j)) max_violation = std::max(max_violation, *v);
    }
  }
  std::vector<double> probe;
  bool monotone = true;
  for (int k = 0; k < 6; ++k) {
    const double d = 0.05 + 0.19 * k;
    probe.push_back(oracle::oracle_chsh(0.25, d).violation);
    if (k > 0 && probe[k] > probe[k - 1] + 1e-9) monotone = false;
  }
  return {max_violation > 1.5 && monotone,
          fmt::format("max violation (ds > 0.2) = {:.4f} (> 1.5); oracle violation at ds=0.25 for "
                      "d=0.05..1.0: {:.4f} {:.4f} {:.4f} {:.4f} {:.4f} {:.4f} ({})",
                      max_violation, probe[0], probe[1], probe[2], probe[3], probe[4], probe[5],
                      monotone ? "non-increasing" : "NOT monotone")};
}

Verdict determinism() {
  const std::vector<std::vector<std::string>> commands = {
      {"sweep", "--seed", "11", "--metric", "visibility", "--d-steps", "11", "--t-steps", "11", "--pairs", "500"},
      {"sweep", "--seed", "11", "--metric", "violation", "--d-steps", "11", "--t-steps", "11", "--pairs", "2000"},
      {"sweep", "--seed", "11", "--metric", "correlation", "--d-steps", "11", "--pairs", "500"},
  };
  int compared = 0;
  for (const auto& base : commands) {
    std::vector<std::string> reference;
    for (const char* threads : {"1", "2", "8"}) {
      auto args = base;
      args.insert(args.end(), {"--threads", threads});
      const auto r = run_cli(args);
      if (r.code != 0) return {false, "cli exit " + std::to_string(r.code) + ": " + r.err};
      const auto rows = io::data_rows(r.out);
      if (reference.empty()) {
        reference = rows;
      } else if (rows != reference) {
        return {false, fmt::format("{} differs with {} threads", base[4], threads)};
      }
      ++compared;
    }
  }
  const auto a = io::data_rows(run_cli({"correlation", "--seed", "4", "--decoherence", "0.3"}).out);
  const auto b = io::data_rows(run_cli({"correlation", "--seed", "4", "--decoherence", "0.3"}).out);
  return {a == b, fmt::format("{} sweep runs over 1/2/8 threads byte-identical; repeated correlation {}",
                              compared, a == b ? "identical" : "DIFFERS")};
}

Verdict oracle_consistency() {
  std::mt19937_64 gen(2718);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_sum = 0.0;
  double worst_shift = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Angle a(angle(gen));
    const Angle b(angle(gen));
    const double t = 0.5 * unit(gen);
    const double d = unit(gen);
    const double shift = angle(gen);
    const auto p = oracle::outcome_probabilities(a, b, t, d);
    const auto q = oracle::outcome_probabilities(a + shift, b + shift, t, d);
    worst_sum = std::max(worst_sum, std::abs(p.sum() - 1.0));
    for (auto [x, y] : {std::pair{p.pp, q.pp}, {p.pm, q.pm}, {p.mp, q.mp}, {p.mm, q.mm}, {p.lost, q.lost}}) {
      worst_shift = std::max(worst_shift, std::abs(x - y));
    }
  }
  return {worst_sum <= 1e-4 && worst_shift <= 1e-6,
          fmt::format("50 draws: max |sum - 1| = {:.2e} (<= 1e-4), max shift change = {:.2e} (<= 1e-6)",
                      worst_sum, worst_shift)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "ideal sawtooth", 5.0, ideal_sawtooth},
      {2, "threshold 0.5 kill switch", 1.0, kill_switch},
      {3, "efficiency anchor", 30.0, efficiency_anchor},
      {4, "visibility anchor", 10.0, visibility_anchor},
      {5, "visibility coverage", 600.0, visibility_coverage},
      {6, "CHSH boundary and limits", 10.0, chsh_limits},
      {7, "violation range", 300.0, violation_range},
      {8, "determinism", 60.0, determinism},
      {9, "oracle self-consistency", 30.0, oracle_consistency},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = v.pass && in_time;
    failures += !pass;
    std::cout << fmt::format("[{}] C{} {}: {} | {:.2f}s (limit {:g}s){}\n", pass ? "PASS" : "FAIL", c.id, c.name,
                             v.detail, secs, c.time_limit_s, in_time ? "" : " TOO SLOW");
  }
  return failures == 0 ? 0 : 1;
}
