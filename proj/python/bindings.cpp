#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lhvsim/analysis.hpp"
#include "lhvsim/errors.hpp"
#include "lhvsim/oracle.hpp"
#include "lhvsim/sweep.hpp"

namespace py = pybind11;
using namespace lhvsim;

namespace {

ChshAngles angles_from_degrees(const std::vector<double>& deg) {
  if (deg.size() != 4) throw std::invalid_argument("expected four angles (a, b, a2, b2) in degrees");
  return {Angle::from_degrees(deg[0]), Angle::from_degrees(deg[1]), Angle::from_degrees(deg[2]),
          Angle::from_degrees(deg[3])};
}

ExperimentConfig make_config(double decoherence, double threshold, std::uint64_t pairs, double beta,
                             double alpha_step, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.noise = NoiseConfig(decoherence);
  cfg.threshold = threshold;
  cfg.pairs_per_setting = pairs;
  cfg.beta = Angle(beta);
  cfg.alpha_step = alpha_step;
  cfg.master_seed = seed;
  cfg.validate();
  return cfg;
}

std::vector<std::vector<std::optional<double>>> to_rows(const sweep::MetricGrid& g) {
  std::vector<std::vector<std::optional<double>>> rows(g.rows);
  for (std::size_t i = 0; i < g.rows; ++i) {
    for (std::size_t j = 0; j < g.cols; ++j) rows[i].push_back(g.at(i, j));
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(lhvsim, m) {
  m.doc() = "Local hidden-variable EPR photon-pair simulator";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<AllZeroCounts>(m, "AllZeroCounts", error);
  py::register_exception<NoCoincidences>(m, "NoCoincidences", error);
  py::register_exception<ToleranceNotMet>(m, "ToleranceNotMet", error);
  py::register_exception<UnknownMetric>(m, "UnknownMetric", error);

  m.attr("QUANTUM_VIOLATION") = kQuantumViolation;

  m.def("project_intensity", [](double phi, double alpha) { return project_intensity(Angle(phi), Angle(alpha)); },
        py::arg("phi"), py::arg("alpha"));
  m.def("detect",
        [](double phi, double alpha, double threshold) {
          return std::string(to_string(detect(Angle(phi), AnalyzerConfig(Angle(alpha), threshold))));
        },
        py::arg("phi"), py::arg("alpha"), py::arg("threshold"),
        "Channel of one photon: '+', '-' or '0' (undetected). Angles in radians.");

  py::class_<CoincidenceCounts>(m, "CoincidenceCounts")
      .def_readonly("n_pp", &CoincidenceCounts::n_pp)
      .def_readonly("n_pm", &CoincidenceCounts::n_pm)
      .def_readonly("n_mp", &CoincidenceCounts::n_mp)
      .def_readonly("n_mm", &CoincidenceCounts::n_mm)
      .def_readonly("n_lost", &CoincidenceCounts::n_lost)
      .def_readonly("n_total", &CoincidenceCounts::n_total)
      .def("__repr__", [](const CoincidenceCounts& c) {
        return "CoincidenceCounts(pp=" + std::to_string(c.n_pp) + ", pm=" + std::to_string(c.n_pm) +
               ", mp=" + std::to_string(c.n_mp) + ", mm=" + std::to_string(c.n_mm) +
               ", lost=" + std::to_string(c.n_lost) + ", total=" + std::to_string(c.n_total) + ")";
      });

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init(&make_config), py::arg("decoherence") = 0.0, py::arg("threshold") = 0.0,
           py::arg("pairs_per_setting") = 2000, py::arg("beta") = 0.0, py::arg("alpha_step") = kPi / 100.0,
           py::arg("seed") = 1)
      .def_property_readonly("decoherence", [](const ExperimentConfig& c) { return c.noise.decoherence(); })
      .def_readonly("threshold", &ExperimentConfig::threshold)
      .def_readonly("pairs_per_setting", &ExperimentConfig::pairs_per_setting)
      .def_readonly("master_seed", &ExperimentConfig::master_seed)
      .def("setting_count", &ExperimentConfig::setting_count);

  py::class_<CorrelationCurve>(m, "CorrelationCurve")
      .def_property_readonly("alphas",
                             [](const CorrelationCurve& c) {
                               std::vector<double> out;
                               for (const Angle& a : c.alphas) out.push_back(a.radians());
                               return out;
                             })
      .def_readonly("counts", &CorrelationCurve::counts);

  py::class_<ChshResult>(m, "ChshResult")
      .def_readonly("e11", &ChshResult::e11)
      .def_readonly("e12", &ChshResult::e12)
      .def_readonly("e21", &ChshResult::e21)
      .def_readonly("e22", &ChshResult::e22)
      .def_readonly("s_value", &ChshResult::s_value)
      .def_readonly("violation", &ChshResult::violation);

  m.def("run_setting",
        [](const ExperimentConfig& cfg, double alpha, double beta, std::uint64_t pairs, std::uint64_t label) {
          return run_setting(cfg, Angle(alpha), Angle(beta), pairs, RandomStream(cfg.master_seed).split(label));
        },
        py::arg("config"), py::arg("alpha"), py::arg("beta"), py::arg("pairs"), py::arg("stream_label") = 0);
  m.def("correlation_scan", py::overload_cast<const ExperimentConfig&>(&correlation_scan), py::arg("config"));
  m.def("visibility", &visibility, py::arg("curve"));
  m.def("efficiency", py::overload_cast<const CoincidenceCounts&>(&efficiency), py::arg("counts"));
  m.def("efficiency", py::overload_cast<const CorrelationCurve&>(&efficiency), py::arg("curve"));
  m.def("correlation_coefficient", [](const CoincidenceCounts& c) { return correlation_coefficient(c); },
        py::arg("counts"));
  m.def("chsh",
        [](const ExperimentConfig& cfg, const std::vector<double>& angles_deg, std::uint64_t pairs) {
          return chsh(cfg, angles_from_degrees(angles_deg), pairs);
        },
        py::arg("config"), py::arg("angles_deg") = std::vector<double>{0.0, 22.5, 45.0, 67.5},
        py::arg("pairs") = 10000);

  m.def("ideal_coincidence_probability",
        [](double alpha, double beta) { return oracle::ideal_coincidence_probability(Angle(alpha), Angle(beta)); },
        py::arg("alpha"), py::arg("beta"));
  m.def("outcome_probabilities",
        [](double alpha, double beta, double threshold, double decoherence) {
          const auto p = oracle::outcome_probabilities(Angle(alpha), Angle(beta), threshold, decoherence);
          py::dict d;
          d["pp"] = p.pp;
          d["pm"] = p.pm;
          d["mp"] = p.mp;
          d["mm"] = p.mm;
          d["lost"] = p.lost;
          return d;
        },
        py::arg("alpha"), py::arg("beta"), py::arg("threshold"), py::arg("decoherence"));
  m.def("oracle_efficiency", [](double t, double d) { return oracle::oracle_efficiency(t, d); },
        py::arg("threshold"), py::arg("decoherence"));
  m.def("oracle_chsh",
        [](double t, double d, const std::vector<double>& angles_deg) {
          return oracle::oracle_chsh(t, d, angles_from_degrees(angles_deg));
        },
        py::arg("threshold"), py::arg("decoherence"),
        py::arg("angles_deg") = std::vector<double>{0.0, 22.5, 45.0, 67.5});

  py::class_<sweep::GridResult>(m, "GridResult")
      .def_readonly("d_values", &sweep::GridResult::d_values)
      .def_readonly("t_values", &sweep::GridResult::t_values)
      .def("matrix", [](const sweep::GridResult& g, const std::string& metric) {
        return to_rows(g.grid(sweep::parse_metric(metric)));
      }, py::arg("metric"), "Rows indexed by decoherence; None marks undefined cells.");

  m.def("run_sweep",
        [](const std::vector<std::string>& metrics, int d_steps, int t_steps, std::uint64_t pairs,
           std::uint64_t chsh_pairs, std::uint64_t seed, unsigned threads) {
          sweep::SweepSpec spec;
          spec.d_axis.steps = d_steps;
          spec.t_axis.steps = t_steps;
          spec.metrics.clear();
          for (const auto& name : metrics) spec.metrics.push_back(sweep::parse_metric(name));
          spec.base_config.pairs_per_setting = pairs;
          spec.base_config.master_seed = seed;
          spec.chsh_pairs = chsh_pairs;
          spec.threads = threads;
          py::gil_scoped_release release;
          return sweep::run_sweep(spec);
        },
        py::arg("metrics"), py::arg("d_steps") = 51, py::arg("t_steps") = 51, py::arg("pairs") = 2000,
        py::arg("chsh_pairs") = 10000, py::arg("seed") = 1, py::arg("threads") = 0);
  m.def("fraction_above",
        [](const sweep::GridResult& g, const std::string& metric, double cutoff) {
          return sweep::fraction_above(g, metric, cutoff);
        },
        py::arg("grid"), py::arg("metric"), py::arg("cutoff"));
}
