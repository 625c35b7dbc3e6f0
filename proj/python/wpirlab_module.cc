// Copyright 2026 The wpirlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>

#include "wpir/harness.h"
#include "wpir/leakage.h"
#include "wpir/setting.h"
#include "wpir/tradeoff.h"
#include "wpir/transport.h"
#include "wpir/wpir.h"

namespace py = pybind11;

namespace wpir {
namespace {

PirSetting Checked(PirSetting s) {
  s.Validate();
  return s;
}

// Rationals cross the boundary as "p/q" strings; the Python package turns
// them into fractions.Fraction.
py::dict PointDict(const TradeoffPoint& p) {
  py::dict d;
  d["rho_budget"] = p.rho_budget;
  d["rho_achieved"] = p.rho_achieved;
  d["rho_normalized"] = p.rho_normalized;
  d["p0"] = ToString(p.p0);
  d["rate"] = ToString(p.rate);
  return d;
}

py::dict RunSessionPy(const PirSetting& setting, int theta, const std::string& pmf,
                      std::uint64_t seed, std::uint64_t library_seed,
                      const std::string& field_name) {
  const FieldPtr field = Field::Parse(field_name);
  auto library = std::make_shared<const FileLibrary>(
      GenerateSessionLibrary(setting, field, library_seed));
  InProcessTransport transport(ProvisionServers(setting, library), field);
  const SessionOutcome out = ExecuteSession(setting, theta, MPrimeDistribution::Parse(pmf),
                                            seed, transport, field);
  const auto truth = library->file(theta);
  py::dict d;
  d["theta"] = theta;
  d["m_prime"] = out.randomness.m_prime;
  d["download_bits"] = out.transcript.download_bits();
  d["framing_bytes"] = out.transcript.framing_bytes;
  d["file_symbols"] = out.file.size();
  d["decoded_ok"] = std::equal(out.file.begin(), out.file.end(), truth.begin(), truth.end());
  return d;
}

py::dict RunExperimentPy(const PirSetting& setting, const std::string& pmf,
                         std::uint64_t trials, std::uint64_t seed, int threads,
                         const std::string& field_name) {
  ExperimentConfig config;
  config.setting = setting;
  config.dist = MPrimeDistribution::Parse(pmf);
  config.trials = trials;
  config.seed = seed;
  config.threads = threads;
  config.field = field_name;
  const ExperimentResult r = RunExperiment(config);
  py::dict d;
  d["file_bits"] = r.file_bits;
  d["mean_download_bits"] = r.mean_download_bits;
  d["empirical_rate"] = r.empirical_rate;
  d["analytic_rate"] = ToString(r.analytic_rate);
  py::list bits;
  for (const TrialRecord& t : r.trials) bits.append(t.download_bits);
  d["download_bits"] = bits;
  return d;
}

}  // namespace
}  // namespace wpir

PYBIND11_MODULE(_wpirlab, m) {
  using namespace wpir;
  m.doc() = "Weakly private information retrieval lab";

  py::class_<PirSetting>(m, "Setting")
      .def_static("replicated", [](int n, int m) { return Checked(PirSetting::Replicated(n, m)); },
                  py::arg("n"), py::arg("m"))
      .def_static("mds", [](int n, int k, int m) { return Checked(PirSetting::Mds(n, k, m)); },
                  py::arg("n"), py::arg("k"), py::arg("m"))
      .def_static(
          "tcollusion",
          [](int n, int t, int m) { return Checked(PirSetting::TCollusion(n, t, m)); },
          py::arg("n"), py::arg("t"), py::arg("m"))
      .def_property_readonly("variant",
                             [](const PirSetting& s) { return VariantName(s.variant); })
      .def_readonly("servers", &PirSetting::servers)
      .def_readonly("files", &PirSetting::files)
      .def_readonly("r", &PirSetting::r)
      .def_property_readonly("file_length", &PirSetting::file_length)
      .def("__eq__", [](const PirSetting& a, const PirSetting& b) { return a == b; })
      .def("__repr__", &PirSetting::ToString);

  m.def("capacity", [](const PirSetting& s) { return ToString(Capacity(s)); });
  m.def("wpir_rate", [](const PirSetting& s, const std::string& pmf) {
    return ToString(WpirRate(s, MPrimeDistribution::Parse(pmf)));
  });
  m.def("analytic_leakage",
        [](const PirSetting& s, const std::string& pmf, const std::string& metric) {
          return AnalyticLeakage(s, MPrimeDistribution::Parse(pmf), ParseMetric(metric));
        });
  m.def("empirical_leakage",
        [](const PirSetting& s, const std::string& pmf, const std::string& metric,
           const std::string& method, std::uint64_t samples, std::uint64_t seed) {
          LeakageOptions options;
          options.method = ParseMethod(method);
          options.samples = samples;
          options.seed = seed;
          const LeakageReport r = EmpiricalLeakage(s, MPrimeDistribution::Parse(pmf),
                                                   ParseMetric(metric), s.collusion_size(),
                                                   options);
          py::dict d;
          d["analytic"] = r.analytic_value;
          d["empirical"] = r.empirical_value;
          d["threshold"] = r.tv_threshold;
          d["agrees"] = r.Agrees();
          return d;
        },
        py::arg("setting"), py::arg("pmf"), py::arg("metric"),
        py::arg("method") = "exhaustive", py::arg("samples") = 100000, py::arg("seed") = 1);
  m.def("saturation_leakage", [](const PirSetting& s, const std::string& metric) {
    return SaturationLeakage(s, ParseMetric(metric));
  });
  m.def("theorem_tradeoff", [](const PirSetting& s, const std::string& metric, double rho) {
    return PointDict(TheoremTradeoff(s, ParseMetric(metric), rho));
  });
  m.def(
      "sweep_curve",
      [](const PirSetting& s, const std::string& metric, int grid) {
        py::list out;
        for (const TradeoffPoint& p : SweepCurve(s, ParseMetric(metric), grid)) {
          out.append(PointDict(p));
        }
        return out;
      },
      py::arg("setting"), py::arg("metric"), py::arg("grid") = 101);
  m.def("run_session", &RunSessionPy, py::arg("setting"), py::arg("theta"), py::arg("pmf"),
        py::arg("seed") = 1, py::arg("library_seed") = 1, py::arg("field") = "gf256");
  m.def("run_experiment", &RunExperimentPy, py::arg("setting"), py::arg("pmf"),
        py::arg("trials") = 1000, py::arg("seed") = 1, py::arg("threads") = 1,
        py::arg("field") = "gf256");
}
