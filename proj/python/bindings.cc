// Copyright 2026 The bhtest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bhtest/behaviours.h"
#include "bhtest/cli.h"
#include "bhtest/engine.h"
#include "bhtest/harness.h"
#include "bhtest/skew_normal.h"

namespace py = pybind11;

namespace bhtest {
namespace {

ScoreSet ToScores(const py::object& scores) {
  if (py::isinstance<py::str>(scores)) {
    return ScoreSet::Parse(scores.cast<std::string>());
  }
  std::string joined;
  for (const auto& item : scores) joined += py::str(item).cast<std::string>() + ",";
  return ScoreSet::Parse(joined);
}

ExperimentSpec MakeSpec(const std::string& cls, const std::optional<std::string>& opponent,
                        int actions, int n, double alpha, const py::object& scores,
                        const std::string& scheme, int processes,
                        std::int64_t steps, double null_fraction,
                        std::uint64_t seed) {
  ExperimentSpec spec;
  spec.behaviour_class = ParseBehaviourClass(cls);
  if (opponent) spec.opponent_class = ParseBehaviourClass(*opponent);
  spec.num_actions = actions;
  spec.n_replicates = n;
  spec.alpha = alpha;
  spec.scores = ToScores(scores);
  spec.scheme = ParseWeightingScheme(scheme);
  spec.processes = processes;
  spec.steps = steps;
  spec.null_fraction = null_fraction;
  spec.master_seed = seed;
  spec.Validate();
  return spec;
}

#define BHTEST_SPEC_ARGS                                                     \
  py::arg("behaviour_class") = "random", py::arg("opponent_class") = py::none(), \
  py::arg("actions") = 2, py::arg("n") = 50, py::arg("alpha") = 0.01,        \
  py::arg("scores") = "z1,z2,z3", py::arg("scheme") = "uniform",             \
  py::arg("processes") = 100, py::arg("steps") = 2000,                       \
  py::arg("null_fraction") = 0.5, py::arg("seed") = 0

py::dict TraceRowDict(const TraceRow& r) {
  py::dict d;
  d["t"] = r.t;
  d["q"] = r.q;
  d["xi"] = r.params.xi;
  d["omega"] = r.params.omega;
  d["beta"] = r.params.beta;
  d["p"] = r.p;
  d["reject"] = r.reject;
  d["refit"] = r.refit;
  return d;
}

}  // namespace
}  // namespace bhtest

PYBIND11_MODULE(_bhtest, m) {
  using namespace bhtest;
  m.doc() = "Online behavioural hypothesis testing";

  // Messages carry the error code name, e.g. "InvalidConfig: ...".
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def("validate_distribution", [](const std::vector<double>& probs) -> py::object {
    const auto code = ValidateDistribution(probs);
    if (!code) return py::none();
    return py::str(ErrorCodeName(*code));
  });

  py::class_<SkewNormalParams>(m, "SkewNormalParams")
      .def(py::init<double, double, double>(), py::arg("xi") = 0.0,
           py::arg("omega") = 1.0, py::arg("beta") = 0.0)
      .def_readwrite("xi", &SkewNormalParams::xi)
      .def_readwrite("omega", &SkewNormalParams::omega)
      .def_readwrite("beta", &SkewNormalParams::beta)
      .def("__repr__", [](const SkewNormalParams& p) {
        std::ostringstream s;
        s << "SkewNormalParams(xi=" << p.xi << ", omega=" << p.omega
          << ", beta=" << p.beta << ")";
        return s.str();
      });

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("params", &FitResult::params)
      .def_readonly("nll", &FitResult::nll)
      .def_readonly("degenerate", &FitResult::degenerate)
      .def_readonly("mode", &FitResult::mode);

  m.def("sn_pdf", &SnPdf, py::arg("x"), py::arg("params"));
  m.def("sn_nll", [](const std::vector<double>& data, const SkewNormalParams& p) {
    return SnNll(data, p);
  });
  m.def("sn_fit_mom", [](const std::vector<double>& data) { return SnFitMom(data); });
  m.def("sn_fit_mle", [](const std::vector<double>& data) { return SnFitMle(data); });
  m.def("sn_mode", &SnMode);
  m.def("sn_p_value", py::overload_cast<double, const SkewNormalParams&>(&SnPValue));
  m.def("sn_p_value",
        py::overload_cast<double, const FitResult&>(&SnPValue));

  m.def("score_values",
        [](const std::vector<int>& actions,
           const std::vector<std::vector<double>>& dists, const py::object& scores) {
          if (actions.size() != dists.size() || actions.empty()) {
            throw Error(ErrorCode::kLengthMismatch, "need one distribution per action");
          }
          ScoreTracker tracker(static_cast<int>(dists[0].size()));
          for (std::size_t k = 0; k < actions.size(); ++k) {
            tracker.Update(ActionId(actions[k]), ActionDistribution(dists[k]));
          }
          const ScoreSet ids = ToScores(scores);
          std::vector<double> out;
          for (ScoreId id : ids.ids()) out.push_back(tracker.Value(id));
          return out;
        },
        py::arg("actions"), py::arg("distributions"), py::arg("scores") = "z1,z2,z3");

  m.def("combine_differences",
        [](const std::vector<double>& diffs, const std::string& scheme) {
          return CombineDifferences(diffs, ParseWeightingScheme(scheme));
        });

  py::class_<StepResult>(m, "StepResult")
      .def_readonly("q", &StepResult::q)
      .def_readonly("p", &StepResult::p)
      .def_readonly("reject", &StepResult::reject)
      .def_readonly("refit", &StepResult::refit);

  py::class_<Engine>(m, "Engine")
      .def(py::init([](const py::object& scores, const std::string& scheme, int n,
                       double alpha, std::uint64_t seed) {
             EngineConfig cfg;
             cfg.scores = ToScores(scores);
             cfg.scheme = ParseWeightingScheme(scheme);
             cfg.n_replicates = n;
             cfg.alpha = alpha;
             cfg.seed = seed;
             return Engine(cfg);
           }),
           py::arg("scores") = "z1,z2,z3", py::arg("scheme") = "uniform",
           py::arg("n") = 50, py::arg("alpha") = 0.01, py::arg("seed") = 0)
      .def("step",
           [](Engine& e, int observed, const std::vector<double>& dist) {
             return e.Step(ActionId(observed), ActionDistribution(dist));
           },
           py::arg("observed"), py::arg("distribution"))
      .def_property_readonly("t", &Engine::t)
      .def_property_readonly("q", &Engine::q)
      .def_property_readonly("fit", [](const Engine& e) -> py::object {
        if (!e.fit()) return py::none();
        return py::cast(*e.fit());
      })
      .def("replicate_statistics", &Engine::ReplicateStatistics);

  m.def("run_experiment",
        [](const std::string& cls, const std::optional<std::string>& opponent,
           int actions, int n, double alpha, const py::object& scores,
           const std::string& scheme, int processes, std::int64_t steps,
           double null_fraction, std::uint64_t seed) {
          const ExperimentSpec spec = MakeSpec(cls, opponent, actions, n, alpha, scores,
                                               scheme, processes, steps,
                                               null_fraction, seed);
          AccuracyReport r;
          {
            py::gil_scoped_release release;
            r = RunExperiment(spec);
          }
          py::dict d;
          d["acc_null"] = r.acc_null;
          d["acc_alt"] = r.acc_alt;
          d["n_null"] = r.n_null;
          d["n_alt"] = r.n_alt;
          d["mean_p_null"] = r.mean_p_null;
          d["mean_p_alt"] = r.mean_p_alt;
          return d;
        },
        BHTEST_SPEC_ARGS);

  m.def("simulate",
        [](int process, const std::string& cls,
           const std::optional<std::string>& opponent, int actions, int n,
           double alpha, const py::object& scores, const std::string& scheme,
           int processes, std::int64_t steps, double null_fraction,
           std::uint64_t seed) {
          const ExperimentSpec spec = MakeSpec(cls, opponent, actions, n, alpha, scores,
                                               scheme, processes, steps,
                                               null_fraction, seed);
          const ProcessPlan plan = PlanProcess(spec, process);
          const auto trace = RunPlannedProcess(spec, plan);
          py::list rows;
          for (const auto& row : trace) rows.append(TraceRowDict(row));
          return py::make_tuple(plan.is_null, rows);
        },
        py::arg("process") = 0, BHTEST_SPEC_ARGS);

  m.def("fit_check",
        [](int process, std::int64_t at, int reference, const std::string& cls,
           const std::optional<std::string>& opponent, int actions, int n,
           double alpha, const py::object& scores, const std::string& scheme,
           int processes, std::int64_t steps, double null_fraction,
           std::uint64_t seed) {
          const ExperimentSpec spec = MakeSpec(cls, opponent, actions, n, alpha, scores,
                                               scheme, processes, steps,
                                               null_fraction, seed);
          const FitCheckResult r = RunFitCheck(spec, process, at, reference);
          py::dict d;
          d["t"] = r.t;
          d["q"] = r.q;
          d["replicates"] = r.replicates;
          d["fit"] = r.fit;
          d["reference"] = r.reference;
          return d;
        },
        py::arg("process") = 0, py::arg("at") = 10, py::arg("reference") = 0,
        BHTEST_SPEC_ARGS);

  m.def("cli_main", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"bhtest"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = CliMain(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
