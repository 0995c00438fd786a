// Copyright 2026 The glhs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "glhs/halfspace.hpp"
#include "glhs/harness.hpp"
#include "glhs/labelcover.hpp"
#include "glhs/moments.hpp"
#include "glhs/reduction.hpp"
#include "glhs/stream.hpp"

namespace py = pybind11;

namespace {

// Features as a list of rows of 0/1 ints.
py::list matrix_rows(const glhs::BitMatrix& x) {
  py::list rows;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    py::list r;
    for (std::size_t j = 0; j < x.cols(); ++j) r.append(x.at(i, j) ? 1 : 0);
    rows.append(r);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_glhs, m) {
  m.doc() = "Bindings for the glhs library";

  py::register_exception<glhs::Error>(m, "Error");
  py::register_exception<glhs::FeasibilityError>(m, "FeasibilityError");
  py::register_exception<glhs::FormatError>(m, "FormatError");
  py::register_exception<glhs::CorruptionError>(m, "CorruptionError");
  py::register_exception<glhs::DomainError>(m, "DomainError");
  py::register_exception<glhs::DimensionError>(m, "DimensionError");

  py::class_<glhs::GadgetPair>(m, "GadgetPair")
      .def_readonly("k", &glhs::GadgetPair::k)
      .def_readonly("eps", &glhs::GadgetPair::eps)
      .def_readonly("p", &glhs::GadgetPair::p)
      .def_readonly("d0_weights", &glhs::GadgetPair::d0_weights)
      .def("moment_gap", [](const glhs::GadgetPair& g, std::size_t degree) { return glhs::moment_gap(g.d0, g.d1, degree); },
           py::arg("degree") = 4)
      .def("describe", &glhs::GadgetPair::describe, py::arg("gamma") = 0.0);

  m.def("build_pair", &glhs::build_pair, py::arg("k"), py::arg("eps"), py::arg("p"));
  m.def("solve_d0_weights", &glhs::solve_d0_weights, py::arg("k"), py::arg("eps"), py::arg("p"));
  m.def("closed_form_d0_weights", &glhs::closed_form_d0_weights, py::arg("k"), py::arg("eps"), py::arg("p"));
  m.def("paper_eps", &glhs::paper_eps);
  m.def("paper_p", &glhs::paper_p);
  m.def("pair_feasible", [](std::size_t k, double eps, double p) {
    std::string why;
    const bool ok = glhs::pair_feasible(k, eps, p, &why);
    return py::make_tuple(ok, why);
  });

  py::class_<glhs::TestSpec>(m, "TestSpec")
      .def_property_readonly("k", &glhs::TestSpec::k)
      .def_readonly("R", &glhs::TestSpec::R)
      .def_readonly("gamma", &glhs::TestSpec::gamma)
      .def("describe", &glhs::TestSpec::describe);
  m.def("make_test_spec", &glhs::make_test_spec, py::arg("k"), py::arg("eps"), py::arg("p"), py::arg("R"),
        py::arg("gamma"));
  m.def("default_gamma", &glhs::default_gamma);
  m.def("dictator_or_acceptance", &glhs::dictator_or_acceptance);

  m.def("dict_test_sample",
        [](const glhs::TestSpec& spec, std::uint64_t seed, std::uint64_t index) {
          const auto ex = glhs::dict_test_sample(spec, seed, index);
          return py::make_tuple(matrix_rows(ex.features), ex.label);
        },
        py::arg("spec"), py::arg("seed"), py::arg("index"));

  m.def("dictator_or_agreement",
        [](const glhs::TestSpec& spec, std::uint64_t seed, std::uint64_t count, std::size_t column) {
          const auto ex = glhs::sample_stream(glhs::SamplerKind::kDictTest, spec, nullptr, seed, count);
          std::vector<std::size_t> lits;
          for (std::size_t i = 0; i < spec.k(); ++i) lits.push_back(i * spec.R + column);
          const auto h = glhs::Hypothesis::from_disjunction(glhs::Disjunction(spec.k() * spec.R, lits), "or");
          const auto r = glhs::agreement(h, ex);
          return py::dict(py::arg("rate") = r.rate.rate, py::arg("lo") = r.rate.lo, py::arg("hi") = r.rate.hi,
                          py::arg("sigma") = r.rate.sigma, py::arg("n") = r.rate.n);
        },
        py::arg("spec"), py::arg("seed"), py::arg("count"), py::arg("column") = 0);

  m.def("write_dict_stream",
        [](const std::string& path, const glhs::TestSpec& spec, std::uint64_t seed, std::uint64_t count) {
          const auto ex = glhs::sample_stream(glhs::SamplerKind::kDictTest, spec, nullptr, seed, count);
          glhs::StreamHeader h;
          h.rows = static_cast<std::uint32_t>(spec.k());
          h.cols = static_cast<std::uint32_t>(spec.R);
          h.metadata = spec.describe() + " seed=" + std::to_string(seed);
          glhs::write_stream(path, h, ex);
        },
        py::arg("path"), py::arg("spec"), py::arg("seed"), py::arg("count"));

  m.def("critical_index",
        [](const std::vector<double>& w, double tau) -> py::object {
          const auto rep = glhs::critical_index(w, tau);
          if (rep.c_tau == glhs::kInfiniteIndex) return py::none();
          return py::int_(rep.c_tau);
        },
        py::arg("w"), py::arg("tau"));

  py::class_<glhs::LabelCoverInstance>(m, "LabelCoverInstance")
      .def_readonly("k", &glhs::LabelCoverInstance::k)
      .def_readonly("M", &glhs::LabelCoverInstance::M)
      .def_readonly("N", &glhs::LabelCoverInstance::N)
      .def_readonly("planted", &glhs::LabelCoverInstance::planted)
      .def_property_readonly("num_vertices", &glhs::LabelCoverInstance::num_vertices)
      .def_property_readonly("num_edges", [](const glhs::LabelCoverInstance& i) { return i.edges.size(); })
      .def("to_json", [](const glhs::LabelCoverInstance& i) { return glhs::instance_to_json(i); });

  m.def("gen_planted_unique",
        [](std::size_t nv, std::size_t ne, std::size_t k, std::size_t R, std::uint64_t seed) {
          return glhs::gen_planted_unique(nv, ne, k, R, seed).instance;
        },
        py::arg("num_vertices"), py::arg("num_edges"), py::arg("k"), py::arg("R"), py::arg("seed"));
  m.def("instance_from_json", &glhs::instance_from_json);
  m.def("read_instance", &glhs::read_instance);
  m.def("satisfaction_fractions", [](const glhs::LabelCoverInstance& inst, const glhs::Labeling& L) {
    const auto f = glhs::satisfaction_fractions(inst, L);
    return py::make_tuple(f.strong, f.weak);
  });
  m.def("smoothness", [](const glhs::LabelCoverInstance& inst) { return glhs::audit_smoothness_all(inst).value; });

  m.def("planted_decode_weak_fraction",
        [](const glhs::LabelCoverInstance& inst, std::uint64_t seed) {
          if (!inst.planted) throw glhs::PreconditionError("instance has no planted labeling");
          const auto d = glhs::planted_disjunction(*inst.planted, inst.M);
          const auto h = glhs::disjunction_halfspace(d, inst.num_vertices(), inst.M);
          glhs::RngCursor rng(seed, 0);
          return glhs::satisfaction_fractions(inst, glhs::decode_labeling(h, {1, 0.0, 1}, rng)).weak;
        },
        py::arg("instance"), py::arg("seed") = 0);
}
