// Copyright 2026 The obliq Authors
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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "obliq/audit.hpp"
#include "obliq/gates.hpp"
#include "obliq/oracle.hpp"
#include "obliq/tgdmqc.hpp"
#include "obliq/toqc.hpp"
#include "obliq/toy.hpp"

namespace py = pybind11;
using namespace obliq;

namespace {

py::dict ledger_dict(const ComplexityLedger& l) {
    py::dict d;
    d["upload_bits"] = l.upload_bits;
    d["upload_qubits"] = l.upload_qubits;
    d["download_bits"] = l.download_bits;
    d["download_qubits"] = l.download_qubits;
    return d;
}

std::string transcript_text(const Transcript& t) {
    std::ostringstream out;
    t.write(out);
    return out.str();
}

Program make_program(std::size_t n, const std::vector<std::tuple<Residues, Residues, Residues>>& rounds) {
    Program w{n, {}};
    for (const auto& [x, y, z] : rounds) w.rounds.push_back(ProgramRound{x, y, z});
    w.validate();
    return w;
}

}  // namespace

PYBIND11_MODULE(_obliq, m) {
    m.doc() = "Two-server oblivious and delegated quantum computation simulator";

    py::class_<ProgramRound>(m, "ProgramRound")
        .def(py::init([](Residues x, Residues y, Residues z) { return ProgramRound{x, y, z}; }), py::arg("x"),
             py::arg("y"), py::arg("z"))
        .def_readwrite("x", &ProgramRound::x)
        .def_readwrite("y", &ProgramRound::y)
        .def_readwrite("z", &ProgramRound::z)
        .def("__eq__", [](const ProgramRound& a, const ProgramRound& b) { return a == b; });

    py::class_<Program>(m, "Program")
        .def(py::init(&make_program), py::arg("n"), py::arg("rounds"),
             "Program from (x, y, z) exponent triples, one per round.")
        .def_readonly("n", &Program::n)
        .def_readonly("rounds", &Program::rounds)
        .def_property_readonly("m", &Program::m)
        .def("__eq__", [](const Program& a, const Program& b) { return a == b; })
        .def("__str__", &format_program)
        .def_static("parse", [](const std::string& text) { return parse_program_text(text); })
        .def_static("random", [](std::size_t n, std::size_t mm, std::uint64_t seed) {
            Rng rng(seed);
            return random_program(n, mm, rng);
        }, py::arg("n"), py::arg("m"), py::arg("seed"))
        .def_static("zero", &zero_program)
        .def_static("identity", &identity_program);

    m.def("program_product", &program_product);
    m.def("concat_programs", &concat_programs);
    m.def("compile_parity", [](const std::vector<int>& in) { return compile_parity(in); });

    m.def("evolve", [](const Program& w, const std::vector<Complex>& psi) { return oracle::evolve(w, psi); });
    m.def("ideal_output", [](const Program& w, const std::vector<Complex>& psi, std::size_t n_circ) {
        return Eigen::MatrixXcd(oracle::ideal_output(w, psi, n_circ).matrix());
    });
    m.def("ideal_outcome_distribution",
          [](const Program& w, std::size_t n_circ, std::optional<std::vector<Complex>> psi) {
              return psi ? oracle::ideal_outcome_distribution(w, *psi, n_circ)
                         : oracle::ideal_outcome_distribution(w, n_circ);
          },
          py::arg("w"), py::arg("n_circ"), py::arg("psi") = py::none());
    m.def("total_variation", [](const std::vector<double>& p, const std::vector<double>& q) {
        return oracle::total_variation(p, q);
    });
    m.def("trace_distance", [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        return trace_distance(DensityMatrix(a), DensityMatrix(b));
    });

    m.def("run_toy",
          [](int y, const std::vector<Complex>& psi, std::uint64_t seed) {
              const auto r = run_toy(y, psi, ToyOptions{seed, std::nullopt, nullptr});
              py::dict d;
              d["state"] = Eigen::MatrixXcd(r.state.matrix());
              d["ledger"] = ledger_dict(r.ledger);
              d["transcript"] = transcript_text(r.transcript);
              d["masks"] = py::make_tuple(r.a0, r.b0);
              d["outcome"] = py::make_tuple(r.a1, r.b1);
              return d;
          },
          py::arg("y"), py::arg("psi"), py::arg("seed") = 0);

    m.def("run_toqc",
          [](const Program& w, const std::vector<Complex>& psi, std::size_t n_circ, std::uint64_t seed,
             bool classical_output, bool eager_bell) {
              ToqcOptions o;
              o.seed = seed;
              o.eager_bell = eager_bell;
              o.mode = classical_output ? ToqcMode::classical_output : ToqcMode::quantum_output;
              const auto r = run_toqc(w, psi, n_circ, o);
              py::dict d;
              if (r.state) d["state"] = Eigen::MatrixXcd(r.state->matrix());
              else d["state"] = py::none();
              d["bits"] = r.bits;
              d["conditional"] = r.conditional;
              d["ledger"] = ledger_dict(r.ledger);
              d["peak_live"] = r.peak_live;
              d["transcript"] = transcript_text(r.transcript);
              return d;
          },
          py::arg("w"), py::arg("psi"), py::arg("n_circ"), py::arg("seed") = 0, py::arg("classical_output") = false,
          py::arg("eager_bell") = false);

    m.def("run_tgdmqc",
          [](const Program& w, const Program& user_rounds, std::size_t n_circ, std::uint64_t seed) {
              const auto r = run_tgdmqc(w, user_rounds.rounds, n_circ, TgdmqcOptions{seed, false, nullptr});
              py::dict d;
              d["bits"] = r.bits;
              d["conditional"] = r.conditional;
              d["ledger"] = ledger_dict(r.ledger);
              d["transcript"] = transcript_text(r.transcript);
              return d;
          },
          py::arg("w"), py::arg("user_rounds"), py::arg("n_circ"), py::arg("seed") = 0);
    m.def("tgdmqc_distribution",
          [](const Program& w, const Program& user_rounds, std::size_t n_circ) {
              return tgdmqc_distribution(w, user_rounds.rounds, n_circ);
          });

    m.def("parity", [](const std::vector<int>& inputs, std::uint64_t seed) {
        const auto p = run_parity(inputs, seed);
        return py::make_tuple(p.parity, p.probability);
    }, py::arg("inputs"), py::arg("seed") = 0);

    m.def("expected_toqc_ledger", [](std::size_t n, std::size_t mm, std::size_t n_circ, bool classical) {
        return ledger_dict(expected_toqc_ledger(n, mm, n_circ,
                                                classical ? ToqcMode::classical_output : ToqcMode::quantum_output));
    }, py::arg("n"), py::arg("m"), py::arg("n_circ"), py::arg("classical_output") = false);
    m.def("expected_tgdmqc_ledger", [](std::size_t n, std::size_t mm, std::size_t n_circ) {
        return ledger_dict(expected_tgdmqc_ledger(n, mm, n_circ));
    });
}
