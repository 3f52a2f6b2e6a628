#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ccrelay/coding.hpp"
#include "ccrelay/errors.hpp"
#include "ccrelay/ndt.hpp"
#include "ccrelay/placement.hpp"
#include "ccrelay/simulation.hpp"

namespace py = pybind11;
using namespace ccrelay;

namespace {

py::tuple as_pair(const Rational& r) { return py::make_tuple(r.numerator(), r.denominator()); }

NdtReport ndt_of(const std::string& strategy, int K, int t, int L) {
  if (strategy == "proposed") return ndt_proposed(K, t, L);
  if (strategy == "A") return ndt_strategy_a(K, t, L);
  if (strategy == "B") return ndt_strategy_b(K, t, L);
  throw ConfigError("unknown strategy: " + strategy);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cache-aided relay simulator core";

  // later registrations are tried first, so the subclass goes last
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init([](int K, int L, int t, int f, int bits_per_symbol) {
             SystemParams p;
             p.K = K;
             p.L = L;
             p.t = t;
             p.f = f;
             p.bits_per_symbol = bits_per_symbol;
             p.validate();
             return p;
           }),
           py::arg("K") = 5, py::arg("L") = 3, py::arg("t") = 2, py::arg("f") = 8,
           py::arg("bits_per_symbol") = 2)
      .def_readonly("K", &SystemParams::K)
      .def_readonly("L", &SystemParams::L)
      .def_readonly("t", &SystemParams::t)
      .def_readonly("f", &SystemParams::f)
      .def_readonly("bits_per_symbol", &SystemParams::bits_per_symbol)
      .def_property_readonly("file_bits", &SystemParams::file_bits)
      .def_property_readonly("num_stages", &SystemParams::num_stages)
      .def_property_readonly("transmissions_per_stage", &SystemParams::transmissions_per_stage)
      .def("__repr__", [](const SystemParams& p) {
        return "SystemParams(K=" + std::to_string(p.K) + ", L=" + std::to_string(p.L) +
               ", t=" + std::to_string(p.t) + ", f=" + std::to_string(p.f) + ")";
      });

  py::class_<FileLibrary>(m, "FileLibrary")
      .def_property_readonly("seed", &FileLibrary::seed)
      .def_property_readonly("params", &FileLibrary::params)
      .def("__len__", &FileLibrary::size)
      .def("file", &FileLibrary::file, py::arg("n"))
      .def("save", &FileLibrary::save, py::arg("path"))
      .def_static("load", &FileLibrary::load, py::arg("path"))
      .def("__eq__", [](const FileLibrary& a, const FileLibrary& b) { return a == b; });

  m.def("generate_library", &generate_library, py::arg("params"), py::arg("seed"));

  m.def(
      "ndt",
      [](int K, int t, int L, const std::string& strategy) {
        const auto r = ndt_of(strategy, K, t, L);
        return py::make_tuple(as_pair(r.T_ul), as_pair(r.T_dl));
      },
      py::arg("K"), py::arg("t"), py::arg("L"), py::arg("strategy") = "proposed",
      "(T_UL, T_DL) as (numerator, denominator) pairs.");

  m.def(
      "gamma_sweep",
      [](int K, int L, std::optional<std::vector<double>> grid) {
        py::list out;
        for (const auto& r : sweep_gamma(K, L, grid ? *grid : default_gamma_grid())) {
          py::dict d;
          d["gamma"] = r.gamma;
          d["t"] = r.t;
          d["integral_t"] = r.integral_t;
          d["strategy"] = to_string(r.strategy);
          d["T_ul"] = r.T_ul;
          d["T_dl"] = r.T_dl;
          out.append(d);
        }
        return out;
      },
      py::arg("K"), py::arg("L"), py::arg("grid") = py::none());

  m.def(
      "modulate",
      [](const std::vector<std::uint8_t>& bits, int bits_per_symbol) {
        SystemParams p;
        p.f = static_cast<int>(bits.size());
        p.bits_per_symbol = bits_per_symbol;
        const auto block = encode_subpacket(bits, p);
        return std::vector<std::complex<double>>(block.begin(), block.end());
      },
      py::arg("bits"), py::arg("bits_per_symbol") = 2);

  m.def(
      "demodulate",
      [](const std::vector<std::complex<double>>& symbols, int bits_per_symbol) {
        SystemParams p;
        p.bits_per_symbol = bits_per_symbol;
        p.f = static_cast<int>(symbols.size()) * bits_per_symbol;
        EncodedBlock block(static_cast<Eigen::Index>(symbols.size()));
        for (std::size_t i = 0; i < symbols.size(); ++i) block[static_cast<Eigen::Index>(i)] = symbols[i];
        return decode_block(block, p);
      },
      py::arg("symbols"), py::arg("bits_per_symbol") = 2);

  m.def(
      "run_json",
      [](const std::vector<std::string>& args) {
        const auto config = parse_config(args);
        SimResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(config);
          if (!config.output_path.empty()) emit_results(result);
        }
        auto j = to_json(result);
        j["wall_clock_seconds"] = result.wall_clock_seconds;
        return j.dump();
      },
      py::arg("args"), "Runs with command-line style arguments; returns result JSON text.");
}
