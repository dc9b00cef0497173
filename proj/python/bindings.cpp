#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dehnvol/pipeline.hpp"

namespace py = pybind11;
using namespace dehnvol;

namespace {

py::dict run_volume_py(const std::string& census, const std::string& path,
                       const std::string& fill, bool link_exterior,
                       std::optional<std::vector<std::pair<long, long>>> uv,
                       int starts, unsigned seed) {
  RunConfig cfg;
  cfg.census = census;
  cfg.triangulation_path = path;
  cfg.fill = fill;
  cfg.link_exterior = link_exterior;
  cfg.uv_override = std::move(uv);
  cfg.starts = starts;
  cfg.seed = seed;
  auto run = run_volume(cfg);
  py::dict out;
  py::list ms, ls, uvs, ks;
  for (auto& [M, L] : run.selected.targets) {
    ms.append(M);
    ls.append(L);
  }
  for (auto& e : run.b.entries) uvs.append(py::make_tuple(e.u, e.v));
  for (long k : run.selected.k) ks.append(k);
  out["M"] = ms;
  out["L"] = ls;
  out["uv"] = uvs;
  out["k"] = ks;
  out["psi"] = run.report.psi;
  out["volume"] = run.report.volume;
  out["cs"] = run.report.cs;
  out["modulus"] = run.report.link_exterior ? "pi^2" : "pi^2/2";
  py::dict checks;
  checks["gluing"] = run.checks.gluing;
  checks["edge"] = run.checks.edge;
  checks["cusp"] = run.checks.cusp;
  checks["filling"] = run.checks.filling;
  checks["psi_independence"] = run.checks.psi_independence;
  checks["pass"] = run.checks.pass();
  out["checks"] = checks;
  return out;
}

}  // namespace

PYBIND11_MODULE(dehnvol, m) {
  m.doc() = "complex volumes of Dehn fillings via deformed Ptolemy varieties";

  m.def("li2", &li2, py::arg("z"), "dilogarithm, principal branch");
  m.def("bloch_wigner", &bloch_wigner, py::arg("z"));
  m.def("rogers_extended", &rogers_extended, py::arg("z"), py::arg("p"),
        py::arg("q"));

  m.def(
      "apoly",
      [](const std::string& census) {
        RunConfig cfg;
        cfg.census = census;
        return run_apoly(cfg, false);
      },
      py::arg("census") = "fig8", "reduced-variable A-polynomial string");

  m.def("volume", &run_volume_py, py::arg("census") = "fig8",
        py::arg("triangulation") = "", py::arg("fill") = "inf",
        py::arg("link_exterior") = false, py::arg("uv") = py::none(),
        py::arg("starts") = 32, py::arg("seed") = 1,
        "full pipeline: solve the filling and report Vol + i CS");

  m.def(
      "save_census_fig8",
      []() { return save_complex(census_figure_eight()); },
      "figure-eight census triangulation as a JSON document");
}
