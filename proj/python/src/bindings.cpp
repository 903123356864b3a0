#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptspectra/errors.hpp"
#include "ptspectra/io.hpp"
#include "ptspectra/presets.hpp"

namespace py = pybind11;
using namespace ptspectra;

namespace {

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

RunConfig config(const std::string& text, const char* command) {
  RunConfig c = parse_config(parse(text));
  c.command = command;
  if (!c.spec || !c.rect) throw ConfigError(std::string(command) + " needs 'spec' and 'rect'");
  return c;
}

std::string solve(const std::string& text) {
  const RunConfig c = config(text, "solve");
  std::vector<Root> roots;
  {
    py::gil_scoped_release release;
    roots = eigenvalues(*c.spec, *c.rect, c.solver, root_options_from_json(c.roots, RootOptions{}));
  }
  return roots_document(roots, meta_json(to_json(c))).dump();
}

std::string oracle(const std::string& text) {
  const RunConfig c = config(text, "oracle");
  const double L = c.oracle_L.value_or(default_oracle_half_width(*c.spec));
  std::vector<Root> roots;
  {
    py::gil_scoped_release release;
    roots = oracle_eigenvalues(*c.spec, L, c.oracle_n, *c.rect,
                               root_options_from_json(c.roots, oracle_root_options()));
  }
  return roots_document(roots, meta_json(to_json(c))).dump();
}

Json run_job(const SweepJob& job, const Json& meta) {
  SweepResult r;
  {
    py::gil_scoped_release release;
    r = sweep_and_classify(job.plan, job.reference, job.transition);
  }
  return sweep_document(r, meta, job.plan.root.real_axis_tol);
}

std::string sweep(const std::string& text) {
  RunConfig c = parse_config(parse(text));
  c.command = "sweep";
  return run_job(sweep_job(c), meta_json(to_json(c))).dump();
}

std::string figure(const std::string& name, const std::string& axis) {
  Json out = Json::array();
  for (const SweepJob& job : preset_jobs(name, axis)) {
    Json canonical = to_json(job);
    canonical["preset"] = name;
    Json doc = run_job(job, meta_json(canonical));
    doc["label"] = job.label;
    out.push_back(std::move(doc));
  }
  return out.dump();
}

std::string jobs(const std::string& name, const std::string& axis) {
  Json out = Json::array();
  for (const SweepJob& job : preset_jobs(name, axis)) out.push_back(to_json(job));
  return out.dump();
}

cplx potential(const std::string& spec, double x) { return evaluate_potential(spec_from_json(parse(spec)), x); }

cplx characteristic(const std::string& spec, cplx energy, const std::string& form) {
  SolverOptions opts;
  if (form == "as_printed") {
    opts.dddp_form = DddpForm::as_printed;
  } else if (form != "rederived") {
    throw ConfigError("dddp_form must be 'rederived' or 'as_printed'");
  }
  return make_char_fn(spec_from_json(parse(spec)), opts)(energy);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DegenerateEnergy>(m, "DegenerateEnergy", base.ptr());
  py::register_exception<NoConvergence>(m, "NoConvergence", base.ptr());
  py::register_exception<BadBracket>(m, "BadBracket", base.ptr());
  py::register_exception<LostBranch>(m, "LostBranch", base.ptr());
  py::register_exception<AmbiguousTransition>(m, "AmbiguousTransition", base.ptr());
  py::register_exception<Overflow>(m, "Overflow", base.ptr());
  py::register_exception<UnboundedBelow>(m, "UnboundedBelow", base.ptr());
  py::register_exception<BadGeometry>(m, "BadGeometry", base.ptr());

  m.def("solve", &solve, py::arg("config"));
  m.def("oracle", &oracle, py::arg("config"));
  m.def("sweep", &sweep, py::arg("config"));
  m.def("figure", &figure, py::arg("name"), py::arg("axis") = "");
  m.def("preset_jobs", &jobs, py::arg("name"), py::arg("axis") = "");
  m.def("preset_names", &preset_names);
  m.def("potential", &potential, py::arg("spec"), py::arg("x"));
  m.def("characteristic", &characteristic, py::arg("spec"), py::arg("energy"),
        py::arg("dddp_form") = "rederived");
  m.def("config_hash", [](const std::string& text) { return config_hash(parse(text)); });
}
