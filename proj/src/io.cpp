#include "ptspectra/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <set>

#include "ptspectra/errors.hpp"

namespace ptspectra {
namespace {

template <class... Ts>
struct overloaded_visit : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded_visit(Ts...) -> overloaded_visit<Ts...>;

void check_keys(const Json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw ConfigError(std::string(where) + ": unknown field '" + key + "'");
  }
}

double number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string("'") + key + "' must be finite");
  return x;
}

int integer(const Json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

std::string text(const Json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::pair<double, double> interval(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("rect: missing '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(std::string("rect.") + key + " must be [lo, hi]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Json optional_number(const std::optional<double>& x) {
  return x ? Json(*x) : Json(nullptr);
}

std::optional<double> read_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

PtFamily as_family(const PotentialSpec& spec) {
  return std::visit(
      [](const auto& s) -> PtFamily {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, HermitianCounterpart>) {
          throw ConfigError("hermitian_counterpart cannot wrap another counterpart");
        } else {
          return s;
        }
      },
      spec);
}

std::string dddp_form_name(DddpForm f) {
  return f == DddpForm::rederived ? "rederived" : "as_printed";
}

Json root_options_json(const RootOptions& o) {
  return {{"tol_residual", o.tol_residual},   {"tol_step", o.tol_step},
          {"max_iter", o.max_iter},           {"dedupe_radius", o.dedupe_radius},
          {"real_axis_tol", o.real_axis_tol}, {"scan_real_points", o.scan_real_points},
          {"scan_nx", o.scan_nx},             {"scan_ny", o.scan_ny},
          {"scan_depth", o.scan_depth}};
}

Json solver_json(const SolverOptions& o) {
  return {{"dddp_form", dddp_form_name(o.dddp_form)},
          {"L", o.shooting.L},
          {"n_steps", o.shooting.n_steps},
          {"match_point", o.shooting.match_point}};
}

Json transition_options_json(const TransitionOptions& o) {
  return {{"complex_tol", o.complex_tol},
          {"merge_splitting", o.merge_splitting},
          {"bisect_tol", o.bisect_tol},
          {"contain_tol", o.contain_tol}};
}

}  // namespace

Json to_json(const PotentialSpec& spec) {
  Json j = {{"family", family_name(spec)}};
  std::visit(overloaded_visit{
                 [&](const DoubleDelta& s) {
                   j["u"] = s.u;
                   j["g"] = s.g;
                   j["a"] = s.a;
                 },
                 [&](const DeltaInBox& s) {
                   j["u"] = s.u;
                   j["g"] = s.g;
                   j["a"] = s.a;
                   j["b"] = s.b;
                 },
                 [&](const SquareDoubleWell& s) {
                   j["u"] = s.u;
                   j["g"] = s.g;
                   j["b"] = s.b;
                   j["w"] = s.w;
                 },
                 [&](const LinearBox& s) { j["g"] = s.g; },
                 [&](const QuadraticPT& s) { j["g"] = s.g; },
                 [&](const LinearPT& s) { j["g"] = s.g; },
                 [&](const ScarfII& s) {
                   j["v1"] = s.v1;
                   j["v2"] = s.v2;
                 },
                 [&](const HermitianCounterpart& h) {
                   j["sign"] = h.sign;
                   j["of"] = to_json(std::visit([](const auto& s) -> PotentialSpec { return s; },
                                                h.of));
                 }},
             spec);
  return j;
}

PotentialSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("spec: expected an object");
  const std::string family = text(j, "family", "");
  PotentialSpec spec;
  if (family == "double_delta") {
    check_keys(j, "spec", {"family", "u", "g", "a"});
    DoubleDelta s;
    spec = DoubleDelta{number(j, "u", s.u), number(j, "g", s.g), number(j, "a", s.a)};
  } else if (family == "delta_in_box") {
    check_keys(j, "spec", {"family", "u", "g", "a", "b"});
    DeltaInBox s;
    spec = DeltaInBox{number(j, "u", s.u), number(j, "g", s.g), number(j, "a", s.a),
                      number(j, "b", s.b)};
  } else if (family == "square_double_well") {
    check_keys(j, "spec", {"family", "u", "g", "b", "w"});
    SquareDoubleWell s;
    spec = SquareDoubleWell{number(j, "u", s.u), number(j, "g", s.g), number(j, "b", s.b),
                            number(j, "w", s.w)};
  } else if (family == "linear_box") {
    check_keys(j, "spec", {"family", "g"});
    LinearBox s;
    s.g = number(j, "g", 0.0);
    spec = s;
  } else if (family == "quadratic_pt") {
    check_keys(j, "spec", {"family", "g"});
    spec = QuadraticPT{number(j, "g", 0.0)};
  } else if (family == "linear_pt") {
    check_keys(j, "spec", {"family", "g"});
    spec = LinearPT{number(j, "g", 0.0)};
  } else if (family == "scarf_ii") {
    check_keys(j, "spec", {"family", "v1", "v2"});
    ScarfII s;
    spec = ScarfII{number(j, "v1", s.v1), number(j, "v2", s.v2)};
  } else if (family == "hermitian_counterpart") {
    check_keys(j, "spec", {"family", "of", "sign"});
    if (!j.contains("of")) throw ConfigError("hermitian_counterpart: missing 'of'");
    spec = HermitianCounterpart{as_family(spec_from_json(j.at("of"))), integer(j, "sign", 1)};
  } else {
    throw ConfigError("spec: unknown family '" + family + "'");
  }
  validate(spec);
  return spec;
}

Json to_json(const Rect& r) {
  return {{"re", {r.re_lo, r.re_hi}}, {"im", {r.im_lo, r.im_hi}}};
}

Rect rect_from_json(const Json& j) {
  check_keys(j, "rect", {"re", "im"});
  Rect r;
  std::tie(r.re_lo, r.re_hi) = interval(j, "re");
  std::tie(r.im_lo, r.im_hi) = interval(j, "im");
  if (!(r.re_lo < r.re_hi) || !(r.im_lo <= r.im_hi)) throw ConfigError("rect: empty interval");
  return r;
}

std::vector<double> grid_from_json(const Json& j) {
  std::vector<double> grid;
  if (j.is_array()) {
    for (const Json& v : j) {
      if (!v.is_number()) throw ConfigError("grid: values must be numbers");
      grid.push_back(v.get<double>());
    }
  } else {
    check_keys(j, "grid", {"start", "stop", "num"});
    if (!j.contains("start") || !j.contains("stop") || !j.contains("num")) {
      throw ConfigError("grid: need start, stop and num");
    }
    const int n = integer(j, "num", 0);
    if (n < 2) throw ConfigError("grid: num must be >= 2");
    grid = linspace(number(j, "start", 0.0), number(j, "stop", 0.0), n);
  }
  if (grid.size() < 2) throw ConfigError("grid: need at least two points");
  return grid;
}

RootOptions root_options_from_json(const Json& j, RootOptions o) {
  check_keys(j, "roots",
             {"tol_residual", "tol_step", "max_iter", "dedupe_radius", "real_axis_tol",
              "scan_real_points", "scan_nx", "scan_ny", "scan_depth"});
  o.tol_residual = number(j, "tol_residual", o.tol_residual);
  o.tol_step = number(j, "tol_step", o.tol_step);
  o.max_iter = integer(j, "max_iter", o.max_iter);
  o.dedupe_radius = number(j, "dedupe_radius", o.dedupe_radius);
  o.real_axis_tol = number(j, "real_axis_tol", o.real_axis_tol);
  o.scan_real_points = integer(j, "scan_real_points", o.scan_real_points);
  o.scan_nx = integer(j, "scan_nx", o.scan_nx);
  o.scan_ny = integer(j, "scan_ny", o.scan_ny);
  o.scan_depth = number(j, "scan_depth", o.scan_depth);
  if (o.tol_residual <= 0 || o.max_iter < 1 || o.scan_real_points < 3 || o.scan_nx < 3 ||
      o.scan_ny < 1) {
    throw ConfigError("roots: invalid tolerances or scan sizes");
  }
  return o;
}

RunConfig parse_config(const Json& j) {
  try {
    check_keys(j, "config",
               {"command", "spec", "rect", "axis", "grid", "n_levels", "rescan_every",
                "max_bisections", "reference", "solver", "roots", "transition", "oracle",
                "preset", "out", "format"});
    RunConfig c;
    c.command = text(j, "command", "");
    if (!c.command.empty()) {
      static const std::set<std::string> commands = {"solve", "sweep", "ep", "oracle", "figure"};
      if (!commands.count(c.command)) throw ConfigError("unknown command '" + c.command + "'");
    }
    if (j.contains("spec")) c.spec = spec_from_json(j.at("spec"));
    if (j.contains("rect")) c.rect = rect_from_json(j.at("rect"));
    c.axis = text(j, "axis", c.axis);
    if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"));
    c.n_levels = integer(j, "n_levels", c.n_levels);
    c.rescan_every = integer(j, "rescan_every", c.rescan_every);
    c.max_bisections = integer(j, "max_bisections", c.max_bisections);
    if (j.contains("reference")) {
      const Json& r = j.at("reference");
      if (!r.is_object()) throw ConfigError("reference: expected parameter overrides");
      for (const auto& [key, value] : r.items()) {
        if (!value.is_number()) throw ConfigError("reference." + key + " must be a number");
      }
      c.reference = r;
    }
    if (j.contains("solver")) {
      const Json& s = j.at("solver");
      check_keys(s, "solver", {"dddp_form", "L", "n_steps", "match_point"});
      const std::string form = text(s, "dddp_form", "rederived");
      if (form == "rederived") {
        c.solver.dddp_form = DddpForm::rederived;
      } else if (form == "as_printed") {
        c.solver.dddp_form = DddpForm::as_printed;
      } else {
        throw ConfigError("solver.dddp_form must be rederived or as_printed");
      }
      c.solver.shooting.L = number(s, "L", c.solver.shooting.L);
      c.solver.shooting.n_steps = integer(s, "n_steps", c.solver.shooting.n_steps);
      c.solver.shooting.match_point = number(s, "match_point", c.solver.shooting.match_point);
      if (c.solver.shooting.L <= 0 || c.solver.shooting.n_steps < 10) {
        throw ConfigError("solver: L must be > 0 and n_steps >= 10");
      }
    }
    if (j.contains("roots")) {
      root_options_from_json(j.at("roots"), RootOptions{});
      c.roots = j.at("roots");
    }
    if (j.contains("transition")) {
      const Json& t = j.at("transition");
      check_keys(t, "transition", {"complex_tol", "merge_splitting", "bisect_tol", "contain_tol"});
      c.transition.complex_tol = number(t, "complex_tol", c.transition.complex_tol);
      c.transition.merge_splitting = number(t, "merge_splitting", c.transition.merge_splitting);
      c.transition.bisect_tol = number(t, "bisect_tol", c.transition.bisect_tol);
      c.transition.contain_tol = number(t, "contain_tol", c.transition.contain_tol);
    }
    if (j.contains("oracle")) {
      const Json& o = j.at("oracle");
      check_keys(o, "oracle", {"L", "n"});
      if (o.contains("L")) c.oracle_L = number(o, "L", 0.0);
      c.oracle_n = integer(o, "n", c.oracle_n);
      if (c.oracle_n < 3) throw ConfigError("oracle.n must be >= 3");
    }
    c.preset = text(j, "preset", "");
    c.out = text(j, "out", "");
    const std::string format = text(j, "format", "csv");
    if (format == "csv") {
      c.format = OutputFormat::csv;
    } else if (format == "json") {
      c.format = OutputFormat::json;
    } else {
      throw ConfigError("format must be csv or json");
    }
    if (c.n_levels < 1 || c.rescan_every < 1 || c.max_bisections < 0) {
      throw ConfigError("n_levels and rescan_every must be >= 1, max_bisections >= 0");
    }
    return c;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

Json to_json(const RunConfig& c) {
  Json j = {{"command", c.command},
            {"axis", c.axis},
            {"grid", c.grid},
            {"n_levels", c.n_levels},
            {"rescan_every", c.rescan_every},
            {"max_bisections", c.max_bisections},
            {"solver", solver_json(c.solver)},
            {"roots", c.roots},
            {"transition", transition_options_json(c.transition)},
            {"oracle", {{"L", optional_number(c.oracle_L)}, {"n", c.oracle_n}}},
            {"preset", c.preset},
            {"format", c.format == OutputFormat::csv ? "csv" : "json"}};
  j["spec"] = c.spec ? to_json(*c.spec) : Json(nullptr);
  j["rect"] = c.rect ? to_json(*c.rect) : Json(nullptr);
  j["reference"] = c.reference ? *c.reference : Json(nullptr);
  return j;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string config_hash(const Json& canonical) { return fnv1a_hex(canonical.dump()); }

Json to_json(const SweepPlan& p) {
  return {{"spec", to_json(p.spec_template)},
          {"axis", p.axis},
          {"grid", p.grid},
          {"rect", to_json(p.region)},
          {"n_levels", p.n_levels},
          {"solver", solver_json(p.solver)},
          {"roots", root_options_json(p.root)},
          {"rescan_every", p.rescan_every},
          {"max_bisections", p.max_bisections}};
}

Json to_json(const SweepJob& job) {
  return {{"label", job.label},
          {"plan", to_json(job.plan)},
          {"reference", job.reference ? to_json(*job.reference) : Json(nullptr)},
          {"transition", transition_options_json(job.transition)}};
}

SweepJob sweep_job(const RunConfig& c) {
  if (!c.spec) throw ConfigError("missing 'spec'");
  if (!c.rect) throw ConfigError("missing 'rect'");
  if (c.grid.empty()) throw ConfigError("missing 'grid'");
  SweepJob job;
  job.plan.spec_template = *c.spec;
  job.plan.axis = c.axis;
  job.plan.grid = c.grid;
  job.plan.region = *c.rect;
  job.plan.n_levels = c.n_levels;
  job.plan.solver = c.solver;
  job.plan.root = root_options_from_json(c.roots, RootOptions{});
  job.plan.rescan_every = c.rescan_every;
  job.plan.max_bisections = c.max_bisections;
  validate(job.plan);
  if (c.reference) {
    SweepPlan ref = job.plan;
    for (const auto& [key, value] : c.reference->items()) {
      ref.spec_template = with_parameter(ref.spec_template, key, value.get<double>());
    }
    validate(ref.spec_template);
    job.reference = ref;
  }
  job.transition = c.transition;
  return job;
}

std::vector<SweepRow> sweep_rows(const std::vector<Branch>& branches, double real_axis_tol) {
  std::vector<SweepRow> rows;
  for (const Branch& b : branches) {
    for (const BranchPoint& p : b.points) {
      SweepRow r;
      r.lambda = p.lambda;
      r.branch_id = b.id;
      r.re_E = p.energy.real();
      r.im_E = p.energy.imag();
      r.residual = p.residual;
      const bool complex = std::abs(r.im_E) > real_axis_tol;
      r.classification = to_string(complex ? Classification::conjugate_pair_member
                                           : Classification::real);
      if (complex) r.pair_id = b.pair_id;
      rows.push_back(std::move(r));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.lambda != b.lambda ? a.lambda < b.lambda : a.branch_id < b.branch_id;
  });
  return rows;
}

Json to_json(const SweepRow& r) {
  return {{"lambda", r.lambda},
          {"branch_id", r.branch_id},
          {"re_E", r.re_E},
          {"im_E", r.im_E},
          {"residual", r.residual},
          {"classification", r.classification},
          {"pair_id", r.pair_id ? Json(*r.pair_id) : Json(nullptr)}};
}

SweepRow sweep_row_from_json(const Json& j) {
  SweepRow r;
  r.lambda = j.at("lambda").get<double>();
  r.branch_id = j.at("branch_id").get<int>();
  r.re_E = j.at("re_E").get<double>();
  r.im_E = j.at("im_E").get<double>();
  r.residual = j.at("residual").get<double>();
  r.classification = j.at("classification").get<std::string>();
  if (!j.at("pair_id").is_null()) r.pair_id = j.at("pair_id").get<int>();
  return r;
}

Json to_json(const EPResult& ep) {
  return {{"param_star", ep.param_star},
          {"energy_star", {{"re", ep.energy_star.real()}, {"im", ep.energy_star.imag()}}},
          {"residual_F", ep.residual_F},
          {"residual_dF", ep.residual_dF},
          {"splitting_exponent", ep.splitting_exponent},
          {"iterations", ep.iterations}};
}

EPResult ep_from_json(const Json& j) {
  EPResult ep;
  ep.param_star = j.at("param_star").get<double>();
  ep.energy_star = {j.at("energy_star").at("re").get<double>(),
                    j.at("energy_star").at("im").get<double>()};
  ep.residual_F = j.at("residual_F").get<double>();
  ep.residual_dF = j.at("residual_dF").get<double>();
  ep.splitting_exponent = j.at("splitting_exponent").get<double>();
  ep.iterations = j.at("iterations").get<int>();
  return ep;
}

Json to_json(const TransitionReport& t) {
  return {{"kind", to_string(t.kind)},
          {"lambda_star", optional_number(t.lambda_star)},
          {"lambda_bisect", optional_number(t.lambda_bisect)},
          {"epsilon0", optional_number(t.epsilon0)},
          {"ep", t.ep ? to_json(*t.ep) : Json(nullptr)},
          {"contained", t.contained ? Json(*t.contained) : Json(nullptr)},
          {"final_splitting", optional_number(t.final_splitting)}};
}

TransitionReport transition_from_json(const Json& j) {
  TransitionReport t;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "merging") {
    t.kind = TransitionKind::merging;
  } else if (kind == "coalescing") {
    t.kind = TransitionKind::coalescing;
  } else {
    t.kind = TransitionKind::none;
  }
  t.lambda_star = read_optional(j, "lambda_star");
  t.lambda_bisect = read_optional(j, "lambda_bisect");
  t.epsilon0 = read_optional(j, "epsilon0");
  if (!j.at("ep").is_null()) t.ep = ep_from_json(j.at("ep"));
  if (!j.at("contained").is_null()) t.contained = j.at("contained").get<bool>();
  t.final_splitting = read_optional(j, "final_splitting");
  return t;
}

Json to_json(const DoubletReport& d) {
  Json j = to_json(d.report);
  j["branches"] = {d.first, d.second};
  return j;
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const SweepRow& r : rows) {
    out += format_real(r.lambda) + ',' + std::to_string(r.branch_id) + ',' + format_real(r.re_E) +
           ',' + format_real(r.im_E) + ',' + format_real(r.residual) + ',' + r.classification +
           ',' + (r.pair_id ? std::to_string(*r.pair_id) : std::string()) + '\n';
  }
  return out;
}

Json meta_json(const Json& canonical_config) {
  return {{"version", kVersion}, {"config_hash", config_hash(canonical_config)}};
}

Json sweep_document(const SweepResult& result, const Json& meta, double real_axis_tol) {
  Json rows = Json::array();
  for (const SweepRow& r : sweep_rows(result.branches, real_axis_tol)) rows.push_back(to_json(r));
  Json transitions = Json::array();
  for (const DoubletReport& d : result.transitions) transitions.push_back(to_json(d));
  const Json lowest = transitions.empty() ? Json(nullptr) : transitions.front();
  return {{"rows", rows}, {"transition", lowest}, {"transitions", transitions}, {"meta", meta}};
}

std::string render_sweep(const SweepResult& result, const Json& meta, OutputFormat format,
                         double real_axis_tol) {
  const Json doc = sweep_document(result, meta, real_axis_tol);
  if (format == OutputFormat::json) return doc.dump(2) + '\n';
  std::string out = sweep_csv(sweep_rows(result.branches, real_axis_tol));
  out += "# transition: " + doc.at("transition").dump() + '\n';
  out += "# transitions: " + doc.at("transitions").dump() + '\n';
  out += "# meta: " + meta.dump() + '\n';
  return out;
}

Json roots_document(const std::vector<Root>& roots, const Json& meta) {
  std::vector<cplx> energies;
  for (const Root& r : roots) energies.push_back(r.energy);
  const std::vector<int> partner = pair_conjugates(energies);
  Json rows = Json::array();
  for (size_t i = 0; i < roots.size(); ++i) {
    rows.push_back({{"index", i},
                    {"re_E", roots[i].energy.real()},
                    {"im_E", roots[i].energy.imag()},
                    {"residual", roots[i].residual},
                    {"classification", to_string(roots[i].classification)},
                    {"pair_id", partner[i] >= 0 ? Json(partner[i]) : Json(nullptr)}});
  }
  return {{"rows", rows}, {"meta", meta}};
}

std::string render_roots(const std::vector<Root>& roots, const Json& meta, OutputFormat format) {
  const Json doc = roots_document(roots, meta);
  if (format == OutputFormat::json) return doc.dump(2) + '\n';
  std::string out = kRootHeader;
  out += '\n';
  for (const Json& r : doc.at("rows")) {
    out += std::to_string(r.at("index").get<size_t>()) + ',' +
           format_real(r.at("re_E").get<double>()) + ',' +
           format_real(r.at("im_E").get<double>()) + ',' +
           format_real(r.at("residual").get<double>()) + ',' +
           r.at("classification").get<std::string>() + ',' +
           (r.at("pair_id").is_null() ? std::string() : std::to_string(r.at("pair_id").get<int>())) +
           '\n';
  }
  out += "# meta: " + meta.dump() + '\n';
  return out;
}

}  // namespace ptspectra
