#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ptspectra/errors.hpp"
#include "ptspectra/io.hpp"
#include "ptspectra/presets.hpp"

using namespace ptspectra;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kNoEP = 4 };

struct Args {
  std::string command;
  std::string config_path;
  std::string out;
  std::string format;
  std::string preset;
  std::string axis;
};

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::string series_path(const std::string& out, const std::string& label) {
  const std::filesystem::path p(out);
  std::filesystem::path name = p.stem();
  name += "_" + label;
  name += p.extension();
  return (p.parent_path() / name).string();
}

RootOptions solve_root_options(const RunConfig& c) {
  return root_options_from_json(c.roots, RootOptions{});
}

int cmd_solve(const RunConfig& c) {
  if (!c.spec || !c.rect) throw ConfigError("solve needs 'spec' and 'rect'");
  const auto roots = eigenvalues(*c.spec, *c.rect, c.solver, solve_root_options(c));
  emit(c.out, render_roots(roots, meta_json(to_json(c)), c.format));
  return kOk;
}

int cmd_oracle(const RunConfig& c) {
  if (!c.spec || !c.rect) throw ConfigError("oracle needs 'spec' and 'rect'");
  const double L = c.oracle_L.value_or(default_oracle_half_width(*c.spec));
  const auto roots = oracle_eigenvalues(*c.spec, L, c.oracle_n, *c.rect,
                                        root_options_from_json(c.roots, oracle_root_options()));
  emit(c.out, render_roots(roots, meta_json(to_json(c)), c.format));
  return kOk;
}

SweepResult run_job(const SweepJob& job) {
  std::fprintf(stderr, "sweep %s: %s over %zu points of %s\n",
               job.label.empty() ? "-" : job.label.c_str(),
               family_name(job.plan.spec_template).c_str(), job.plan.grid.size(),
               job.plan.axis.c_str());
  SweepResult r = sweep_and_classify(job.plan, job.reference, job.transition);
  for (const Branch& b : r.branches) {
    std::fprintf(stderr, "  branch %d: %zu points%s\n", b.id, b.points.size(),
                 b.lost ? " (lost)" : "");
  }
  return r;
}

int cmd_sweep(const RunConfig& c) {
  const SweepJob job = sweep_job(c);
  const SweepResult r = run_job(job);
  emit(c.out, render_sweep(r, meta_json(to_json(c)), c.format, job.plan.root.real_axis_tol));
  return kOk;
}

int cmd_ep(const RunConfig& c) {
  const SweepJob job = sweep_job(c);
  const SweepResult r = run_job(job);
  const Json meta = meta_json(to_json(c));
  Json transitions = Json::array();
  for (const DoubletReport& d : r.transitions) transitions.push_back(to_json(d));

  for (const DoubletReport& d : r.transitions) {
    if (d.report.kind != TransitionKind::coalescing || !d.report.ep) continue;
    const Json doc = {{"ep", to_json(*d.report.ep)}, {"transition", to_json(d)}, {"meta", meta}};
    if (c.format == OutputFormat::json) {
      emit(c.out, doc.dump(2) + '\n');
    } else {
      const EPResult& ep = *d.report.ep;
      std::string text = "param_star,re_E,im_E,residual_F,residual_dF,splitting_exponent\n";
      text += format_real(ep.param_star) + ',' + format_real(ep.energy_star.real()) + ',' +
              format_real(ep.energy_star.imag()) + ',' + format_real(ep.residual_F) + ',' +
              format_real(ep.residual_dF) + ',' + format_real(ep.splitting_exponent) + '\n';
      text += "# transition: " + doc.at("transition").dump() + '\n';
      text += "# meta: " + meta.dump() + '\n';
      emit(c.out, text);
    }
    return kOk;
  }

  const Json doc = {{"ep", nullptr}, {"transitions", transitions}, {"meta", meta}};
  emit(c.out, doc.dump(2) + '\n');
  std::string kinds;
  for (const DoubletReport& d : r.transitions) {
    kinds += (kinds.empty() ? "" : ", ") + to_string(d.report.kind);
  }
  std::fprintf(stderr, "no exceptional point in the sweep (doublets: %s)\n",
               kinds.empty() ? "none found" : kinds.c_str());
  return kNoEP;
}

int cmd_figure(const RunConfig& c, const std::string& axis) {
  if (c.preset.empty()) throw ConfigError("figure needs a preset");
  const auto jobs = preset_jobs(c.preset, axis);
  std::string combined;
  for (const SweepJob& job : jobs) {
    const SweepResult r = run_job(job);
    Json canonical = to_json(job);
    canonical["preset"] = c.preset;
    const std::string text =
        render_sweep(r, meta_json(canonical), c.format, job.plan.root.real_axis_tol);
    if (c.out.empty()) {
      combined += "# " + job.label + '\n' + text;
    } else {
      emit(jobs.size() == 1 ? c.out : series_path(c.out, job.label), text);
    }
  }
  if (c.out.empty()) emit("", combined);
  return kOk;
}

int run(const Args& args) {
  Json raw = args.config_path.empty() ? Json::object() : load_json(args.config_path);
  if (!raw.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c = parse_config(raw);
  if (!c.command.empty() && c.command != args.command) {
    throw ConfigError("config is for '" + c.command + "', not '" + args.command + "'");
  }
  c.command = args.command;
  if (!args.out.empty()) c.out = args.out;
  if (!args.format.empty()) c.format = args.format == "json" ? OutputFormat::json : OutputFormat::csv;
  if (!args.preset.empty()) c.preset = args.preset;
  if (args.command != "figure" && !c.preset.empty()) {
    throw ConfigError("--preset applies to the figure command");
  }
  if (args.command != "figure" && args.config_path.empty()) {
    throw ConfigError(args.command + " needs --config");
  }

  if (args.command == "solve") return cmd_solve(c);
  if (args.command == "oracle") return cmd_oracle(c);
  if (args.command == "sweep") return cmd_sweep(c);
  if (args.command == "ep") return cmd_ep(c);
  std::string axis = args.axis;
  if (axis.empty() && raw.contains("axis")) axis = c.axis;
  return cmd_figure(c, axis);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of PT-symmetric double wells: roots, sweeps and exceptional points"};
  Args args;
  app.add_option("command", args.command, "solve, sweep, ep, oracle or figure")
      ->required()
      ->check(CLI::IsMember({"solve", "sweep", "ep", "oracle", "figure"}));
  app.add_option("--config", args.config_path, "JSON run configuration");
  app.add_option("--out", args.out, "output path (stdout if omitted)");
  app.add_option("--format", args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--preset", args.preset, "figure preset")->check(CLI::IsMember(preset_names()));
  app.add_option("--axis", args.axis, "alternate sweep axis of a preset (fig4: a or b)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    return run(args);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const BadBracket& e) {
    std::fprintf(stderr, "no exceptional point: %s\n", e.what());
    return kNoEP;
  } catch (const Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return kNumerical;
  }
}
