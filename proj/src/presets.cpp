#include "ptspectra/presets.hpp"

#include <cstdio>

#include "ptspectra/errors.hpp"

namespace ptspectra {
namespace {

std::string g_label(double g) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "g%g", g);
  return buf;
}

SweepPlan plan(PotentialSpec spec, std::string axis, std::vector<double> grid, Rect region,
               int n_levels) {
  SweepPlan p;
  p.spec_template = std::move(spec);
  p.axis = std::move(axis);
  p.grid = std::move(grid);
  p.region = region;
  p.n_levels = n_levels;
  return p;
}

// One job per coupling; the g = 0 sweep doubles as the containment reference.
std::vector<SweepJob> coupling_series(const SweepPlan& base, const std::vector<double>& couplings) {
  std::vector<SweepJob> jobs;
  const SweepPlan reference = [&] {
    SweepPlan r = base;
    r.spec_template = with_parameter(base.spec_template, "g", 0.0);
    return r;
  }();
  for (double g : couplings) {
    SweepJob job;
    job.label = g_label(g);
    job.plan = base;
    job.plan.spec_template = with_parameter(base.spec_template, "g", g);
    if (g != 0.0) job.reference = reference;
    jobs.push_back(std::move(job));
  }
  return jobs;
}

// PT sweep in g plus the Hermitian counterpart over its own range.
std::vector<SweepJob> fig2(const PtFamily& family, std::vector<double> pt_grid, Rect pt_rect,
                           std::vector<double> herm_grid, Rect herm_rect) {
  const PotentialSpec pt = std::visit([](const auto& s) -> PotentialSpec { return s; }, family);
  SweepJob a;
  a.label = "pt";
  a.plan = plan(pt, "g", std::move(pt_grid), pt_rect, 4);
  SweepJob b;
  b.label = "hermitian";
  b.plan = plan(HermitianCounterpart{family, 1}, "g", std::move(herm_grid), herm_rect, 4);
  return {a, b};
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig2a", "fig2b", "fig2c",
                                                 "fig3",  "fig4",  "fig5"};
  return names;
}

std::vector<SweepJob> preset_jobs(const std::string& name, const std::string& axis) {
  if (!axis.empty() && !(name == "fig4" && (axis == "a" || axis == "b"))) {
    throw ConfigError("preset " + name + " has no alternate axis '" + axis + "'");
  }
  if (name == "fig2a") {
    return fig2(LinearBox{}, linspace(0.0, 15.0, 61), {0.5, 40.0, -10.0, 10.0},
                linspace(0.0, 15.0, 61), {-30.0, 50.0, -1.0, 1.0});
  }
  if (name == "fig2b") {
    return fig2(QuadraticPT{}, linspace(0.0, 3.0, 61), {0.1, 8.0, -5.0, 5.0},
                linspace(0.0, 0.2, 41), {-2.0, 8.0, -1.0, 1.0});
  }
  if (name == "fig2c") {
    return fig2(LinearPT{}, linspace(0.0, 1.5, 61), {0.1, 8.0, -5.0, 5.0},
                linspace(0.0, 0.8, 41), {-2.0, 8.0, -1.0, 1.0});
  }
  if (name == "fig3") {
    auto jobs = coupling_series(plan(DoubleDelta{2.0, 0.0, 0.5}, "a", linspace(0.5, 8.0, 151),
                                     {-4.0, -1e-4, -2.0, 2.0}, 2),
                                {0.0, 0.1, 1.0});
    // The second level of the strongly non-Hermitian sweep binds only at a ~ 0.85.
    jobs.back().plan.rescan_every = 1;
    return jobs;
  }
  if (name == "fig4") {
    if (axis == "b") {
      return coupling_series(plan(DeltaInBox{2.0, 0.0, 3.0, 0.3}, "b", linspace(0.3, 2.0, 69),
                                  {-4.0, 8.0, -2.0, 2.0}, 4),
                             {0.0, 0.1, 1.0});
    }
    return coupling_series(plan(DeltaInBox{2.0, 0.0, 2.2, 2.0}, "a", linspace(2.2, 8.0, 117),
                                {-4.0, 8.0, -2.0, 2.0}, 4),
                           {0.0, 0.1, 1.0});
  }
  if (name == "fig5") {
    return coupling_series(plan(SquareDoubleWell{50.0, 0.0, 0.05, 1.0}, "b",
                                linspace(0.05, 0.6, 56), {-49.9, -0.01, -15.0, 15.0}, 6),
                           {0.0, 1.0, 5.0, 10.0});
  }
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace ptspectra
