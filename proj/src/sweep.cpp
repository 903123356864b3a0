#include "ptspectra/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ptspectra/errors.hpp"

namespace ptspectra {
namespace {

struct Track {
  Branch branch;
  bool active = true;
  // Last two continuation points, including unrecorded sub-steps.
  double l0 = 0.0, l1 = 0.0;
  cplx e0, e1;
  bool has_prev = false;
  double residual = 0.0;
};

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(a)); }

class Continuation {
 public:
  Continuation(const SweepPlan& plan, CharFamily family)
      : plan_(plan), family_(std::move(family)) {}

  std::vector<Track> tracks;

  // Moves every active track from lambda_a to lambda_b, bisecting the step on failure.
  void step(double lambda_a, double lambda_b, int depth) {
    for (;;) {
      const int bad = attempt(lambda_b);
      if (bad < 0) return;
      if (depth < plan_.max_bisections) {
        const double mid = 0.5 * (lambda_a + lambda_b);
        step(lambda_a, mid, depth + 1);
        step(mid, lambda_b, depth + 1);
        return;
      }
      tracks[static_cast<size_t>(bad)].active = false;
      tracks[static_cast<size_t>(bad)].branch.lost = true;
    }
  }

 private:
  // Returns the index of the first track that could not be continued, or -1 after
  // committing the new energies.
  int attempt(double lambda) {
    CharFn f;
    try {
      f = family_(lambda);
    } catch (const Error&) {
      for (size_t i = 0; i < tracks.size(); ++i) {
        if (tracks[i].active) return static_cast<int>(i);
      }
      return -1;
    }
    std::vector<cplx> accepted;
    std::vector<std::pair<size_t, Root>> found;
    for (size_t i = 0; i < tracks.size(); ++i) {
      Track& t = tracks[i];
      if (!t.active) continue;
      cplx pred = t.e1;
      if (t.has_prev && t.l1 != t.l0) pred += (t.e1 - t.e0) * ((lambda - t.l1) / (t.l1 - t.l0));
      if (f.hermitian) pred = pred.real();
      const double move = std::abs(pred - t.e1);
      // A pair approaching an EP moves like the square root of the distance to it, so the
      // bound also admits jumps up to the gap to the nearest other branch.
      double gap = 0.0;
      for (size_t j = 0; j < tracks.size(); ++j) {
        if (j == i || !tracks[j].active) continue;
        const double d = std::abs(tracks[j].e1 - t.e1);
        if (gap == 0.0 || d < gap) gap = d;
      }
      const double bound = std::max({4.0 * move, 1e-3 * (1.0 + std::abs(t.e1)), gap});
      const double delta = std::max(move, 1e-4 * (1.0 + std::abs(t.e1)));

      std::vector<cplx> seeds{pred, t.e1};
      if (!f.hermitian) {
        seeds.push_back(pred + cplx(delta, delta));
        seeds.push_back(pred + cplx(delta, -delta));
      }
      bool ok = false;
      for (const cplx seed : seeds) {
        try {
          const Root d = polish(deflate(f.eval, accepted), seed, plan_.root);
          Root r = polish(f, d.energy, plan_.root);
          if (std::abs(r.energy - pred) > bound) continue;
          if (std::any_of(accepted.begin(), accepted.end(), [&](cplx a) {
                return std::abs(a - r.energy) < plan_.root.dedupe_radius;
              })) {
            continue;
          }
          accepted.push_back(r.energy);
          found.emplace_back(i, r);
          ok = true;
          break;
        } catch (const Error&) {
        }
      }
      if (!ok) return static_cast<int>(i);
    }
    for (const auto& [i, r] : found) {
      Track& t = tracks[i];
      t.l0 = t.l1;
      t.e0 = t.e1;
      t.l1 = lambda;
      t.e1 = r.energy;
      t.residual = r.residual;
      t.has_prev = true;
    }
    return -1;
  }

  const SweepPlan& plan_;
  CharFamily family_;
};

}  // namespace

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  if (n <= 1) {
    out.push_back(lo);
    return out;
  }
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  out.back() = hi;
  return out;
}

void validate(const SweepPlan& plan) {
  if (plan.grid.size() < 2) throw ConfigError("sweep grid needs at least two points");
  const bool up = plan.grid[1] > plan.grid[0];
  for (size_t i = 1; i < plan.grid.size(); ++i) {
    if ((plan.grid[i] > plan.grid[i - 1]) != up || plan.grid[i] == plan.grid[i - 1]) {
      throw ConfigError("sweep grid must be strictly monotone");
    }
  }
  if (plan.n_levels < 2) throw ConfigError("n_levels must be at least 2");
  if (plan.axis != "a" && plan.axis != "b" && plan.axis != "g" && plan.axis != "v2") {
    throw ConfigError("sweep axis must be one of a, b, g, v2");
  }
  if (plan.region.re_lo >= plan.region.re_hi || plan.region.im_lo > plan.region.im_hi) {
    throw ConfigError("sweep region is empty");
  }
  validate(with_parameter(plan.spec_template, plan.axis, plan.grid.front()));
  validate(with_parameter(plan.spec_template, plan.axis, plan.grid.back()));
}

std::vector<Branch> run_sweep(const SweepPlan& plan) {
  validate(plan);
  const CharFamily family = char_family(plan.spec_template, plan.axis, plan.solver);
  Continuation cont(plan, family);

  int next_id = 0;
  auto add_track = [&](double lambda, const Root& r) {
    Track t;
    t.branch.id = next_id++;
    t.branch.points.push_back({lambda, r.energy, r.residual});
    t.l1 = lambda;
    t.e1 = r.energy;
    t.residual = r.residual;
    cont.tracks.push_back(std::move(t));
  };

  const std::vector<Root> first = find_all_roots(family(plan.grid[0]), plan.region, plan.root);
  if (first.empty()) throw NoConvergence("no roots in the sweep region at the first grid point");
  for (size_t i = 0; i < first.size() && static_cast<int>(i) < plan.n_levels; ++i) {
    add_track(plan.grid[0], first[i]);
  }

  for (size_t k = 1; k < plan.grid.size(); ++k) {
    const double lambda = plan.grid[k];
    cont.step(plan.grid[k - 1], lambda, 0);
    for (Track& t : cont.tracks) {
      if (t.active) t.branch.points.push_back({lambda, t.e1, t.residual});
    }

    const auto active = std::count_if(cont.tracks.begin(), cont.tracks.end(),
                                      [](const Track& t) { return t.active; });
    if (k % static_cast<size_t>(std::max(plan.rescan_every, 1)) != 0 || active >= plan.n_levels) {
      continue;
    }
    Rect rect = plan.region;
    for (const Track& t : cont.tracks) {
      if (!t.active) continue;
      rect.re_lo = std::min(rect.re_lo, t.e1.real());
      rect.re_hi = std::max(rect.re_hi, t.e1.real());
      rect.im_lo = std::min(rect.im_lo, t.e1.imag());
      rect.im_hi = std::max(rect.im_hi, t.e1.imag());
    }
    std::vector<Root> roots;
    try {
      roots = find_all_roots(family(lambda), rect, plan.root);
    } catch (const Error&) {
      continue;
    }
    auto count = active;
    for (const Root& r : roots) {
      if (count >= plan.n_levels) break;
      const bool known = std::any_of(cont.tracks.begin(), cont.tracks.end(), [&](const Track& t) {
        return t.active && near(t.e1, r.energy, 1e-6);
      });
      if (known) continue;
      add_track(lambda, r);
      ++count;
    }
  }

  std::vector<Branch> out;
  for (Track& t : cont.tracks) out.push_back(std::move(t.branch));
  assign_pairs(out, plan.root);
  return out;
}

std::vector<int> pair_conjugates(const std::vector<cplx>& energies, double real_axis_tol,
                                 double match_tol) {
  const size_t n = energies.size();
  std::vector<int> partner(n, -1);
  struct Candidate {
    double distance;
    size_t upper, lower;
  };
  std::vector<Candidate> candidates;
  for (size_t i = 0; i < n; ++i) {
    if (!(energies[i].imag() >= real_axis_tol)) continue;
    for (size_t j = 0; j < n; ++j) {
      if (!(energies[j].imag() <= -real_axis_tol)) continue;
      const double d = std::abs(energies[i] - std::conj(energies[j]));
      if (d <= match_tol * (1.0 + std::abs(energies[i]))) candidates.push_back({d, i, j});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.distance < b.distance; });
  for (const Candidate& c : candidates) {
    if (partner[c.upper] >= 0 || partner[c.lower] >= 0) continue;
    partner[c.upper] = static_cast<int>(c.lower);
    partner[c.lower] = static_cast<int>(c.upper);
  }
  return partner;
}

void assign_pairs(std::vector<Branch>& branches, const RootOptions& opts) {
  std::map<double, std::vector<std::pair<size_t, cplx>>> by_lambda;
  for (size_t b = 0; b < branches.size(); ++b) {
    for (const BranchPoint& p : branches[b].points) by_lambda[p.lambda].emplace_back(b, p.energy);
  }
  std::vector<std::map<size_t, int>> votes(branches.size());
  for (const auto& [lambda, members] : by_lambda) {
    std::vector<cplx> energies;
    for (const auto& m : members) energies.push_back(m.second);
    const std::vector<int> partner = pair_conjugates(energies, opts.real_axis_tol, 1e-6);
    for (size_t i = 0; i < members.size(); ++i) {
      if (partner[i] >= 0) ++votes[members[i].first][members[static_cast<size_t>(partner[i])].first];
    }
  }
  for (size_t b = 0; b < branches.size(); ++b) {
    branches[b].pair_id.reset();
    int best = 0;
    for (const auto& [other, n] : votes[b]) {
      if (n > best) {
        best = n;
        branches[b].pair_id = branches[other].id;
      }
    }
  }
}

std::vector<std::pair<size_t, size_t>> doublets(const std::vector<Branch>& branches,
                                                double complex_tol) {
  std::vector<std::pair<size_t, size_t>> out;
  std::vector<bool> used(branches.size(), false);
  auto index_of = [&](int id) -> std::optional<size_t> {
    for (size_t i = 0; i < branches.size(); ++i) {
      if (branches[i].id == id) return i;
    }
    return std::nullopt;
  };
  for (size_t i = 0; i < branches.size(); ++i) {
    if (used[i] || !branches[i].pair_id) continue;
    const auto j = index_of(*branches[i].pair_id);
    if (!j || used[*j] || branches[*j].pair_id != branches[i].id) continue;
    used[i] = used[*j] = true;
    out.emplace_back(std::min(i, *j), std::max(i, *j));
  }
  constexpr size_t kNone = static_cast<size_t>(-1);
  size_t pending = kNone;
  for (size_t i = 0; i < branches.size(); ++i) {
    if (used[i]) continue;
    const bool real = std::all_of(branches[i].points.begin(), branches[i].points.end(),
                                  [&](const BranchPoint& p) {
                                    return std::abs(p.energy.imag()) <= complex_tol;
                                  });
    if (!real) continue;
    if (pending != kNone) {
      out.emplace_back(pending, i);
      pending = kNone;
    } else {
      pending = i;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(TransitionKind k) {
  switch (k) {
    case TransitionKind::merging:
      return "merging";
    case TransitionKind::coalescing:
      return "coalescing";
    case TransitionKind::none:
      break;
  }
  return "none";
}

double richardson_limit(double lambda1, double mid1, double split1, double lambda2, double mid2,
                        double split2) {
  (void)lambda1;
  (void)lambda2;
  if (!(split2 > 1e-10) || !(split1 > split2)) return mid2;
  const double r = (split2 / split1) * (split2 / split1);
  return (mid2 - r * mid1) / (1.0 - r);
}

double bisect_transition(const CharFamily& family, double lambda_real, cplx center_real,
                         double lambda_complex, cplx center_complex, double tol,
                         const RootOptions& root_opts) {
  RootOptions tight = root_opts;
  tight.tol_residual = std::min(root_opts.tol_residual, 1e-14);
  const double span = lambda_complex - lambda_real;

  // Polishes from an off-axis seed at the interpolated pair centre; Newton from a seed
  // with positive real offset converges to the nearer real root below the EP and to the
  // upper member of the pair above it.
  auto is_complex = [&](double lambda) {
    const double t = (lambda - lambda_real) / span;
    const double c = (center_real + t * (center_complex - center_real)).real();
    const double delta = 1e-3 * (1.0 + std::abs(c));
    const CharFn f = family(lambda);
    Root r;
    try {
      r = polish(f, cplx(c + delta, delta), tight);
    } catch (const Error&) {
      r = polish(f, cplx(c + delta, delta), root_opts);
    }
    return std::abs(r.energy.imag()) > std::max(root_opts.real_axis_tol, 1e-7);
  };

  double lo = lambda_real;
  double hi = lambda_complex;
  for (int it = 0; it < 200 && std::abs(hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (is_complex(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TransitionReport classify_transition(const Branch& first, const Branch& second,
                                     const CharFamily& family,
                                     const std::optional<std::pair<Branch, Branch>>& reference,
                                     const RootOptions& root_opts, const TransitionOptions& opts) {
  struct Pt {
    double lambda;
    cplx a, b;
  };
  std::map<double, cplx> other;
  for (const BranchPoint& p : second.points) other[p.lambda] = p.energy;
  std::vector<Pt> pts;
  for (const BranchPoint& p : first.points) {
    const auto it = other.find(p.lambda);
    if (it != other.end()) pts.push_back({p.lambda, p.energy, it->second});
  }

  TransitionReport rep;
  if (pts.size() < 2) return rep;

  auto is_complex = [&](const Pt& p) {
    return std::max(std::abs(p.a.imag()), std::abs(p.b.imag())) > opts.complex_tol;
  };
  std::vector<size_t> flips;
  for (size_t k = 1; k < pts.size(); ++k) {
    if (is_complex(pts[k]) != is_complex(pts[k - 1])) flips.push_back(k);
  }
  if (flips.size() > 1) {
    throw AmbiguousTransition("Im E crosses the real-axis tolerance " +
                              std::to_string(flips.size()) + " times");
  }

  // Whether Re E of the complex pair lies within the Hermitian pair at every shared grid
  // point where the pair is complex.
  auto containment = [&]() -> std::optional<bool> {
    if (!reference) return std::nullopt;
    std::map<double, std::pair<cplx, cplx>> ref;
    std::map<double, cplx> ref_second;
    for (const BranchPoint& p : reference->second.points) ref_second[p.lambda] = p.energy;
    for (const BranchPoint& p : reference->first.points) {
      const auto it = ref_second.find(p.lambda);
      if (it != ref_second.end()) ref[p.lambda] = {p.energy, it->second};
    }
    std::optional<bool> result;
    for (const Pt& p : pts) {
      if (!is_complex(p)) continue;
      const auto it = ref.find(p.lambda);
      if (it == ref.end()) continue;
      const double lo = std::min(it->second.first.real(), it->second.second.real());
      const double hi = std::max(it->second.first.real(), it->second.second.real());
      const double re = 0.5 * (p.a.real() + p.b.real());
      const double slack = opts.contain_tol * (1.0 + std::abs(re));
      const bool in = re >= lo - slack && re <= hi + slack;
      result = result.value_or(true) && in;
    }
    return result;
  };

  if (flips.size() == 1) {
    const size_t k = flips[0];
    const size_t ir = is_complex(pts[k]) ? k - 1 : k;
    const size_t ic = is_complex(pts[k]) ? k : k - 1;
    const cplx center_r = 0.5 * (pts[ir].a + pts[ir].b);
    const cplx center_c = 0.5 * (pts[ic].a + pts[ic].b);
    const double lambda_bis = bisect_transition(family, pts[ir].lambda, center_r, pts[ic].lambda,
                                                center_c, opts.bisect_tol, root_opts);
    const double t = (lambda_bis - pts[ir].lambda) / (pts[ic].lambda - pts[ir].lambda);
    const cplx seed = (center_r + t * (center_c - center_r)).real();
    const EPResult ep = find_ep(family, seed, lambda_bis, root_opts);

    rep.kind = TransitionKind::coalescing;
    rep.ep = ep;
    rep.lambda_star = ep.param_star;
    rep.lambda_bisect = lambda_bis;

    rep.contained = containment();
    return rep;
  }

  if (is_complex(pts.front())) {
    rep.contained = containment();
    return rep;
  }

  // Real throughout: merging if the splitting shrinks monotonically over the second
  // half of the sweep and ends small.
  std::vector<double> split;
  for (const Pt& p : pts) split.push_back(std::abs(p.a - p.b));
  rep.final_splitting = split.back();
  bool monotone = true;
  for (size_t k = split.size() / 2 + 1; k < split.size(); ++k) {
    if (split[k] > split[k - 1] * (1.0 + 1e-9) + 1e-14) monotone = false;
  }
  if (!monotone || !(split.back() < opts.merge_splitting)) return rep;

  rep.kind = TransitionKind::merging;
  const size_t n = pts.size();
  const size_t j = n - 1 - std::max<size_t>(1, n / 5);
  auto mid = [](const Pt& p) { return 0.5 * (p.a.real() + p.b.real()); };
  rep.epsilon0 = richardson_limit(pts[j].lambda, mid(pts[j]), split[j], pts[n - 1].lambda,
                                  mid(pts[n - 1]), split[n - 1]);
  return rep;
}

SweepResult sweep_and_classify(const SweepPlan& plan, const std::optional<SweepPlan>& reference,
                               const TransitionOptions& opts) {
  SweepResult out;
  out.branches = run_sweep(plan);

  std::vector<Branch> ref_branches;
  std::vector<std::pair<size_t, size_t>> ref_doublets;
  if (reference) {
    ref_branches = run_sweep(*reference);
    ref_doublets = doublets(ref_branches, opts.complex_tol);
  }

  const CharFamily family = char_family(plan.spec_template, plan.axis, plan.solver);
  const auto pairs = doublets(out.branches, opts.complex_tol);
  for (size_t k = 0; k < pairs.size(); ++k) {
    std::optional<std::pair<Branch, Branch>> ref;
    if (k < ref_doublets.size()) {
      ref = std::make_pair(ref_branches[ref_doublets[k].first],
                           ref_branches[ref_doublets[k].second]);
    }
    DoubletReport d;
    d.first = pairs[k].first;
    d.second = pairs[k].second;
    d.report = classify_transition(out.branches[d.first], out.branches[d.second], family, ref,
                                   plan.root, opts);
    out.transitions.push_back(std::move(d));
  }
  return out;
}

}  // namespace ptspectra
