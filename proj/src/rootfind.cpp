#include "ptspectra/rootfind.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ptspectra/errors.hpp"

namespace ptspectra {
namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double safe_abs(const std::function<cplx(cplx)>& f, cplx e) {
  try {
    const cplx v = f(e);
    return finite(v) ? std::abs(v) : std::numeric_limits<double>::infinity();
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

// One Muller step through (x0, f0), (x1, f1), (x2, f2); returns the new abscissa.
cplx muller_step(cplx x0, cplx x1, cplx x2, cplx f0, cplx f1, cplx f2) {
  const cplx q = (x2 - x1) / (x1 - x0);
  const cplx a = q * f2 - q * (1.0 + q) * f1 + q * q * f0;
  const cplx b = (2.0 * q + 1.0) * f2 - (1.0 + q) * (1.0 + q) * f1 + q * q * f0;
  const cplx c = (1.0 + q) * f2;
  const cplx disc = std::sqrt(b * b - 4.0 * a * c);
  cplx den = std::abs(b + disc) >= std::abs(b - disc) ? b + disc : b - disc;
  if (den == cplx(0.0)) den = cplx(1.0);
  return x2 - (x2 - x1) * 2.0 * c / den;
}

}  // namespace

std::function<cplx(cplx)> deflate(const std::function<cplx(cplx)>& f,
                                  const std::vector<cplx>& known) {
  if (known.empty()) return f;
  return [f, known](cplx e) {
    cplx v = f(e);
    for (const cplx k : known) v /= (e - k);
    return v;
  };
}

namespace {

bool less_energy(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

std::string to_string(Classification c) {
  return c == Classification::real ? "real" : "conjugate_pair_member";
}

namespace {

Root polish_raw(const std::function<cplx(cplx)>& f, cplx seed, const RootOptions& opts) {
  cplx e = seed;
  cplx fe = f(e);
  if (!finite(fe)) throw NoConvergence("characteristic function not finite at seed");

  bool muller = false;
  cplx x0, x1, f0, f1;
  for (int it = 0; it <= opts.max_iter; ++it) {
    if (std::abs(fe) <= opts.tol_residual) return Root{e, std::abs(fe), {}, true, it};
    if (it == opts.max_iter) break;
    const double scale = std::max(1.0, std::abs(e));

    if (!muller) {
      const double h = 1e-7 * scale;
      const cplx d = (f(e + h) - f(e - h)) / (2.0 * h);
      cplx step = -fe / d;
      if (finite(step)) {
        cplx trial = e + step;
        double ft_abs = safe_abs(f, trial);
        for (int k = 0; k < 6 && !(ft_abs < std::abs(fe)); ++k) {
          step *= 0.5;
          trial = e + step;
          ft_abs = safe_abs(f, trial);
        }
        if (ft_abs < std::abs(fe)) {
          e = trial;
          fe = f(e);
          continue;
        }
        if (std::abs(step) <= opts.tol_step * scale) break;
      }
      // Newton stagnated: seed Muller with a symmetric stencil around e.
      muller = true;
      const double delta = std::max(1e-6 * scale, std::min(std::abs(step), 1e-2 * scale));
      x0 = e - delta;
      x1 = e + delta;
      f0 = f(x0);
      f1 = f(x1);
    }

    const cplx next = muller_step(x0, x1, e, f0, f1, fe);
    if (!finite(next)) break;
    const cplx fn = f(next);
    if (!finite(fn)) break;
    const double moved = std::abs(next - e);
    x0 = x1;
    f0 = f1;
    x1 = e;
    f1 = fe;
    e = next;
    fe = fn;
    if (moved <= opts.tol_step * scale && std::abs(fe) > opts.tol_residual) break;
  }
  throw NoConvergence("polish: no convergence from seed (" + std::to_string(seed.real()) + ", " +
                      std::to_string(seed.imag()) + "), |F| = " + std::to_string(std::abs(fe)));
}

}  // namespace

Root polish(const std::function<cplx(cplx)>& f, cplx seed, const RootOptions& opts) {
  try {
    return polish_raw(f, seed, opts);
  } catch (const NoConvergence&) {
    throw;
  } catch (const Error& e) {
    // An iterate left the domain where F is defined.
    throw NoConvergence(std::string("polish: ") + e.what());
  }
}

Root polish(const CharFn& f, cplx seed, const RootOptions& opts) {
  Root r = polish(f.eval, seed, opts);
  r.physical = f.is_physical(r.energy);
  classify_root(r, f, opts);
  return r;
}

void classify_root(Root& root, const CharFn& f, const RootOptions& opts) {
  if (std::abs(root.energy.imag()) < opts.real_axis_tol) {
    if (root.energy.imag() != 0.0) {
      root.energy = cplx(root.energy.real(), 0.0);
      root.residual = std::abs(f(root.energy));
    }
    root.classification = Classification::real;
  } else {
    root.classification = Classification::conjugate_pair_member;
  }
}

std::vector<cplx> scan_real(const CharFn& f, double e_lo, double e_hi, int n) {
  std::vector<cplx> seeds;
  if (n < 2) return seeds;
  const double dx = (e_hi - e_lo) / (n - 1);
  double prev_x = e_lo;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < n; ++i) {
    const double x = e_lo + i * dx;
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
      v = f(cplx(x, 0.0)).real();
    } catch (const Error&) {
    }
    if (std::isfinite(v) && std::isfinite(prev) && ((prev < 0) != (v < 0))) {
      seeds.emplace_back(0.5 * (prev_x + x), 0.0);
    }
    prev = v;
    prev_x = x;
  }
  return seeds;
}

namespace {

std::vector<cplx> real_dips(const CharFn& f, double e_lo, double e_hi, int n, double depth) {
  std::vector<cplx> out;
  if (n < 3) return out;
  const double dx = (e_hi - e_lo) / (n - 1);
  std::vector<double> v(n, std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < n; ++i) {
    try {
      v[i] = f(cplx(e_lo + i * dx, 0.0)).real();
    } catch (const Error&) {
    }
  }
  std::vector<double> mags;
  for (double x : v) {
    if (std::isfinite(x)) mags.push_back(std::abs(x));
  }
  if (mags.empty()) return out;
  std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
  const double threshold = mags[mags.size() / 2] / depth;

  for (int i = 1; i + 1 < n; ++i) {
    const double a = v[i - 1], b = v[i], c = v[i + 1];
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) continue;
    if ((a < 0) != (b < 0) || (b < 0) != (c < 0)) continue;
    if (!(std::abs(b) < std::abs(a) && std::abs(b) <= std::abs(c))) continue;
    // Vertex of the parabola through the three samples, then Newton on the real line.
    const double curv = a - 2.0 * b + c;
    double x = e_lo + i * dx;
    if (curv != 0.0) x += 0.5 * dx * (a - c) / curv;
    double fx = b;
    try {
      fx = f(cplx(x)).real();
      for (int it = 0; it < 6 && std::abs(fx) > threshold; ++it) {
        const double h = 1e-7 * std::max(1.0, std::abs(x));
        const double d = (f(cplx(x + h)).real() - f(cplx(x - h)).real()) / (2.0 * h);
        if (d == 0.0) break;
        const double nx = x - fx / d;
        if (std::abs(nx - (e_lo + i * dx)) > 2.0 * dx) break;
        x = nx;
        fx = f(cplx(x)).real();
      }
    } catch (const Error&) {
      continue;
    }
    if (std::abs(fx) <= threshold || std::abs(b) <= threshold) out.emplace_back(x, 0.0);
  }
  return out;
}

}  // namespace

std::vector<cplx> scan_complex(const CharFn& f, const Rect& rect, int nx, int ny, double depth) {
  nx = std::max(nx, 2);
  ny = std::max(ny, 1);
  const double dx = (rect.re_hi - rect.re_lo) / (nx - 1);
  const double dy = ny > 1 ? (rect.im_hi - rect.im_lo) / (ny - 1) : 0.0;
  auto point = [&](int i, int j) { return cplx(rect.re_lo + i * dx, rect.im_lo + j * dy); };

  std::vector<double> mag(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) mag[j * nx + i] = safe_abs(f.eval, point(i, j));
  }
  std::vector<double> sorted;
  sorted.reserve(mag.size());
  for (double m : mag) {
    if (std::isfinite(m)) sorted.push_back(m);
  }
  if (sorted.empty()) return {};
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double threshold = sorted[sorted.size() / 2] / depth;

  // A grid minimum sits up to half a cell from the zero it marks, so each candidate
  // gets a few Newton steps (kept within two cells) before the depth test.
  const double reach = 2.0 * std::hypot(dx, dy);
  auto refine = [&](cplx z, double m) -> std::pair<cplx, double> {
    cplx best = z;
    double best_m = m;
    for (int it = 0; it < 4; ++it) {
      try {
        const double step = 1e-7 * std::max(1.0, std::abs(best));
        const cplx fz = f.eval(best);
        const cplx df = (f.eval(best + step) - f.eval(best - step)) / (2.0 * step);
        if (df == cplx(0.0)) break;
        const cplx next = best - fz / df;
        if (std::abs(next - z) > reach) break;
        const double mn = std::abs(f.eval(next));
        if (!(mn < best_m)) break;
        best = next;
        best_m = mn;
      } catch (const Error&) {
        break;
      }
    }
    return {best, best_m};
  };

  std::vector<cplx> seeds;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double m = mag[j * nx + i];
      if (!std::isfinite(m)) continue;
      bool minimum = true;
      for (int dj = -1; dj <= 1 && minimum; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di;
          const int jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
          if (mag[jj * nx + ii] < m) {
            minimum = false;
            break;
          }
        }
      }
      if (!minimum) continue;
      const auto [z, mz] = m <= threshold ? std::pair{point(i, j), m} : refine(point(i, j), m);
      if (!(mz <= threshold)) continue;
      seeds.push_back(z);
      if (z.imag() != 0.0) seeds.push_back(std::conj(z));
    }
  }
  std::sort(seeds.begin(), seeds.end(), less_energy);
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  return seeds;
}

std::vector<Root> find_all_roots(const CharFn& f, const Rect& rect, const RootOptions& opts,
                                 int* failed_seeds) {
  std::vector<cplx> seeds;
  double cell = 0.0;
  if (f.hermitian) {
    const int n = opts.scan_real_points;
    const double dx = (rect.re_hi - rect.re_lo) / std::max(n - 1, 1);
    for (cplx mid : scan_real(f, rect.re_lo, rect.re_hi, n)) {
      // Bisect the bracketing cell on Re F before polishing.
      double lo = mid.real() - 0.5 * dx;
      double hi = mid.real() + 0.5 * dx;
      try {
        double flo = f(cplx(lo)).real();
        for (int k = 0; k < 40; ++k) {
          const double m = 0.5 * (lo + hi);
          const double fm = f(cplx(m)).real();
          if ((fm < 0) == (flo < 0)) {
            lo = m;
            flo = fm;
          } else {
            hi = m;
          }
        }
      } catch (const Error&) {
      }
      seeds.emplace_back(0.5 * (lo + hi), 0.0);
    }
    // Doublets narrower than the sampling step give no sign change, only a dip in |F|.
    for (cplx dip : real_dips(f, rect.re_lo, rect.re_hi, n, opts.scan_depth)) {
      const bool seen = std::any_of(seeds.begin(), seeds.end(),
                                    [&](cplx s) { return std::abs(s - dip) < 2.0 * dx; });
      if (!seen) seeds.push_back(dip);
    }
    std::sort(seeds.begin(), seeds.end(), less_energy);
    cell = dx;
  } else {
    seeds = scan_complex(f, rect, opts.scan_nx, opts.scan_ny, opts.scan_depth);
    cell = std::hypot((rect.re_hi - rect.re_lo) / std::max(opts.scan_nx - 1, 1),
                      (rect.im_hi - rect.im_lo) / std::max(opts.scan_ny - 1, 1));
  }

  std::vector<cplx> known;
  std::vector<Root> roots;
  int failures = 0;

  auto try_seed = [&](cplx seed) -> bool {
    try {
      const Root deflated = polish(deflate(f.eval, known), seed, opts);
      Root r = polish(f, deflated.energy, opts);
      for (const cplx k : known) {
        if (std::abs(k - r.energy) < opts.dedupe_radius) return false;
      }
      known.push_back(r.energy);
      if (rect.contains(r.energy)) roots.push_back(r);
      return true;
    } catch (const Error&) {
      ++failures;
    }
    return false;
  };

  for (const cplx seed : seeds) {
    if (!try_seed(seed)) continue;
    // Closely spaced roots can share one grid minimum; retry the same seed deflated.
    for (int extra = 0; extra < 2; ++extra) {
      if (!try_seed(seed)) break;
      if (std::abs(known.back() - seed) > 3.0 * cell) break;
    }
    if (!f.hermitian && std::abs(known.back().imag()) >= opts.real_axis_tol) {
      try_seed(std::conj(known.back()));
    }
  }

  std::vector<Root> out;
  for (Root& r : roots) {
    if (r.physical) out.push_back(r);
  }
  std::sort(out.begin(), out.end(),
            [](const Root& a, const Root& b) { return less_energy(a.energy, b.energy); });
  if (failed_seeds) *failed_seeds = failures;
  return out;
}

cplx derivative(const CharFn& f, cplx energy) {
  const double h = 1e-4 * std::max(1.0, std::abs(energy));
  return (-f(energy + 2.0 * h) + 8.0 * f(energy + h) - 8.0 * f(energy - h) +
          f(energy - 2.0 * h)) /
         (12.0 * h);
}

EPResult find_ep(const CharFamily& family, cplx seed_energy, double seed_lambda,
                 const RootOptions& root_opts, const EPOptions& opts) {
  if (family(seed_lambda).hermitian) {
    throw BadBracket("Hermitian family: levels merge asymptotically and never coalesce");
  }

  using Vec3 = Eigen::Vector3d;
  using Vec4 = Eigen::Vector4d;
  auto residual = [&](const Vec3& x) -> Vec4 {
    try {
      const CharFn f = family(x[2]);
      const cplx e(x[0], x[1]);
      const cplx v = f(e);
      const cplx d = derivative(f, e);
      return Vec4(v.real(), v.imag(), d.real(), d.imag());
    } catch (const Error&) {
      return Vec4::Constant(std::numeric_limits<double>::infinity());
    }
  };

  Vec3 x(seed_energy.real(), seed_energy.imag(), seed_lambda);
  Vec4 r = residual(x);
  int it = 0;
  bool converged = false;
  for (; it < opts.max_iter; ++it) {
    Eigen::Matrix<double, 4, 3> jac;
    for (int k = 0; k < 3; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
      Vec3 xp = x;
      Vec3 xm = x;
      xp[k] += h;
      xm[k] -= h;
      jac.col(k) = (residual(xp) - residual(xm)) / (2.0 * h);
    }
    Vec3 step = jac.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) break;
    double t = 1.0;
    Vec3 trial = x + step;
    Vec4 rt = residual(trial);
    for (int k = 0; k < 10 && !(rt.norm() < r.norm()); ++k) {
      t *= 0.5;
      trial = x + t * step;
      rt = residual(trial);
    }
    if (!(rt.norm() < r.norm())) {
      converged = r.norm() < opts.tol * 1e-1;
      break;
    }
    x = trial;
    r = rt;
    if ((t * step).norm() < 1e-14 * std::max(1.0, x.norm()) || r.norm() < 1e-14) {
      converged = true;
      ++it;
      break;
    }
  }
  EPResult ep;
  ep.param_star = x[2];
  ep.energy_star = cplx(x[0], x[1]);
  ep.iterations = it;
  const CharFn f_star = family(ep.param_star);
  ep.residual_F = std::abs(f_star(ep.energy_star));
  ep.residual_dF = std::abs(derivative(f_star, ep.energy_star));
  if (!converged && !(ep.residual_F <= opts.tol && ep.residual_dF <= opts.tol)) {
    throw NoConvergence("find_ep: Gauss-Newton did not converge (|F| = " +
                        std::to_string(ep.residual_F) +
                        ", |dF| = " + std::to_string(ep.residual_dF) + ")");
  }

  // Local quadratic model F ~ F_lambda dl + F_EE (E - E*)^2 / 2 seeds the split pair.
  const double dl = 1e-5 * std::max(1.0, std::abs(ep.param_star));
  const cplx f_lambda =
      (family(ep.param_star + dl)(ep.energy_star) - family(ep.param_star - dl)(ep.energy_star)) /
      (2.0 * dl);
  const double he = 1e-3 * std::max(1.0, std::abs(ep.energy_star));
  const cplx f_ee = (f_star(ep.energy_star + he) - 2.0 * f_star(ep.energy_star) +
                     f_star(ep.energy_star - he)) /
                    (he * he);

  std::vector<double> log_d;
  std::vector<double> log_s;
  for (int side : {-1, 1}) {
    for (int k = 0; k < opts.fit_points; ++k) {
      const double frac = opts.fit_points > 1 ? double(k) / (opts.fit_points - 1) : 0.0;
      const double delta = opts.fit_lo * std::pow(opts.fit_hi / opts.fit_lo, frac);
      const double lambda = ep.param_star + side * delta;
      const CharFn f = family(lambda);
      const cplx offset = std::sqrt(-2.0 * f_lambda * (side * delta) / f_ee);
      try {
        const Root r1 = polish(f, ep.energy_star + offset, root_opts);
        const Root d2 = polish(deflate(f.eval, {r1.energy}), ep.energy_star - offset, root_opts);
        const Root r2 = polish(f, d2.energy, root_opts);
        const double split = std::abs(r1.energy - r2.energy);
        if (split > 1e-13) {
          log_d.push_back(std::log(delta));
          log_s.push_back(std::log(split));
        }
      } catch (const Error&) {
      }
    }
  }
  if (log_d.size() < 3) {
    throw NoConvergence("find_ep: could not resolve the split pair around the exceptional point");
  }
  const double n = static_cast<double>(log_d.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < log_d.size(); ++i) {
    sx += log_d[i];
    sy += log_s[i];
    sxx += log_d[i] * log_d[i];
    sxy += log_d[i] * log_s[i];
  }
  ep.splitting_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return ep;
}

}  // namespace ptspectra
