#include "ptspectra/shooting.hpp"

#include <cmath>
#include <memory>

#include "ptspectra/errors.hpp"

namespace ptspectra {
namespace {

constexpr int kRenormEvery = 100;
constexpr double kOverflow = 1e150;

// Potential sampled at the RK4 nodes and midpoints of one side: 2 n + 1 values.
struct SideGrid {
  double start = 0.0;
  double h = 0.0;
  int n = 0;
  bool wall = false;
  double sign = 1.0;  // +1 integrating left to right, -1 right to left
  std::vector<cplx> v;
  std::vector<cplx> far_field;  // V at +-L 2^k, k = 0..6
};

SideGrid make_grid(const PotentialSpec& spec, Side side, const ShootingOptions& opts) {
  if (!is_shootable(spec)) {
    throw ConfigError("shooting solver needs a smooth potential family, got " +
                      family_name(spec));
  }
  SideGrid g;
  g.wall = has_walls(spec);
  g.sign = side == Side::left ? 1.0 : -1.0;
  const double half = g.wall ? wall_half_width(spec) : opts.L;
  g.start = -g.sign * half;
  g.n = opts.n_steps;
  g.h = (opts.match_point - g.start) / g.n;
  g.v.resize(2 * g.n + 1);
  for (int k = 0; k <= 2 * g.n; ++k) g.v[k] = evaluate_potential(spec, g.start + 0.5 * k * g.h);
  if (!g.wall) {
    for (int k = 0; k <= 6; ++k) {
      g.far_field.push_back(evaluate_potential(spec, g.start * std::ldexp(1.0, k)));
    }
    const auto& ff = g.far_field;
    const size_t n = ff.size();
    if (ff[n - 1].real() < ff[n - 2].real() && ff[n - 2].real() < ff[n - 3].real() &&
        ff[n - 1].real() < 0.0) {
      throw UnboundedBelow("potential is unbounded below on the " +
                           std::string(side == Side::left ? "left" : "right") +
                           ": no discrete spectrum");
    }
  }
  return g;
}

SideSolution integrate(const SideGrid& g, cplx energy) {
  cplx psi;
  cplx dpsi;
  if (g.wall) {
    psi = 0.0;
    dpsi = g.sign;
  } else {
    bool unbounded = true;
    for (const cplx v : g.far_field) unbounded = unbounded && (v - energy).real() < 0.0;
    if (unbounded) {
      throw UnboundedBelow("Re(V - E) < 0 at every truncation radius: potential not confining");
    }
    psi = 1.0;
    dpsi = g.sign * std::sqrt(g.v.front() - energy);
  }

  double log_scale = 0.0;
  const double h = g.h;
  for (int k = 0; k < g.n; ++k) {
    const cplx w0 = g.v[2 * k] - energy;
    const cplx wm = g.v[2 * k + 1] - energy;
    const cplx w1 = g.v[2 * k + 2] - energy;
    const cplx k1p = dpsi;
    const cplx k1d = w0 * psi;
    const cplx k2p = dpsi + 0.5 * h * k1d;
    const cplx k2d = wm * (psi + 0.5 * h * k1p);
    const cplx k3p = dpsi + 0.5 * h * k2d;
    const cplx k3d = wm * (psi + 0.5 * h * k2p);
    const cplx k4p = dpsi + h * k3d;
    const cplx k4d = w1 * (psi + h * k3p);
    psi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    dpsi += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    if ((k + 1) % kRenormEvery == 0) {
      const double m = std::max(std::abs(psi), std::abs(dpsi));
      if (!(m < kOverflow)) throw Overflow("shooting: solution overflowed between renormalizations");
      if (m > 0.0) {
        psi /= m;
        dpsi /= m;
        log_scale += std::log(m);
      }
    }
  }
  const double m = std::max(std::abs(psi), std::abs(dpsi));
  if (!(m < kOverflow)) throw Overflow("shooting: solution overflowed");
  if (m > 0.0) {
    psi /= m;
    dpsi /= m;
    log_scale += std::log(m);
  }
  return {psi, dpsi, log_scale};
}

cplx wronskian(const SideSolution& l, const SideSolution& r) {
  return l.psi * r.dpsi - l.dpsi * r.psi;
}

}  // namespace

bool is_shootable(const PotentialSpec& spec) { return !is_piecewise(spec); }

SideSolution integrate_side(const PotentialSpec& spec, cplx energy, Side side,
                            const ShootingOptions& opts) {
  return integrate(make_grid(spec, side, opts), energy);
}

Mismatch mismatch(const PotentialSpec& spec, cplx energy, const ShootingOptions& opts) {
  return {wronskian(integrate_side(spec, energy, Side::left, opts),
                    integrate_side(spec, energy, Side::right, opts))};
}

CharFn shooting_char_fn(const PotentialSpec& spec, const ShootingOptions& opts) {
  auto left = std::make_shared<const SideGrid>(make_grid(spec, Side::left, opts));
  auto right = std::make_shared<const SideGrid>(make_grid(spec, Side::right, opts));
  CharFn f;
  f.family = family_name(spec);
  f.hermitian = is_hermitian(spec);
  f.eval = [left, right](cplx e) { return wronskian(integrate(*left, e), integrate(*right, e)); };
  return f;
}

std::vector<Root> eigenvalues_shooting(const PotentialSpec& spec, const Rect& rect,
                                       const ShootingOptions& opts, const RootOptions& root_opts) {
  return find_all_roots(shooting_char_fn(spec, opts), rect, root_opts);
}

}  // namespace ptspectra
