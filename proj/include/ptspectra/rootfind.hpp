#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ptspectra/chareq.hpp"

namespace ptspectra {

/// Closed rectangle in the complex energy plane.
struct Rect {
  double re_lo = -1.0;
  double re_hi = 1.0;
  double im_lo = 0.0;
  double im_hi = 0.0;

  bool contains(cplx e, double slack = 1e-9) const {
    return e.real() >= re_lo - slack && e.real() <= re_hi + slack && e.imag() >= im_lo - slack &&
           e.imag() <= im_hi + slack;
  }
};

struct RootOptions {
  double tol_residual = 1e-11;
  double tol_step = 1e-12;
  int max_iter = 100;
  double dedupe_radius = 1e-8;
  double real_axis_tol = 1e-9;
  // Seeding grids.
  int scan_real_points = 2000;
  int scan_nx = 121;
  int scan_ny = 41;
  double scan_depth = 1e2;
};

enum class Classification { real, conjugate_pair_member };

std::string to_string(Classification c);

struct Root {
  cplx energy;
  double residual = 0.0;
  Classification classification = Classification::real;
  bool physical = true;
  int iterations = 0;
};

/// Newton with a central-difference derivative (step 1e-7 max(1,|E|)), switching
/// to Muller's method when Newton stagnates. Throws NoConvergence.
Root polish(const CharFn& f, cplx seed, const RootOptions& opts = {});
Root polish(const std::function<cplx(cplx)>& f, cplx seed, const RootOptions& opts = {});

/// F(E) / prod (E - k) over the known roots.
std::function<cplx(cplx)> deflate(const std::function<cplx(cplx)>& f,
                                  const std::vector<cplx>& known);

/// Midpoints of sign changes of Re F on an n-point uniform grid.
std::vector<cplx> scan_real(const CharFn& f, double e_lo, double e_hi, int n);

/// Local minima of |F| on an nx by ny grid lying below median/depth, plus their
/// complex conjugates.
std::vector<cplx> scan_complex(const CharFn& f, const Rect& rect, int nx, int ny,
                               double depth = 1e2);

/// Seeds, deflated polishing, deduplication and the physicality filter; sorted by (Re E, Im E).
/// Seeds that fail to converge are dropped and counted in `failed_seeds`.
std::vector<Root> find_all_roots(const CharFn& f, const Rect& rect, const RootOptions& opts = {},
                                 int* failed_seeds = nullptr);

/// Sets classification and snaps |Im E| < real_axis_tol onto the real axis.
void classify_root(Root& root, const CharFn& f, const RootOptions& opts);

/// F as a function of a real parameter lambda.
using CharFamily = std::function<CharFn(double lambda)>;

struct EPResult {
  double param_star = 0.0;
  cplx energy_star;
  double residual_F = 0.0;
  double residual_dF = 0.0;
  double splitting_exponent = 0.0;
  int iterations = 0;
};

struct EPOptions {
  int max_iter = 60;
  double tol = 1e-9;
  double fit_lo = 1e-4;
  double fit_hi = 1e-3;
  int fit_points = 6;
};

/// Derivative dF/dE from a five-point central stencil.
cplx derivative(const CharFn& f, cplx energy);

/// Solves F(E, lambda) = 0 and dF/dE(E, lambda) = 0 by Gauss-Newton in (Re E, Im E, lambda)
/// with a finite-difference Jacobian, then fits |E+ - E-| ~ |lambda - lambda*|^beta.
/// Throws BadBracket for a Hermitian family and NoConvergence if the solve fails.
EPResult find_ep(const CharFamily& family, cplx seed_energy, double seed_lambda,
                 const RootOptions& root_opts = {}, const EPOptions& opts = {});

}  // namespace ptspectra
