#include "ptspectra/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ptspectra/errors.hpp"

namespace ptspectra {

double default_oracle_half_width(const PotentialSpec& spec) {
  if (has_walls(spec)) return wall_half_width(spec);
  const PtFamily base = resolve(spec).base;
  if (std::holds_alternative<DoubleDelta>(base) || std::holds_alternative<ScarfII>(base)) return 20.0;
  if (const auto* s = std::get_if<SquareDoubleWell>(&base)) return std::max(10.0, s->outer() + 8.0);
  return 10.0;
}

TridiagonalOperator discretize(const PotentialSpec& spec, double L, int n) {
  if (n < 3) throw BadGeometry("oracle grid needs n >= 3");
  if (has_walls(spec) && std::abs(L - wall_half_width(spec)) > 1e-12) {
    throw BadGeometry("oracle half-width must equal the wall position for boxed potentials");
  }
  TridiagonalOperator op;
  op.n = n;
  op.L = L;
  op.h = 2.0 * L / (n + 1);
  op.offdiag = -1.0 / (op.h * op.h);
  op.hermitian = is_hermitian(spec);
  op.diag.assign(n, cplx(2.0 / (op.h * op.h)));

  const ResolvedSpec r = resolve(spec);
  if (const auto* s = std::get_if<SquareDoubleWell>(&r.base)) {
    const auto [v1, v2] = well_strengths(r);
    auto overlap = [](double lo, double hi, double a, double b) {
      return std::max(0.0, std::min(hi, b) - std::max(lo, a));
    };
    for (int i = 0; i < n; ++i) {
      const double lo = op.node(i) - 0.5 * op.h;
      const double hi = op.node(i) + 0.5 * op.h;
      const double left = overlap(lo, hi, -s->outer(), -s->b) / op.h;
      const double right = overlap(lo, hi, s->b, s->outer()) / op.h;
      op.diag[i] += -v1 * left - v2 * right;
    }
  } else {
    for (int i = 0; i < n; ++i) op.diag[i] += evaluate_potential(spec, op.node(i));
  }

  for (const DeltaTerm& d : delta_terms(spec)) {
    if (std::abs(d.position) > L - op.h) {
      throw BadGeometry("delta at x = " + std::to_string(d.position) +
                        " is not inside the oracle domain");
    }
    const long i = std::lround((d.position + L) / op.h) - 1;
    op.diag[static_cast<size_t>(i)] -= d.strength / op.h;
  }
  return op;
}

cplx char_det(const TridiagonalOperator& op, cplx energy) {
  // With u_k = h^{2k} D_k the recurrence is u_k = h^2 (d_k - E) u_{k-1} - u_{k-2}. It is
  // carried as (u_k, u_k - u_{k-1}) so the O(h^2) energy term is not lost against 2,
  // run from both ends, and joined at the middle as a discrete Wronskian. The rescale
  // factors are kept in log form and divided by the local growth of the recurrence,
  // which leaves zeros of O(1) width even when the two halves tunnel weakly.
  const double h2 = op.h * op.h;
  const double kinetic = 2.0 / h2;
  const int n = op.n;
  const int mid = n / 2;
  double log_scale = 0.0;
  double log_reference = 0.0;
  auto normalize = [&](cplx& u, cplx& du) {
    const double m = std::max(std::abs(u), std::abs(du));
    if (m > 0.0) {
      u /= m;
      du /= m;
      log_scale += std::log(m);
    }
  };
  auto advance = [&](cplx& u, cplx& du, int k) {
    const cplx z = h2 * (op.diag[k] - kinetic - energy);
    // Growth factor of the constant-coefficient recurrence, lambda + 1/lambda = 2 + z.
    const cplx root = std::sqrt(z * (1.0 + 0.25 * z));
    log_reference += std::max(std::log(std::abs(1.0 + 0.5 * z + root)),
                              std::log(std::abs(1.0 + 0.5 * z - root)));
    du += z * u;
    u += du;
  };

  // u_{-1} = 0, u_0 = h: psi = 0 at the wall with unit slope, which keeps F'(E) O(1)
  // independent of n.
  cplx lead = op.h, dlead = op.h;
  for (int k = 0; k < mid; ++k) {
    advance(lead, dlead, k);
    normalize(lead, dlead);
  }
  cplx trail = op.h, dtrail = op.h;
  for (int k = n - 1; k >= mid; --k) {
    advance(trail, dtrail, k);
    normalize(trail, dtrail);
  }

  // u_mid w_{mid+1} - u_{mid-1} w_{mid+2}; both scales include the difference quotient
  // so a node at the join does not become a pole.
  const cplx wronskian = lead * dtrail + dlead * trail - dlead * dtrail;
  auto scale = [&](cplx u, cplx du) { return std::max(std::abs(u), std::abs(du) / op.h); };
  const double lead_scale = scale(lead, dlead);
  const double trail_scale = scale(trail, dtrail);
  const double log_factor =
      log_scale + std::log(lead_scale) + std::log(trail_scale) - log_reference;
  if (log_factor > 700.0) throw Overflow("oracle determinant scale out of range");
  return wronskian / op.h / (lead_scale * trail_scale) * std::exp(log_factor);
}

CharFn oracle_char_fn(const TridiagonalOperator& op) {
  auto shared = std::make_shared<const TridiagonalOperator>(op);
  CharFn f;
  f.family = "oracle";
  f.hermitian = op.hermitian;
  f.eval = [shared](cplx e) { return char_det(*shared, e); };
  return f;
}

RootOptions oracle_root_options() {
  RootOptions o;
  o.tol_residual = 1e-11;
  o.dedupe_radius = 1e-6;
  o.real_axis_tol = 1e-7;
  o.scan_real_points = 800;
  o.scan_nx = 81;
  o.scan_ny = 33;
  return o;
}

std::vector<Root> oracle_eigenvalues(const PotentialSpec& spec, double L, int n, const Rect& rect,
                                     const RootOptions& root_opts) {
  return find_all_roots(oracle_char_fn(discretize(spec, L, n)), rect, root_opts);
}

}  // namespace ptspectra
