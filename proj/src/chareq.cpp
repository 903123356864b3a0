#include "ptspectra/chareq.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "ptspectra/errors.hpp"

namespace ptspectra {
namespace {

constexpr cplx kI{0.0, 1.0};

void require_nonzero(cplx energy) {
  if (std::abs(energy) < kDegenerateRadius) {
    throw DegenerateEnergy("energy too close to the branch point E = 0");
  }
}

// Interface matrix [[e^{k x}, e^{-k x}], [k e^{k x}, -k e^{-k x}]] for the
// pair of solutions (e^{k x}, e^{-k x}) evaluated at x.
Mat2 interface(cplx k, double x) {
  const cplx ep = std::exp(k * x);
  const cplx em = std::exp(-k * x);
  Mat2 m;
  m << ep, em, k * ep, -k * em;
  return m;
}

Mat2 inverse(const Mat2& m) {
  const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Mat2 inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / det;
}

}  // namespace

Momentum momentum_p(cplx energy) {
  cplx p = std::sqrt(-energy);
  if (p.real() == 0.0 && p.imag() < 0.0) p = -p;
  return {p};
}

Wavenumbers wavenumbers(cplx energy, cplx v1, cplx v2) {
  return {std::sqrt(energy + v1), std::sqrt(energy + v2)};
}

cplx char_dddp(cplx v1, cplx v2, double a, cplx energy, DddpForm form) {
  require_nonzero(energy);
  const cplx p = momentum_p(energy).p;
  const cplx decay = std::exp(-2.0 * p * a);
  if (form == DddpForm::as_printed) {
    return 4.0 * p * p - p * (v1 + v2) - v1 * v2 * (decay - 1.0);
  }
  return (2.0 * p - v1) * (2.0 * p - v2) - v1 * v2 * decay;
}

cplx char_dddp(const DoubleDelta& spec, cplx energy, DddpForm form) {
  return char_dddp(cplx(spec.u, spec.g), cplx(spec.u, -spec.g), spec.a, energy, form);
}

cplx char_delta_box(cplx v1, cplx v2, double a, double b, cplx energy) {
  require_nonzero(energy);
  const cplx p = momentum_p(energy).p;
  const double d = a - b;
  const double sigma = p.real();
  // sinh, cosh and the e^{+-2pb} prefactors, each scaled by e^{-|Re p| * length}.
  const cplx grow_d = std::exp(p * d - sigma * d);
  const cplx decay_d = std::exp(-p * d - sigma * d);
  const cplx s = 0.5 * (grow_d - decay_d);
  const cplx c = 0.5 * (grow_d + decay_d);
  const cplx grow_b = std::exp(2.0 * p * b - 2.0 * sigma * b);
  const cplx decay_b = std::exp(-2.0 * p * b - 2.0 * sigma * b);
  const cplx lhs = grow_b * (v1 * s - p * (s + c)) * (v2 * s - p * (s + c));
  const cplx rhs = decay_b * (v1 * s + p * (s - c)) * (v2 * s + p * (s - c));
  return (lhs - rhs) / (p * p * p);
}

cplx char_delta_box(const DeltaInBox& spec, cplx energy) {
  return char_delta_box(cplx(spec.u, spec.g), cplx(spec.u, -spec.g), spec.a, spec.b, energy);
}

cplx char_delta_box_det(cplx v1, cplx v2, double a, double b, cplx energy) {
  require_nonzero(energy);
  const cplx p = momentum_p(energy).p;
  const double d = a - b;
  const double sigma = p.real();
  // Columns A and D scaled by e^{-sigma d}, columns B and C by e^{-sigma b}.
  const cplx grow_d = std::exp(p * d - sigma * d);
  const cplx decay_d = std::exp(-p * d - sigma * d);
  const cplx sh = 0.5 * (grow_d - decay_d);
  const cplx ch = 0.5 * (grow_d + decay_d);
  const cplx ebp = std::exp(p * b - sigma * b);
  const cplx ebm = std::exp(-p * b - sigma * b);

  // Unknowns (A, B, C, D): psi = A sinh p(x+a) | B e^{px} + C e^{-px} | D sinh p(x-a).
  // Continuity at x = -b, jump psi'(+) - psi'(-) = -V1 psi at x = -b, and the same at x = +b.
  Eigen::Matrix4cd m;
  m << sh, -ebm, -ebp, 0.0,                                  //
      p * ch, -(v1 + p) * ebm, -(v1 - p) * ebp, 0.0,         //
      0.0, ebp, ebm, sh,                                     //
      0.0, (v2 - p) * ebp, (v2 + p) * ebm, p * ch;
  return m.determinant() / (p * p * p);
}

cplx char_delta_box_det(const DeltaInBox& spec, cplx energy) {
  return char_delta_box_det(cplx(spec.u, spec.g), cplx(spec.u, -spec.g), spec.a, spec.b,
                            energy);
}

TransferChain transfer_matrices(cplx v1, cplx v2, double b, double w, cplx energy) {
  require_nonzero(energy);
  if (std::abs(energy + v1) < kDegenerateRadius || std::abs(energy + v2) < kDegenerateRadius) {
    throw DegenerateEnergy("energy too close to the bottom of a well (q = 0 or r = 0)");
  }
  const cplx p = momentum_p(energy).p;
  const auto [q, r] = wavenumbers(energy, v1, v2);
  const double a = b + w;

  TransferChain chain;
  auto& m = chain.m;
  m[0] = interface(p, -a);     // (A, B) at x = -a
  m[1] = interface(kI * q, -a);    // (C, D) at x = -a
  m[2] = interface(kI * q, -b);    // (C, D) at x = -b
  m[3] = interface(p, -b);     // (F, G) at x = -b
  m[4] = interface(p, b);      // (F, G) at x = b
  m[5] = interface(kI * r, b);     // (H, K) at x = b
  m[6] = interface(kI * r, a);     // (H, K) at x = a
  m[7] = interface(p, a);      // (L, M) at x = a

  // Grouped at the barrier so the e^{-2pb} tunnelling term is not absorbed into
  // the dominant e^{+2pb} one.
  const Mat2 left = inverse(m[0]) * m[1] * inverse(m[2]) * m[3];
  const Mat2 right = inverse(m[4]) * m[5] * inverse(m[6]) * m[7];
  chain.product = left * right;
  return chain;
}

TransferChain transfer_matrices(const SquareDoubleWell& spec, cplx energy) {
  return transfer_matrices(cplx(spec.u, spec.g), cplx(spec.u, -spec.g), spec.b, spec.w, energy);
}

cplx char_square_dw(cplx v1, cplx v2, double b, double w, cplx energy) {
  const TransferChain chain = transfer_matrices(v1, v2, b, w, energy);
  const cplx p = momentum_p(energy).p;
  return chain.m22() * (-2.0 / p) * std::exp(2.0 * p * w);
}

cplx char_square_dw(const SquareDoubleWell& spec, cplx energy) {
  return char_square_dw(cplx(spec.u, spec.g), cplx(spec.u, -spec.g), spec.b, spec.w, energy);
}

CharFn piecewise_char_fn(const PotentialSpec& spec, DddpForm form) {
  const ResolvedSpec r = resolve(spec);
  const auto [v1, v2] = well_strengths(r);
  CharFn f;
  f.hermitian = r.hermitian;
  f.family = family_name(spec);
  auto open_domain = [](cplx e) { return momentum_p(e).p.real() > kPhysicalReP; };

  if (const auto* s = std::get_if<DoubleDelta>(&r.base)) {
    const double a = s->a;
    f.eval = [=](cplx e) { return char_dddp(v1, v2, a, e, form); };
    f.physical = open_domain;
  } else if (const auto* s = std::get_if<DeltaInBox>(&r.base)) {
    const double a = s->a;
    const double b = s->b;
    f.eval = [=](cplx e) { return char_delta_box(v1, v2, a, b, e); };
  } else if (const auto* s = std::get_if<SquareDoubleWell>(&r.base)) {
    const double b = s->b;
    const double w = s->w;
    f.eval = [=](cplx e) { return char_square_dw(v1, v2, b, w, e); };
    f.physical = open_domain;
  } else {
    throw ConfigError("no closed-form characteristic function for family " + f.family);
  }
  return f;
}

}  // namespace ptspectra
