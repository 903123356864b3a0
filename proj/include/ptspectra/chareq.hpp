#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <string>

#include "ptspectra/potential.hpp"

namespace ptspectra {

/// Evanescent wavenumber p = sqrt(-E) on the principal branch (Re p >= 0,
/// Im p >= 0 when Re p == 0).
struct Momentum {
  cplx p;
};

Momentum momentum_p(cplx energy);

/// Oscillatory wavenumbers inside the left (q) and right (r) square well:
/// q^2 = E + V1, r^2 = E + V2.
struct Wavenumbers {
  cplx q;
  cplx r;
};

Wavenumbers wavenumbers(cplx energy, cplx v1, cplx v2);

/// A zero of a characteristic function is a bound state only if Re p exceeds this.
inline constexpr double kPhysicalReP = 1e-8;
/// |E|, |E + V1|, |E + V2| below this raise DegenerateEnergy.
inline constexpr double kDegenerateRadius = 1e-12;

/// Complex residual whose zeros are eigenvalues.
struct CharFn {
  std::function<cplx(cplx)> eval;
  /// Empty means every zero is a bound state.
  std::function<bool(cplx)> physical;
  /// Potential is real: F restricted to the real axis is real-valued.
  bool hermitian = false;
  std::string family;

  cplx operator()(cplx energy) const { return eval(energy); }
  bool is_physical(cplx energy) const { return !physical || physical(energy); }
};

enum class DddpForm { rederived, as_printed };

/// Double-delta bound-state condition. `rederived` is (2p - V1)(2p - V2) - V1 V2 e^{-2pa};
/// `as_printed` is 4p^2 - p(V1 + V2) - V1 V2 (e^{-2pa} - 1), which carries half the
/// linear term and loses the single-well limit E = -u^2/4.
cplx char_dddp(const DoubleDelta& spec, cplx energy, DddpForm form = DddpForm::rederived);
cplx char_dddp(cplx v1, cplx v2, double a, cplx energy, DddpForm form = DddpForm::rederived);

/// Deltas between rigid walls, reduced 2x2 condition with coth poles cleared by
/// sinh^2(pd), divided by p^3 (the cleared form is odd in p and vanishes to third order
/// at p = 0, which is not a state) and scaled by the
/// positive factor e^{-2a|Re p|}. Single valued and real on the real axis when V1, V2 are real.
cplx char_delta_box(const DeltaInBox& spec, cplx energy);
cplx char_delta_box(cplx v1, cplx v2, double a, double b, cplx energy);

/// Same zero set from the 4x4 determinant of the raw matching system in (A, B, C, D),
/// with the same normalization.
cplx char_delta_box_det(const DeltaInBox& spec, cplx energy);
cplx char_delta_box_det(cplx v1, cplx v2, double a, double b, cplx energy);

using Mat2 = Eigen::Matrix2cd;

/// The eight interface matrices of the square double well and the chained
/// product M1^-1 M2 M3^-1 M4 M5^-1 M6 M7^-1 M8 mapping (L, M) to (A, B).
struct TransferChain {
  std::array<Mat2, 8> m;
  Mat2 product;

  cplx m11() const { return product(0, 0); }
  cplx m12() const { return product(0, 1); }
  cplx m21() const { return product(1, 0); }
  cplx m22() const { return product(1, 1); }
};

TransferChain transfer_matrices(const SquareDoubleWell& spec, cplx energy);
TransferChain transfer_matrices(cplx v1, cplx v2, double b, double w, cplx energy);

/// m22(E) scaled by the non-vanishing analytic factor -2p e^{2pw}.
cplx char_square_dw(const SquareDoubleWell& spec, cplx energy);
cplx char_square_dw(cplx v1, cplx v2, double b, double w, cplx energy);

/// Characteristic function of a delta or square-well spec (including Hermitian
/// counterparts). Throws ConfigError for the smooth families.
CharFn piecewise_char_fn(const PotentialSpec& spec, DddpForm form = DddpForm::rederived);

}  // namespace ptspectra
