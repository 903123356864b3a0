#pragma once

#include <vector>

#include "ptspectra/rootfind.hpp"

namespace ptspectra {

struct ShootingOptions {
  /// Truncation half-width for unbounded domains; ignored for LinearBox (walls at +-1).
  double L = 10.0;
  /// Fixed RK4 steps per side.
  int n_steps = 4000;
  double match_point = 0.0;
};

enum class Side { left, right };

/// (psi, psi') at the match point, renormalized to unit max-norm; `log_scale` is the
/// accumulated log of the discarded normalization factors.
struct SideSolution {
  cplx psi;
  cplx dpsi;
  double log_scale = 0.0;
};

/// Wronskian psi_L psi_R' - psi_L' psi_R at the match point.
struct Mismatch {
  cplx value;
};

/// Smooth families only: LinearBox, QuadraticPT, LinearPT, ScarfII and their counterparts.
bool is_shootable(const PotentialSpec& spec);

/// Integrates -psi'' + V psi = E psi inward from one boundary. Walls start with psi = 0,
/// psi' = 1 (left) or -1 (right); open ends start with psi = 1, psi' = +-kappa where
/// kappa = sqrt(V - E) on the principal branch.
/// Throws UnboundedBelow if Re(V - E) < 0 at +-L 2^k for every k = 0..6.
SideSolution integrate_side(const PotentialSpec& spec, cplx energy, Side side,
                            const ShootingOptions& opts = {});

Mismatch mismatch(const PotentialSpec& spec, cplx energy, const ShootingOptions& opts = {});

/// E -> Wronskian with the potential samples cached for repeated evaluation.
/// Throws UnboundedBelow up front if Re V keeps falling at +-L 2^k.
CharFn shooting_char_fn(const PotentialSpec& spec, const ShootingOptions& opts = {});

std::vector<Root> eigenvalues_shooting(const PotentialSpec& spec, const Rect& rect,
                                       const ShootingOptions& opts = {},
                                       const RootOptions& root_opts = {});

}  // namespace ptspectra
