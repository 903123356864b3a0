#pragma once

#include <vector>

#include "ptspectra/rootfind.hpp"

namespace ptspectra {

/// Three-point discretization of H = -d^2/dx^2 + V on (-L, L) with Dirichlet ends:
/// nodes x_i = -L + i h, i = 1..n, h = 2L/(n+1).
struct TridiagonalOperator {
  int n = 0;
  double h = 0.0;
  double L = 0.0;
  std::vector<cplx> diag;  // 2/h^2 + V(x_i), deltas folded in as -strength/h
  double offdiag = 0.0;    // -1/h^2
  bool hermitian = false;

  double node(int i) const { return -L + (i + 1) * h; }
};

/// Truncation used when none is given: the wall half-width for boxed families,
/// 20 for the open delta pair and for Scarf II (shallow levels decay slowly), and 10
/// for everything else (widened to keep square wells 8 units from the boundary).
double default_oracle_half_width(const PotentialSpec& spec);

/// Piecewise-constant wells are cell averaged over [x_i - h/2, x_i + h/2]; smooth
/// potentials are sampled at the node. Each delta goes to its nearest node.
/// Throws BadGeometry if a delta is not at least one cell inside the domain or L
/// disagrees with a wall position.
TridiagonalOperator discretize(const PotentialSpec& spec, double L, int n);

/// det(op - E I) up to a positive factor, from the three-term recurrence
/// D_k = (d_k - E) D_{k-1} - D_{k-2}/h^4 run forward over the leading minors and backward
/// over the trailing ones, joined at the middle node. Each pair is rescaled to unit
/// max-norm at every step and the product is divided by the local growth of the
/// recurrence, so zeros are preserved and F stays O(1) near them.
cplx char_det(const TridiagonalOperator& op, cplx energy);

CharFn oracle_char_fn(const TridiagonalOperator& op);

/// Root options suited to the oracle: coarser seeding (each evaluation costs O(n)) and a
/// wider dedupe radius and real-axis snap, since rounding from every node limits roots
/// to ~1e-8.
RootOptions oracle_root_options();

std::vector<Root> oracle_eigenvalues(const PotentialSpec& spec, double L, int n, const Rect& rect,
                                     const RootOptions& root_opts = oracle_root_options());

}  // namespace ptspectra
