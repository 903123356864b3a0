#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptspectra/spectrum.hpp"

namespace ptspectra {

struct SweepPlan {
  PotentialSpec spec_template;
  std::string axis = "a";
  std::vector<double> grid;
  Rect region;
  int n_levels = 2;
  SolverOptions solver;
  RootOptions root;
  int rescan_every = 10;
  int max_bisections = 8;
};

void validate(const SweepPlan& plan);

/// Uniform grid of n points on [lo, hi].
std::vector<double> linspace(double lo, double hi, int n);

struct BranchPoint {
  double lambda = 0.0;
  cplx energy;
  double residual = 0.0;
};

struct Branch {
  int id = 0;
  std::vector<BranchPoint> points;
  std::optional<int> pair_id;
  bool lost = false;  // truncated after a LostBranch
};

/// Continues the lowest n_levels roots along the grid. Branches that cannot be
/// continued are truncated and flagged as lost.
std::vector<Branch> run_sweep(const SweepPlan& plan);

/// For each energy, the index of its conjugate partner or -1. Energies within the
/// real-axis tolerance of the real line are treated as real and never paired.
std::vector<int> pair_conjugates(const std::vector<cplx>& energies, double real_axis_tol = 1e-9,
                                 double match_tol = 1e-8);

/// Fills Branch::pair_id from the per-grid-point pairing.
void assign_pairs(std::vector<Branch>& branches, const RootOptions& opts = {});

/// Indices of branch pairs to classify: conjugate partners first, then the remaining
/// branches that stay real, taken consecutively. Sorted by the lower index.
std::vector<std::pair<size_t, size_t>> doublets(const std::vector<Branch>& branches,
                                                double complex_tol = 1e-7);

enum class TransitionKind { merging, coalescing, none };

std::string to_string(TransitionKind k);

struct TransitionReport {
  TransitionKind kind = TransitionKind::none;
  std::optional<double> lambda_star;
  std::optional<double> lambda_bisect;  // independent estimate from sweep bisection
  std::optional<double> epsilon0;
  std::optional<EPResult> ep;
  std::optional<bool> contained;
  std::optional<double> final_splitting;
};

struct TransitionOptions {
  double complex_tol = 1e-7;      // |Im E| above this counts as complex
  double merge_splitting = 1e-2;  // final splitting needed to call a real doublet merging
  double bisect_tol = 1e-9;
  double contain_tol = 1e-9;
};

/// Classifies the doublet (first, second). `family` is the characteristic family along
/// the sweep axis, used to refine the EP. With a Hermitian reference pair the
/// containment of the coalesced Re E is checked at shared grid points past the EP.
TransitionReport classify_transition(const Branch& first, const Branch& second,
                                     const CharFamily& family,
                                     const std::optional<std::pair<Branch, Branch>>& reference =
                                         std::nullopt,
                                     const RootOptions& root_opts = {},
                                     const TransitionOptions& opts = {});

/// Sweep bisection for the real/complex boundary of the pair centred near `center`
/// between lambda_real (pair real) and lambda_complex (pair complex).
double bisect_transition(const CharFamily& family, double lambda_real, cplx center_real,
                         double lambda_complex, cplx center_complex, double tol,
                         const RootOptions& root_opts = {});

/// Two-point extrapolation of the doublet midpoint, assuming the midpoint offset decays
/// at twice the rate of the splitting.
double richardson_limit(double lambda1, double mid1, double split1, double lambda2, double mid2,
                        double split2);

struct DoubletReport {
  size_t first = 0;
  size_t second = 0;
  TransitionReport report;
};

struct SweepResult {
  std::vector<Branch> branches;
  std::vector<DoubletReport> transitions;
};

/// run_sweep, pairing and classification of every doublet. The k-th doublet of the
/// optional reference sweep serves as the containment reference for the k-th doublet.
SweepResult sweep_and_classify(const SweepPlan& plan,
                               const std::optional<SweepPlan>& reference = std::nullopt,
                               const TransitionOptions& opts = {});

}  // namespace ptspectra
