#pragma once

#include <string>
#include <vector>

#include "ptspectra/oracle.hpp"
#include "ptspectra/shooting.hpp"

namespace ptspectra {

struct SolverOptions {
  ShootingOptions shooting;
  DddpForm dddp_form = DddpForm::rederived;
};

/// Closed-form characteristic function for the piecewise families, shooting
/// Wronskian for the smooth ones.
CharFn make_char_fn(const PotentialSpec& spec, const SolverOptions& opts = {});

/// spec with `axis` set to lambda, mapped through make_char_fn.
CharFamily char_family(const PotentialSpec& spec, const std::string& axis,
                       const SolverOptions& opts = {});

std::vector<Root> eigenvalues(const PotentialSpec& spec, const Rect& rect,
                              const SolverOptions& opts = {}, const RootOptions& root_opts = {});

}  // namespace ptspectra
