#include "ptspectra/spectrum.hpp"

namespace ptspectra {

CharFn make_char_fn(const PotentialSpec& spec, const SolverOptions& opts) {
  if (is_piecewise(spec)) return piecewise_char_fn(spec, opts.dddp_form);
  return shooting_char_fn(spec, opts.shooting);
}

CharFamily char_family(const PotentialSpec& spec, const std::string& axis,
                       const SolverOptions& opts) {
  (void)parameter(spec, axis);  // rejects unknown axis names early
  return [spec, axis, opts](double lambda) {
    return make_char_fn(with_parameter(spec, axis, lambda), opts);
  };
}

std::vector<Root> eigenvalues(const PotentialSpec& spec, const Rect& rect,
                              const SolverOptions& opts, const RootOptions& root_opts) {
  return find_all_roots(make_char_fn(spec, opts), rect, root_opts);
}

}  // namespace ptspectra
