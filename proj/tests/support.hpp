#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "ptspectra/rootfind.hpp"

namespace support {

using ptspectra::cplx;

/// Seeded value generator for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  cplx complex(double re_lo, double re_hi, double im_lo, double im_hi) {
    return {uniform(re_lo, re_hi), uniform(im_lo, im_hi)};
  }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<cplx> energies(const std::vector<ptspectra::Root>& roots) {
  std::vector<cplx> out;
  for (const auto& r : roots) out.push_back(r.energy);
  return out;
}

/// Largest pair distance of a greedy nearest-neighbour bijection; infinity when the
/// sizes differ.
inline double match_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  struct Candidate {
    double d;
    size_t i, j;
  };
  std::vector<Candidate> c;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) c.push_back({std::abs(a[i] - b[j]), i, j});
  }
  std::sort(c.begin(), c.end(), [](const Candidate& x, const Candidate& y) { return x.d < y.d; });
  std::vector<bool> ua(a.size()), ub(b.size());
  double worst = 0.0;
  for (const Candidate& x : c) {
    if (ua[x.i] || ub[x.j]) continue;
    ua[x.i] = ub[x.j] = true;
    worst = std::max(worst, x.d);
  }
  return worst;
}

/// Max distance from each energy's conjugate to the nearest member of the set.
inline double conjugation_defect(const std::vector<cplx>& e) {
  double worst = 0.0;
  for (const cplx& x : e) {
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& y : e) best = std::min(best, std::abs(std::conj(x) - y));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace support
