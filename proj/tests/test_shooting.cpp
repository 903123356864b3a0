#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ptspectra/errors.hpp"
#include "ptspectra/shooting.hpp"
#include "support.hpp"

using namespace ptspectra;
using support::energies;
using support::match_distance;

namespace {

constexpr double kPi = std::numbers::pi;

RootOptions coarse() {
  RootOptions o;
  o.scan_nx = 61;
  o.scan_ny = 21;
  return o;
}

std::vector<cplx> spectrum(const PotentialSpec& spec, Rect rect, ShootingOptions opts = {}) {
  return energies(eigenvalues_shooting(spec, rect, opts, coarse()));
}

std::vector<cplx> lowest(std::vector<cplx> e, size_t n) {
  e.resize(std::min(n, e.size()));
  return e;
}

// Scarf II: E_n = -(n + 1/2 - (s + t)/2)^2 with s, t = sqrt(v1 -+ v2 + 1/4).
double scarf_level(double v1, double v2, int n) {
  const double s = std::sqrt(v1 - v2 + 0.25);
  const double t = std::sqrt(v1 + v2 + 0.25);
  const double k = n + 0.5 - 0.5 * (s + t);
  return -k * k;
}

}  // namespace

TEST_CASE("wronskian vanishes at known states") {
  const double e0 = kPi * kPi / 4;
  const double at = std::abs(mismatch(LinearBox{0}, e0).value);
  const double off = std::abs(mismatch(LinearBox{0}, e0 + 0.5).value);
  CHECK(at < 1e-9 * off);

  const double s_at = std::abs(mismatch(ScarfII{2, 0}, -1.0).value);
  const double s_off = std::abs(mismatch(ScarfII{2, 0}, -0.8).value);
  CHECK(s_at < 1e-7 * s_off);
}

TEST_CASE("wronskian conjugation symmetry") {
  const std::vector<std::pair<PotentialSpec, cplx>> cases = {
      {LinearBox{3}, cplx(2.3, 0.7)},
      {QuadraticPT{0.4}, cplx(2.3, 0.7)},
      {LinearPT{0.6}, cplx(2.3, 0.7)},
      {ScarfII{4, 3}, cplx(-0.6, 0.7)}};
  for (const auto& [s, e] : cases) {
    const cplx w = mismatch(s, e).value;
    const cplx wc = mismatch(s, std::conj(e)).value;
    CHECK(std::abs(wc - std::conj(w)) <= 1e-10 * std::abs(w));
  }
}

TEST_CASE("side solutions are normalized") {
  const SideSolution l = integrate_side(QuadraticPT{0.2}, cplx(1, 0.1), Side::left);
  CHECK(std::max(std::abs(l.psi), std::abs(l.dpsi)) == doctest::Approx(1.0));
  CHECK(l.log_scale > 0);
}

TEST_CASE("empty box levels") {
  const auto r = spectrum(LinearBox{0}, {0.5, 30, -1, 1});
  REQUIRE(r.size() == 3);
  for (int n = 1; n <= 3; ++n) CHECK(std::abs(r[n - 1] - n * n * kPi * kPi / 4) < 1e-6);
}

TEST_CASE("oscillator ladder of x^2/4") {
  const auto r = spectrum(QuadraticPT{0}, {0.1, 4, -1, 1});
  REQUIRE(r.size() == 4);
  for (int n = 0; n < 4; ++n) CHECK(std::abs(r[n] - (n + 0.5)) < 1e-8);
}

TEST_CASE("linear potential levels are Airy zeros") {
  const std::vector<cplx> airy = {1.0187929716474710, 2.3381074104597670, 3.2481975821798366,
                                  4.0879494441309706};
  CHECK(match_distance(spectrum(LinearPT{0}, {0.1, 4.5, -1, 1}), airy) < 1e-8);
}

TEST_CASE("Scarf II levels") {
  const auto r = spectrum(ScarfII{2, 0}, {-2, -0.1, -0.1, 0.1});
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0] + 1.0) < 1e-7);

  const auto s = spectrum(ScarfII{4, 3}, {-3, -0.1, -1, 1});
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0] - scarf_level(4, 3, 0)) < 1e-9);
  // The i v2 tail decays only like e^{-|x|}; the shallow level carries the truncation error.
  CHECK(std::abs(s[1] - scarf_level(4, 3, 1)) < 1e-6);
}

TEST_CASE("frozen PT spectra") {
  CHECK(match_distance(spectrum(LinearBox{5}, {0.5, 40, -10, 10}),
                       {2.9217668880417, 9.7236942892719, 22.1282104216657, 39.4306418649223}) <
        1e-9);
  CHECK(match_distance(spectrum(QuadraticPT{0.5}, {0.1, 5, -5, 5}),
                       {0.8344634555097, 2.7180896576385, 4.1998999208990}) < 1e-9);
  CHECK(match_distance(lowest(spectrum(LinearPT{0.3}, {0.1, 3.5, -5, 5}), 3),
                       {1.0686499696293, 2.5049378636300, 3.3908462065238}) < 1e-9);
}

TEST_CASE("doubling the RK4 steps moves eigenvalues by less than 1e-8") {
  ShootingOptions fine;
  fine.n_steps = 8000;
  const std::vector<std::pair<PotentialSpec, Rect>> cases = {
      {LinearBox{5}, {0.5, 40, -10, 10}},
      {QuadraticPT{0.5}, {0.1, 5, -5, 5}},
      {LinearPT{0.3}, {0.1, 3.5, -5, 5}},
      {ScarfII{4, 3}, {-3, -0.1, -1, 1}}};
  for (const auto& [spec, rect] : cases) {
    const auto a = spectrum(spec, rect);
    const auto b = spectrum(spec, rect, fine);
    CHECK(!a.empty());
    CHECK(match_distance(a, b) < 1e-8);
  }
}

TEST_CASE("truncation at L = 8 and L = 12 agrees for low-lying confined states") {
  ShootingOptions short_box, long_box;
  short_box.L = 8;
  long_box.L = 12;
  // Counterparts have a soft side; only their two lowest states are well inside L = 8.
  const std::vector<std::pair<PotentialSpec, size_t>> specs = {
      {QuadraticPT{0}, 3},   {QuadraticPT{0.5}, 3}, {LinearPT{0}, 3},
      {LinearPT{0.3}, 3},    {HermitianCounterpart{QuadraticPT{0.1}, 1}, 2},
      {HermitianCounterpart{LinearPT{0.2}, 1}, 2}};
  for (const auto& [spec, n] : specs) {
    const Rect rect{-1, 3.2, -3, 3};
    const auto a = lowest(spectrum(spec, rect, short_box), n);
    const auto b = lowest(spectrum(spec, rect, long_box), n);
    INFO(family_name(spec));
    CHECK(a.size() >= 2);
    CHECK(match_distance(a, b) < 1e-8);
  }
}

TEST_CASE("spectra are even in g") {
  const std::vector<std::pair<double, Rect>> lbox = {{3.0, {0.5, 40, -10, 10}},
                                                     {14.0, {0.5, 40, -10, 10}}};
  for (const auto& [g, rect] : lbox) {
    CHECK(match_distance(spectrum(LinearBox{g}, rect), spectrum(LinearBox{-g}, rect)) < 1e-8);
  }
  CHECK(match_distance(spectrum(QuadraticPT{0.5}, {0.1, 5, -5, 5}),
                       spectrum(QuadraticPT{-0.5}, {0.1, 5, -5, 5})) < 1e-8);
  CHECK(match_distance(spectrum(LinearPT{1.0}, {0.1, 5, -5, 5}),
                       spectrum(LinearPT{-1.0}, {0.1, 5, -5, 5})) < 1e-8);
}

TEST_CASE("counterparts that fall off to -infinity have no spectrum") {
  CHECK_THROWS_AS(shooting_char_fn(HermitianCounterpart{QuadraticPT{0.3}, 1}), UnboundedBelow);
  CHECK_THROWS_AS(shooting_char_fn(HermitianCounterpart{QuadraticPT{0.3}, -1}), UnboundedBelow);
  CHECK_THROWS_AS(shooting_char_fn(HermitianCounterpart{LinearPT{1.5}, 1}), UnboundedBelow);
  CHECK_NOTHROW(shooting_char_fn(HermitianCounterpart{QuadraticPT{0.2}, 1}));
  CHECK_NOTHROW(shooting_char_fn(HermitianCounterpart{LinearPT{0.8}, -1}));
}

TEST_CASE("piecewise families are not shot") {
  CHECK_FALSE(is_shootable(DoubleDelta{}));
  CHECK(is_shootable(HermitianCounterpart{LinearBox{1}, 1}));
  CHECK_THROWS_AS(shooting_char_fn(SquareDoubleWell{}), ConfigError);
}
