#include <Eigen/LU>
#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "ptspectra/chareq.hpp"
#include "ptspectra/errors.hpp"
#include "ptspectra/spectrum.hpp"
#include "support.hpp"

using namespace ptspectra;
using doctest::Approx;
using support::energies;
using support::match_distance;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cplx> roots_of(const PotentialSpec& spec, Rect rect, DddpForm form = DddpForm::rederived) {
  SolverOptions o;
  o.dddp_form = form;
  return energies(eigenvalues(spec, rect, o));
}

// Boxed conditions: every zero is a state.
CharFn wrap(std::function<cplx(cplx)> f, bool hermitian) {
  CharFn c;
  c.eval = std::move(f);
  c.hermitian = hermitian;
  return c;
}

// Real zeros of f on (lo, hi) by sign changes and bisection.
std::vector<double> bisect_all(const std::function<double(double)>& f, double lo, double hi, int n) {
  std::vector<double> out;
  double x0 = lo, f0 = f(lo);
  for (int i = 1; i <= n; ++i) {
    const double x1 = lo + (hi - lo) * i / n;
    const double f1 = f(x1);
    if (f0 * f1 < 0) {
      double a = x0, b = x1, fa = f0;
      for (int k = 0; k < 200; ++k) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

}  // namespace

TEST_CASE("momentum branch") {
  CHECK(std::abs(momentum_p(-1.0).p - 1.0) < 1e-15);
  CHECK(std::abs(momentum_p(4.0).p - cplx(0, 2)) < 1e-15);
  const cplx p = momentum_p(cplx(-1, 0.2)).p;
  CHECK(p.real() > 0);
  CHECK(std::abs(p * p - cplx(1, -0.2)) < 1e-15);
  CHECK(momentum_p(cplx(4, -1e-300)).p.real() >= 0);
}

TEST_CASE("momentum identity p^2 + E = 0 within a few ulp") {
  support::Gen gen(11);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int i = 0; i < 10000; ++i) {
    const cplx e = gen.complex(-100, 100, -100, 100);
    const cplx p = momentum_p(e).p;
    CHECK(std::abs(p * p + e) <= 4 * eps * std::abs(e));
    CHECK(p.real() >= 0);
  }
}

TEST_CASE("well wavenumbers") {
  const auto w = wavenumbers(cplx(-10, 0.5), cplx(50, 5), cplx(50, -5));
  CHECK(std::abs(w.q * w.q - cplx(40, 5.5)) < 1e-12);
  CHECK(std::abs(w.r * w.r - cplx(40, -4.5)) < 1e-12);
  const auto h = wavenumbers(-10.0, 50.0, 50.0);
  CHECK(h.q == h.r);
}

TEST_CASE("double delta residual") {
  CHECK(std::abs(char_dddp(DoubleDelta{2, 0, 4}, -1.0) + 4 * std::exp(-8.0)) < 1e-15);
  CHECK(std::abs(char_dddp(DoubleDelta{2, 0, 60}, -1.0)) < 1e-40);
  CHECK(std::abs(char_dddp(DoubleDelta{2, 0, 4}, -1.0, DddpForm::as_printed) -
                 4 * (1 - std::exp(-8.0))) < 1e-14);
  const DoubleDelta s{2, 0.1, 3};
  const cplx e(-0.7, 0.3);
  CHECK(std::abs(char_dddp(s, std::conj(e)) - std::conj(char_dddp(s, e))) < 1e-14);
}

TEST_CASE("double delta spectra") {
  const Rect rect{-4, -1e-4, -2, 2};
  auto r = roots_of(DoubleDelta{2, 0, 4}, rect);
  REQUIRE(r.size() == 2);
  CHECK(r[0].real() == Approx(-1.034501423633).epsilon(1e-11));
  CHECK(r[1].real() == Approx(-0.960738323278).epsilon(1e-11));

  r = roots_of(DoubleDelta{2, 0.1, 4}, rect);
  REQUIRE(r.size() == 2);
  CHECK(match_distance(r, {cplx(-0.99516019516, 0.09337158075), cplx(-0.99516019516, -0.09337158075)}) <
        1e-9);

  // The printed condition is positive for every p > 0 here.
  CHECK(roots_of(DoubleDelta{2, 0, 4}, rect, DddpForm::as_printed).empty());
}

TEST_CASE("empty box limit of the delta-in-box condition") {
  for (double a : {1.0, 2.5}) {
    const auto f = wrap([a](cplx e) { return char_delta_box(0.0, 0.0, a, 0.5, e); }, true);
    const auto r = energies(find_all_roots(f, {0.1, 25 / (a * a), -1, 1}));
    REQUIRE(r.size() >= 3);
    for (int n = 1; n <= 3; ++n) {
      CHECK(std::abs(r[n - 1] - n * n * kPi * kPi / (4 * a * a)) < 1e-6);
    }
  }
}

TEST_CASE("delta-in-box spectra") {
  const Rect rect{-4, 8, -2, 2};
  auto r = roots_of(DeltaInBox{2, 0, 3, 1}, rect);
  CHECK(match_distance(r, {-1.2017789468052, -0.5511180230877, 2.4674011002723, 3.5473820030433,
                           5.7529507828301}) < 1e-9);
  CHECK(std::abs(r[2] - kPi * kPi / 4) < 1e-9);
  r = roots_of(DeltaInBox{2, 1, 2, 1}, rect);
  CHECK(match_distance(r, {cplx(-0.2542155550251, 1.1574964242282),
                           cplx(-0.2542155550251, -1.1574964242282), 4.4713067828529}) < 1e-9);
}

TEST_CASE("delta-in-box residual is real on the real axis for g = 0") {
  for (double e : {-1.5, -0.3, 0.7, 4.0, 11.0}) {
    CHECK(char_delta_box(DeltaInBox{2, 0, 3, 1}, e).imag() == Approx(0).epsilon(1e-12));
    CHECK(char_delta_box_det(DeltaInBox{2, 0, 3, 1}, e).imag() == Approx(0).epsilon(1e-12));
  }
}

TEST_CASE("reduced and determinant forms share their zeros") {
  for (const DeltaInBox s : {DeltaInBox{2, 0, 3, 1}, DeltaInBox{2, 0.1, 2.8, 2}, DeltaInBox{2, 1, 2, 1},
                             DeltaInBox{3, 0.5, 1.5, 0.4}}) {
    const Rect rect{-4, 8, -2, 2};
    const auto a = energies(find_all_roots(
        wrap([s](cplx e) { return char_delta_box(s, e); }, s.g == 0), rect));
    const auto b = energies(find_all_roots(
        wrap([s](cplx e) { return char_delta_box_det(s, e); }, s.g == 0), rect));
    CHECK(!a.empty());
    CHECK(match_distance(a, b) < 1e-9);
  }
}

TEST_CASE("deltas at the walls become inert") {
  const auto r = roots_of(DeltaInBox{2, 0, 1, 0.999999}, {0.5, 25, -1, 1});
  REQUIRE(r.size() >= 2);
  CHECK(std::abs(r[0] - kPi * kPi / 4) < 1e-4);
  CHECK(std::abs(r[1] - kPi * kPi) < 1e-4);
}

TEST_CASE("transfer chain product order") {
  const auto t = transfer_matrices(SquareDoubleWell{50, 5, 1, 1}, cplx(-30, 2));
  Mat2 p = t.m[0].inverse() * t.m[1];
  for (int k = 2; k < 8; k += 2) p = p * t.m[k].inverse() * t.m[k + 1];
  CHECK((p - t.product).norm() <= 1e-10 * t.product.norm());
  for (const Mat2& m : t.m) CHECK(std::abs(m.determinant()) > 0);
}

TEST_CASE("square well at b = 0 is a single well of width 2w") {
  const double u = 50;
  auto even = [u](double e) {
    const double q = std::sqrt(e + u), p = std::sqrt(-e);
    return q * std::sin(q) - p * std::cos(q);
  };
  auto odd = [u](double e) {
    const double q = std::sqrt(e + u), p = std::sqrt(-e);
    return q * std::cos(q) + p * std::sin(q);
  };
  std::vector<cplx> expected;
  for (double e : bisect_all(even, -49.999, -0.01, 20000)) expected.push_back(e);
  for (double e : bisect_all(odd, -49.999, -0.01, 20000)) expected.push_back(e);
  const auto r = roots_of(SquareDoubleWell{u, 0, 0, 1}, {-49.9, -0.01, -1, 1});
  CHECK(match_distance(r, expected) < 1e-9);
}

TEST_CASE("square double well spectra") {
  const Rect rect{-49.9, -0.01, -15, 15};
  auto r = roots_of(SquareDoubleWell{50, 0, 1, 1}, rect);
  CHECK(match_distance(r, {-44.0577614210132, -44.0577483801494, -27.0234580558941,
                           -27.0230347760016, -3.5785035994135, -3.4184749803178}) < 1e-9);
  r = roots_of(SquareDoubleWell{50, 5, 1, 1}, rect);
  CHECK(match_distance(r, {cplx(-44.0495961147781, 4.8629779540631),
                           cplx(-44.0495961147781, -4.8629779540631),
                           cplx(-26.9818463991022, 4.3647437183031),
                           cplx(-26.9818463991022, -4.3647437183031),
                           cplx(-3.2370203344619, 2.6410830518570),
                           cplx(-3.2370203344619, -2.6410830518570)}) < 1e-9);
}

TEST_CASE("degenerate energies are rejected") {
  CHECK_THROWS_AS(char_square_dw(SquareDoubleWell{50, 0, 1, 1}, -50.0), DegenerateEnergy);
  CHECK_THROWS_AS(char_square_dw(SquareDoubleWell{50, 0, 1, 1}, 0.0), DegenerateEnergy);
  CHECK_THROWS_AS(transfer_matrices(SquareDoubleWell{50, 5, 1, 1}, cplx(-50, 5)), DegenerateEnergy);
}

TEST_CASE("smooth families have no closed-form condition") {
  CHECK_THROWS_AS(piecewise_char_fn(LinearPT{}), ConfigError);
  CHECK(piecewise_char_fn(DoubleDelta{}).hermitian);
  CHECK_FALSE(piecewise_char_fn(DoubleDelta{2, 0.1, 1}).hermitian);
}

TEST_CASE("physicality filter drops growing tails") {
  const CharFn f = piecewise_char_fn(DoubleDelta{});
  CHECK(f.is_physical(-1.0));
  CHECK_FALSE(f.is_physical(2.0));
}
