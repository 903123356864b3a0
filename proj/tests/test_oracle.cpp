#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ptspectra/errors.hpp"
#include "ptspectra/oracle.hpp"
#include "ptspectra/shooting.hpp"
#include "ptspectra/spectrum.hpp"
#include "support.hpp"

using namespace ptspectra;
using support::energies;
using support::match_distance;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd dense(const TridiagonalOperator& op) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(op.n, op.n);
  for (int i = 0; i < op.n; ++i) {
    m(i, i) = op.diag[i];
    if (i + 1 < op.n) m(i, i + 1) = m(i + 1, i) = op.offdiag;
  }
  return m;
}

std::vector<cplx> in_rect(const Eigen::VectorXcd& ev, const Rect& r) {
  std::vector<cplx> out;
  for (const cplx e : ev) {
    if (e.real() >= r.re_lo && e.real() <= r.re_hi && e.imag() >= r.im_lo && e.imag() <= r.im_hi) {
      out.push_back(e);
    }
  }
  return out;
}

double error_to(const std::vector<Root>& roots, cplx target) {
  double best = 1e300;
  for (const Root& r : roots) best = std::min(best, std::abs(r.energy - target));
  return best;
}

std::vector<cplx> lowest_two(std::vector<cplx> e) {
  std::sort(e.begin(), e.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  e.resize(2);
  return e;
}

// Least-squares slope of log err against log h.
double order(const std::vector<double>& h, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("grid geometry") {
  const auto op = discretize(QuadraticPT{0.5}, 10, 199);
  CHECK(op.h == doctest::Approx(0.1));
  CHECK(op.node(0) == doctest::Approx(-9.9));
  CHECK(op.node(198) == doctest::Approx(9.9));
  CHECK(op.offdiag == doctest::Approx(-100));
  CHECK(std::abs(op.diag[99] - 200.0) < 1e-12);
  CHECK(std::abs(op.diag[79] - (200.0 + evaluate_potential(QuadraticPT{0.5}, -2.0))) < 1e-12);
  CHECK_FALSE(op.hermitian);
  CHECK(discretize(HermitianCounterpart{QuadraticPT{0.1}, 1}, 10, 99).hermitian);
}

TEST_CASE("deltas land on their nearest node") {
  const auto op = discretize(DoubleDelta{2, 0.1, 4}, 20, 399);  // h = 0.1
  CHECK(std::abs(op.diag[179] - (200.0 - cplx(2, 0.1) / 0.1)) < 1e-9);
  CHECK(std::abs(op.diag[219] - (200.0 - cplx(2, -0.1) / 0.1)) < 1e-9);
}

TEST_CASE("square wells are cell averaged") {
  const auto op = discretize(SquareDoubleWell{50, 0, 1, 1}, 10, 199);  // nodes at k/10
  CHECK(std::abs(op.diag[108] - 200.0) < 1e-9);
  CHECK(std::abs(op.diag[109] - 175.0) < 1e-9);
  CHECK(std::abs(op.diag[114] - 150.0) < 1e-9);
  CHECK(std::abs(op.diag[119] - 175.0) < 1e-9);
  CHECK(std::abs(op.diag[89] - 175.0) < 1e-9);
}

TEST_CASE("bad geometry") {
  CHECK_THROWS_AS(discretize(QuadraticPT{}, 10, 2), BadGeometry);
  CHECK_THROWS_AS(discretize(LinearBox{1}, 2.0, 100), BadGeometry);
  CHECK_THROWS_AS(discretize(DoubleDelta{2, 0, 4}, 2.0, 100), BadGeometry);
  CHECK_NOTHROW(discretize(DeltaInBox{2, 0, 3, 1}, 3.0, 100));
  CHECK(default_oracle_half_width(DoubleDelta{}) == 20.0);
  CHECK(default_oracle_half_width(DeltaInBox{2, 0, 3, 1}) == 3.0);
  CHECK(default_oracle_half_width(SquareDoubleWell{50, 0, 4, 1}) == 13.0);
  CHECK(default_oracle_half_width(ScarfII{}) == 20.0);
  CHECK(default_oracle_half_width(LinearPT{}) == 10.0);
}

TEST_CASE("free box matches the discrete Laplacian") {
  const int n = 400;
  const auto op = discretize(LinearBox{0}, 1.0, n);
  const auto r = energies(oracle_eigenvalues(LinearBox{0}, 1.0, n, {0.5, 45, -1, 1}));
  REQUIRE(r.size() == 4);
  for (int j = 1; j <= 4; ++j) {
    const double k = j * kPi / 2;
    const double exact = 2 * (1 - std::cos(k * op.h)) / (op.h * op.h);
    CHECK(std::abs(r[j - 1] - exact) < 1e-8 * exact);
  }
}

TEST_CASE("determinant zeros are the matrix eigenvalues") {
  const std::vector<std::pair<PotentialSpec, Rect>> cases = {
      {QuadraticPT{0.5}, {0.1, 8, -6, 6}},
      {DeltaInBox{2, 1, 2, 1}, {-4, 10, -6, 6}},
      {SquareDoubleWell{50, 5, 1, 1}, {-49, -1, -6, 6}}};
  for (const auto& [spec, rect] : cases) {
    const double L = default_oracle_half_width(spec);
    const int n = 60;
    const auto op = discretize(spec, L, n);
    const auto expected = in_rect(Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(dense(op)).eigenvalues(), rect);
    const auto got = energies(oracle_eigenvalues(spec, L, n, rect));
    INFO(family_name(spec));
    CHECK(!expected.empty());
    CHECK(match_distance(got, expected) < 1e-6);
  }
}

TEST_CASE("determinant is real for hermitian input and conjugate symmetric for PT input") {
  const auto h = discretize(DoubleDelta{2, 0, 4}, 20, 999);
  for (double e : {-1.5, -1.0, -0.3}) CHECK(std::abs(char_det(h, e).imag()) < 1e-12 * std::abs(char_det(h, e)));
  const auto p = discretize(LinearPT{0.6}, 10, 999);
  const cplx e(1.7, 0.4);
  CHECK(std::abs(char_det(p, std::conj(e)) - std::conj(char_det(p, e))) <= 1e-10 * std::abs(char_det(p, e)));
}

TEST_CASE("oracle agrees with the closed-form conditions") {
  const auto dd = oracle_eigenvalues(DoubleDelta{2, 0.1, 4}, 20, 8000, {-4, -1e-4, -2, 2});
  CHECK(match_distance(energies(dd), {cplx(-0.9951601951601, 0.0933715807524),
                                      cplx(-0.9951601951601, -0.0933715807524)}) < 5e-4);

  const auto sw = oracle_eigenvalues(SquareDoubleWell{50, 5, 1, 1}, 10, 8000, {-49.9, -0.01, -15, 15});
  const std::vector<cplx> exact = {cplx(-44.0495961147781, 4.8629779540631),
                                   cplx(-44.0495961147781, -4.8629779540631),
                                   cplx(-26.9818463991022, 4.3647437183031),
                                   cplx(-26.9818463991022, -4.3647437183031),
                                   cplx(-3.2370203344619, 2.6410830518570),
                                   cplx(-3.2370203344619, -2.6410830518570)};
  CHECK(match_distance(energies(sw), exact) < 1e-3);
  // Inside the wells k^2 reaches 47, so the k^4 h^2 / 12 stencil error grows with the level.
  CHECK(match_distance(lowest_two(energies(sw)), lowest_two(exact)) < 1e-4);
}

TEST_CASE("second-order convergence for a smooth potential") {
  const cplx exact = 0.8344634555097;
  std::vector<double> hs, errs;
  for (int n : {399, 799, 1599}) {
    const auto r = oracle_eigenvalues(QuadraticPT{0.5}, 10, n, {0.1, 1.5, -1, 1});
    hs.push_back(20.0 / (n + 1));
    errs.push_back(error_to(r, exact));
  }
  CHECK(order(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("first-order convergence for deltas between nodes") {
  // Each delta sits a quarter cell from its node at all three resolutions.
  const cplx exact(-0.9951601951601, 0.0933715807524);
  std::vector<double> hs, errs;
  for (int n : {624, 3124, 15624}) {
    const auto r = oracle_eigenvalues(DoubleDelta{2, 0.1, 4}, 20, n, {-4, -1e-4, 0, 2});
    hs.push_back(40.0 / (n + 1));
    errs.push_back(error_to(r, exact));
  }
  const double p = order(hs, errs);
  CHECK(p > 0.7);
  CHECK(p < 1.3);
}

TEST_CASE("exceptional point of the tilted box from the oracle") {
  const int n = 2000;
  const CharFamily family = [n](double g) { return oracle_char_fn(discretize(LinearBox{g}, 1.0, n)); };
  const CharFamily exact = [](double g) { return shooting_char_fn(LinearBox{g}); };
  EPOptions loose;
  loose.tol = 1e-6;  // the recurrence carries rounding from every node
  const EPResult a = find_ep(family, 6.0, 12.0, oracle_root_options(), loose);
  const EPResult b = find_ep(exact, 6.0, 12.0);
  CHECK(b.param_star == doctest::Approx(12.3124556723).epsilon(1e-9));
  CHECK(std::abs(a.param_star - b.param_star) < 1e-3);
  CHECK(std::abs(a.energy_star - b.energy_star) < 1e-3);
}
