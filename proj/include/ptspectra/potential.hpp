#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ptspectra {

using cplx = std::complex<double>;

/// hbar = 1 and 2*mu = 1 throughout, so H = -d^2/dx^2 + V(x) and p = sqrt(-E).
struct UnitConvention {
  static constexpr double hbar = 1.0;
  static constexpr double two_mu = 1.0;
};

/// Attractive deltas of strengths u+ig at -a/2 and u-ig at +a/2.
struct DoubleDelta {
  double u = 2.0;
  double g = 0.0;
  double a = 4.0;
};

/// Deltas of strengths u+ig at -b and u-ig at +b between rigid walls at +-a.
struct DeltaInBox {
  double u = 2.0;
  double g = 0.0;
  double a = 2.0;
  double b = 1.0;
};

/// Wells of depth u+ig on (-b-w, -b) and u-ig on (b, b+w); zero elsewhere.
struct SquareDoubleWell {
  double u = 50.0;
  double g = 0.0;
  double b = 1.0;
  double w = 1.0;

  double outer() const { return b + w; }
};

/// V = igx between rigid walls at +-1.
struct LinearBox {
  static constexpr double wall = 1.0;
  double g = 0.0;
};

/// V = x^2/4 + igx|x|
struct QuadraticPT {
  double g = 0.0;
};

/// V = |x| + igx
struct LinearPT {
  double g = 0.0;
};

/// V = -v1 sech^2 x + i v2 sech x tanh x
struct ScarfII {
  double v1 = 2.0;
  double v2 = 0.0;
};

using PtFamily = std::variant<DoubleDelta, DeltaInBox, SquareDoubleWell, LinearBox, QuadraticPT,
                              LinearPT, ScarfII>;

/// The real potential obtained by replacing g with sign*i*g in `of`.
struct HermitianCounterpart {
  PtFamily of = DoubleDelta{};
  int sign = 1;
};

using PotentialSpec = std::variant<DoubleDelta, DeltaInBox, SquareDoubleWell, LinearBox,
                                   QuadraticPT, LinearPT, ScarfII, HermitianCounterpart>;

/// A delta component -strength * delta(x - position).
/// Derivative jump: psi'(x+) - psi'(x-) = -strength * psi(x).
struct DeltaTerm {
  double position = 0.0;
  cplx strength;
};

/// Non-delta part of V(x). Rigid-wall families return +inf outside the walls.
cplx evaluate_potential(const PotentialSpec& spec, double x);

std::vector<DeltaTerm> delta_terms(const PotentialSpec& spec);

/// The family with its coupling resolved to a complex amplitude: i*g for the
/// PT families (i*v2 for Scarf II) and -sign*g for a Hermitian counterpart.
struct ResolvedSpec {
  PtFamily base;
  cplx coupling;
  bool hermitian = false;
};

ResolvedSpec resolve(const PotentialSpec& spec);

/// Complex strengths (V1, V2) of the left and right component of a piecewise family.
std::pair<cplx, cplx> well_strengths(const ResolvedSpec& r);

/// True when Im V == 0 everywhere (g = 0 or a Hermitian counterpart).
bool is_hermitian(const PotentialSpec& spec);

/// Delta and square-well families, solved through closed-form matching conditions.
bool is_piecewise(const PotentialSpec& spec);

/// Rigid walls present: DeltaInBox (at +-a) and LinearBox (at +-1).
bool has_walls(const PotentialSpec& spec);
double wall_half_width(const PotentialSpec& spec);

std::string family_name(const PotentialSpec& spec);

/// Parameter access by name ("u", "g", "a", "b", "w", "v1", "v2").
/// For a Hermitian counterpart the names refer to the wrapped family.
double parameter(const PotentialSpec& spec, std::string_view name);
PotentialSpec with_parameter(const PotentialSpec& spec, std::string_view name, double value);

/// Throws ConfigError if the parameters violate the family's domain.
void validate(const PotentialSpec& spec);

}  // namespace ptspectra
