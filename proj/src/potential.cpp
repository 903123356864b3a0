#include "ptspectra/potential.hpp"

#include <cmath>
#include <limits>

#include "ptspectra/errors.hpp"

namespace ptspectra {
namespace {

constexpr cplx kI{0.0, 1.0};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double coupling_parameter(const PtFamily& f) {
  return std::visit(overloaded{[](const ScarfII& s) { return s.v2; },
                               [](const auto& s) { return s.g; }},
                    f);
}

PotentialSpec lift(const PtFamily& f) {
  return std::visit([](const auto& s) -> PotentialSpec { return s; }, f);
}

double get_field(const PtFamily& f, std::string_view name) {
  auto bad = [&]() -> double {
    throw ConfigError("parameter '" + std::string(name) + "' does not exist for this family");
  };
  return std::visit(
      overloaded{
          [&](const DoubleDelta& s) {
            if (name == "u") return s.u;
            if (name == "g") return s.g;
            if (name == "a") return s.a;
            return bad();
          },
          [&](const DeltaInBox& s) {
            if (name == "u") return s.u;
            if (name == "g") return s.g;
            if (name == "a") return s.a;
            if (name == "b") return s.b;
            return bad();
          },
          [&](const SquareDoubleWell& s) {
            if (name == "u") return s.u;
            if (name == "g") return s.g;
            if (name == "b") return s.b;
            if (name == "w") return s.w;
            return bad();
          },
          [&](const ScarfII& s) {
            if (name == "v1") return s.v1;
            if (name == "v2") return s.v2;
            return bad();
          },
          [&](const auto& s) {
            if (name == "g") return s.g;
            return bad();
          }},
      f);
}

PtFamily set_field(PtFamily f, std::string_view name, double v) {
  auto bad = [&]() {
    throw ConfigError("parameter '" + std::string(name) + "' does not exist for this family");
  };
  std::visit(overloaded{[&](DoubleDelta& s) {
                          if (name == "u") s.u = v;
                          else if (name == "g") s.g = v;
                          else if (name == "a") s.a = v;
                          else bad();
                        },
                        [&](DeltaInBox& s) {
                          if (name == "u") s.u = v;
                          else if (name == "g") s.g = v;
                          else if (name == "a") s.a = v;
                          else if (name == "b") s.b = v;
                          else bad();
                        },
                        [&](SquareDoubleWell& s) {
                          if (name == "u") s.u = v;
                          else if (name == "g") s.g = v;
                          else if (name == "b") s.b = v;
                          else if (name == "w") s.w = v;
                          else bad();
                        },
                        [&](ScarfII& s) {
                          if (name == "v1") s.v1 = v;
                          else if (name == "v2") s.v2 = v;
                          else bad();
                        },
                        [&](auto& s) {
                          if (name == "g") s.g = v;
                          else bad();
                        }},
             f);
  return f;
}

}  // namespace

ResolvedSpec resolve(const PotentialSpec& spec) {
  if (const auto* h = std::get_if<HermitianCounterpart>(&spec)) {
    const double g = coupling_parameter(h->of);
    return {h->of, cplx(-h->sign * g, 0.0), true};
  }
  ResolvedSpec r;
  r.base = std::visit(
      overloaded{[](const HermitianCounterpart&) -> PtFamily { return DoubleDelta{}; },
                 [](const auto& s) -> PtFamily { return s; }},
      spec);
  const double g = coupling_parameter(r.base);
  r.coupling = kI * g;
  r.hermitian = (g == 0.0);
  return r;
}

std::pair<cplx, cplx> well_strengths(const ResolvedSpec& r) {
  const double u = std::visit(overloaded{[](const DoubleDelta& s) { return s.u; },
                                         [](const DeltaInBox& s) { return s.u; },
                                         [](const SquareDoubleWell& s) { return s.u; },
                                         [](const auto&) { return 0.0; }},
                              r.base);
  return {u + r.coupling, u - r.coupling};
}

cplx evaluate_potential(const PotentialSpec& spec, double x) {
  const ResolvedSpec r = resolve(spec);
  const cplx c = r.coupling;
  const double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{
          [&](const DoubleDelta&) { return cplx(0.0); },
          [&](const DeltaInBox& s) { return std::abs(x) > s.a ? cplx(inf) : cplx(0.0); },
          [&](const SquareDoubleWell& s) {
            const auto [v1, v2] = well_strengths(r);
            if (x >= -s.outer() && x <= -s.b) return -v1;
            if (x >= s.b && x <= s.outer()) return -v2;
            return cplx(0.0);
          },
          [&](const LinearBox& s) { return std::abs(x) > s.wall ? cplx(inf) : c * x; },
          [&](const QuadraticPT&) { return x * x / 4.0 + c * x * std::abs(x); },
          [&](const LinearPT&) { return std::abs(x) + c * x; },
          [&](const ScarfII& s) {
            const double sech = 1.0 / std::cosh(x);
            return -s.v1 * sech * sech + c * sech * std::tanh(x);
          }},
      r.base);
}

std::vector<DeltaTerm> delta_terms(const PotentialSpec& spec) {
  const ResolvedSpec r = resolve(spec);
  const auto [v1, v2] = well_strengths(r);
  return std::visit(overloaded{[&](const DoubleDelta& s) {
                                 return std::vector<DeltaTerm>{{-s.a / 2, v1}, {s.a / 2, v2}};
                               },
                               [&](const DeltaInBox& s) {
                                 return std::vector<DeltaTerm>{{-s.b, v1}, {s.b, v2}};
                               },
                               [](const auto&) { return std::vector<DeltaTerm>{}; }},
                    r.base);
}

bool is_hermitian(const PotentialSpec& spec) { return resolve(spec).hermitian; }

bool is_piecewise(const PotentialSpec& spec) {
  const PtFamily base = resolve(spec).base;
  return std::holds_alternative<DoubleDelta>(base) || std::holds_alternative<DeltaInBox>(base) ||
         std::holds_alternative<SquareDoubleWell>(base);
}

bool has_walls(const PotentialSpec& spec) {
  const PtFamily base = resolve(spec).base;
  return std::holds_alternative<DeltaInBox>(base) || std::holds_alternative<LinearBox>(base);
}

double wall_half_width(const PotentialSpec& spec) {
  const PtFamily base = resolve(spec).base;
  if (const auto* s = std::get_if<DeltaInBox>(&base)) return s->a;
  if (std::holds_alternative<LinearBox>(base)) return LinearBox::wall;
  return std::numeric_limits<double>::infinity();
}

std::string family_name(const PotentialSpec& spec) {
  return std::visit(overloaded{[](const DoubleDelta&) { return std::string("double_delta"); },
                               [](const DeltaInBox&) { return std::string("delta_in_box"); },
                               [](const SquareDoubleWell&) {
                                 return std::string("square_double_well");
                               },
                               [](const LinearBox&) { return std::string("linear_box"); },
                               [](const QuadraticPT&) { return std::string("quadratic_pt"); },
                               [](const LinearPT&) { return std::string("linear_pt"); },
                               [](const ScarfII&) { return std::string("scarf_ii"); },
                               [](const HermitianCounterpart&) {
                                 return std::string("hermitian_counterpart");
                               }},
                    spec);
}

double parameter(const PotentialSpec& spec, std::string_view name) {
  if (const auto* h = std::get_if<HermitianCounterpart>(&spec)) return get_field(h->of, name);
  return get_field(resolve(spec).base, name);
}

PotentialSpec with_parameter(const PotentialSpec& spec, std::string_view name, double value) {
  if (const auto* h = std::get_if<HermitianCounterpart>(&spec)) {
    return HermitianCounterpart{set_field(h->of, name, value), h->sign};
  }
  return lift(set_field(resolve(spec).base, name, value));
}

void validate(const PotentialSpec& spec) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  if (const auto* h = std::get_if<HermitianCounterpart>(&spec)) {
    require(h->sign == 1 || h->sign == -1, "hermitian_counterpart: sign must be +1 or -1");
    validate(lift(h->of));
    return;
  }
  std::visit(overloaded{[&](const DoubleDelta& s) {
                          require(s.u > 0, "double_delta: u must be > 0");
                          require(s.a > 0, "double_delta: a must be > 0");
                        },
                        [&](const DeltaInBox& s) {
                          require(s.u > 0, "delta_in_box: u must be > 0");
                          require(s.a > 0, "delta_in_box: a must be > 0");
                          require(s.b > 0 && s.b < s.a, "delta_in_box: need 0 < b < a");
                        },
                        [&](const SquareDoubleWell& s) {
                          require(s.u > 0, "square_double_well: u must be > 0");
                          require(s.b >= 0, "square_double_well: b must be >= 0");
                          require(s.w > 0, "square_double_well: w must be > 0");
                        },
                        [&](const ScarfII& s) { require(s.v1 > 0, "scarf_ii: v1 must be > 0"); },
                        [](const auto&) {}},
             spec);
}

}  // namespace ptspectra
