#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sbtheta/abelian.hpp"

using namespace sbtheta;

namespace {

struct Fixture {
  CurveSpec spec;
  PeriodData periods;
  AbelianSetup setup;
};

Fixture make(std::vector<cplx> e) {
  CurveSpec spec = validate_spec(e);
  PeriodData pd = compute_periods(spec, build_homology(spec));
  AbelianSetup s = build_abelian(spec, pd);
  return {spec, pd, std::move(s)};
}

}  // namespace

TEST_CASE("abelian stack self-checks on several curves") {
  for (auto e : std::vector<std::vector<cplx>>{
           {1.0, 2.0, 3.0, 4.0},
           {std::polar(1.0, 0.5), std::polar(1.0, -0.5), std::polar(1.0, 2.0), std::polar(1.0, -2.0)},
           {1.0, 2.0, 3.0, 4.0, cplx(2.5, 2.0), cplx(1.0, -2.0)}}) {
    Fixture f = make(e);
    MESSAGE("p=" << f.spec.genus() << " bres=" << f.setup.b_period_residual
                 << " id=" << f.setup.identity_residual
                 << " ladder=" << f.setup.minus.ladder_deviation << "," << f.setup.plus.ladder_deviation);
    CHECK(f.setup.b_period_residual < 1e-7);
    CHECK(f.setup.identity_residual < 1e-8);
    for (const ThirdKindData* tk : {&f.setup.minus, &f.setup.plus}) {
      for (int j = 0; j < f.spec.genus(); ++j)
        CHECK(std::abs(tk->integrate(f.periods.homology.a_values[j])) < 1e-8);
      CHECK(std::abs(residue_at(f.spec, *tk, Special::P0Minus) - 1.0) < 1e-8);
      CHECK(std::abs(residue_at(f.spec, *tk, Special::P0Plus)) < 1e-8);
      const Special t = tk->target > 0 ? Special::PinfPlus : Special::PinfMinus;
      const Special o = tk->target > 0 ? Special::PinfMinus : Special::PinfPlus;
      CHECK(std::abs(residue_at(f.spec, *tk, t) + 1.0) < 1e-8);
      CHECK(std::abs(residue_at(f.spec, *tk, o)) < 1e-8);
    }
    RiemannConstants rc = riemann_constants(f.spec, f.periods, f.setup.registry);
    MESSAGE("xi formula=" << rc.from_formula << " ratio=" << rc.vanishing_ratio);
    CHECK(rc.vanishing_ratio < 1e-6);
  }
}

TEST_CASE("abelian Riemann constants are half periods") {
  for (auto e : std::vector<std::vector<cplx>>{
           {1.0, 2.0, 3.0, 4.0}, {1.0, 2.0, 3.0, 4.0, cplx(2.5, 2.0), cplx(1.0, -2.0)}}) {
    Fixture f = make(e);
    const RiemannConstants rc = riemann_constants(f.spec, f.periods, f.setup.registry);
    CHECK(lattice_distance(2.0 * rc.xi, f.periods.tau) < 1e-10);
  }
}

TEST_CASE("abelian path corrections keep the Abel map of z's divisor on the lattice") {
  Fixture f = make({1.0, 2.0, 3.0, 4.0});
  // z has divisor P0+ + P0- - Pinf+ - Pinf-.
  const auto& reg = f.setup.registry;
  const CVec v = abel_point(p0_plus(f.spec), f.periods, reg) + abel_point(p0_minus(f.spec), f.periods, reg) -
                 abel_point(infinity_point(1), f.periods, reg) - abel_point(infinity_point(-1), f.periods, reg);
  CHECK(lattice_distance(v, f.periods.tau) < 1e-10);
}
