#include <cmath>
#include <random>

#include "doctest.h"
#include "sbtheta/error.hpp"
#include "sbtheta/hierarchy.hpp"

using namespace sbtheta;

namespace {

LatticeSeq constant_seq(cplx a, cplx b, int n_min, int n_max) {
  LatticeSeq s;
  s.n_min = n_min;
  s.n_max = n_max;
  s.alpha.assign(s.size(), a);
  s.beta.assign(s.size(), b);
  return s;
}

LatticeSeq random_seq(int n_min, int n_max, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LatticeSeq s;
  s.n_min = n_min;
  s.n_max = n_max;
  for (int i = 0; i < s.size(); ++i) {
    s.alpha.emplace_back(u(rng), u(rng));
    s.beta.emplace_back(u(rng), u(rng));
  }
  return s;
}

// alpha(n) = (-2)^n, beta(n) = 9/8 (-2)^-n solves the p = 0 equation on y^2 = (z-1)(z-4)
// with g = 2 and c1 = -5/2 (hand computation of G^2 - F H).
LatticeSeq genus0_seq(int n_min, int n_max) {
  LatticeSeq s;
  s.n_min = n_min;
  s.n_max = n_max;
  for (int n = n_min; n <= n_max; ++n) {
    s.alpha.emplace_back(std::pow(-2.0, n));
    s.beta.emplace_back(9.0 / 8.0 * std::pow(-2.0, -n));
  }
  return s;
}

}  // namespace

TEST_CASE("hierarchy constant sequence first level") {
  const LatticeSeq s = constant_seq(1.0, 0.5, -10, 10);
  const auto co = run_recursion(s, {0.0}, 1, 0);
  CHECK(std::abs(co.g(1, 0) - cplx(-1.0)) < 1e-15);
  CHECK(std::abs(co.f(1, 0)) < 1e-15);
  CHECK(std::abs(co.f(0, 0) - cplx(-2.0)) < 1e-15);
  CHECK(std::abs(co.h(0, 0) - cplx(1.0)) < 1e-15);
}

TEST_CASE("hierarchy cumulative sums agree with the local form") {
  const LatticeSeq s = random_seq(-12, 12, 7);
  const int p = 3;
  const auto co = run_recursion(s, {}, p, 0);
  double worst = 0.0;
  int checked = 0;
  for (int l = 1; l <= p + 1; ++l)
    for (int n = -4; n <= 4; ++n) {
      const cplx local = co.g_hom_local(l, n);
      if (!std::isfinite(local.real())) continue;
      worst = std::max(worst, std::abs(local - co.g_hom(l, n)));
      ++checked;
    }
  CHECK(checked > 20);
  CHECK(worst < 1e-10);
}

TEST_CASE("hierarchy dual identity and dressing") {
  const LatticeSeq s = random_seq(-15, 15, 11);
  const std::vector<cplx> c = {cplx(0.3, -0.2), cplx(-1.1, 0.4), cplx(0.7, 0.0)};
  const auto co = run_recursion(s, c, 2, 1);
  CHECK(dual_identity_check(co, s) < 1e-11);
  for (int n = -3; n <= 3; ++n) {
    const cplx expect = co.g_hom(2, n) + c[0] * co.g_hom(1, n) + c[1];
    CHECK(std::abs(co.g(2, n) - expect) < 1e-12);
  }
}

TEST_CASE("hierarchy window too small") {
  const LatticeSeq s = random_seq(-2, 2, 3);
  CHECK_THROWS_AS(run_recursion(s, {}, 2, 0), Error);
}

TEST_CASE("hierarchy outside the window is NaN") {
  const LatticeSeq s = random_seq(-8, 8, 5);
  const auto co = run_recursion(s, {}, 1, 0);
  CHECK(std::isnan(co.f(0, 8).real()));
  CHECK(std::isnan(s.a(9).real()));
  CHECK(std::isfinite(co.f(0, 7).real()));
}

TEST_CASE("hierarchy explicit residual forms") {
  const LatticeSeq s = random_seq(-10, 10, 19);
  const cplx g(0.4, 1.3);
  for (int p : {0, 1}) {
    const cplx c1(0.25, -0.5);
    const auto co = run_recursion(s, {c1}, p, 0);
    for (int n = -3; n <= 3; ++n) {
      const auto r = sb_residual(co, s, g, n);
      const auto e = sb_residual_explicit(s, p, c1, g, n);
      CHECK(std::abs(r.first - e.first) < 1e-12);
      CHECK(std::abs(r.second - e.second) < 1e-12);
    }
  }
}

TEST_CASE("hierarchy genus zero solution") {
  const LatticeSeq s = genus0_seq(-6, 6);
  const auto co = run_recursion(s, {-2.5}, 0, 0);
  std::vector<LaurentPolyTriple> triples;
  for (int n = -3; n <= 3; ++n) {
    const auto r = sb_residual(co, s, 2.0, n);
    CHECK(std::abs(r.first) < 1e-12);
    CHECK(std::abs(r.second) < 1e-12);
    triples.push_back(assemble(co, n));
  }
  const auto inv = lattice_invariant(triples);
  CHECK(inv.drift < 1e-12);
  CHECK(std::abs(inv.mean(0) - cplx(4.0)) < 1e-12);
  CHECK(std::abs(inv.mean(1) - cplx(-5.0)) < 1e-12);
  CHECK(std::abs(inv.mean(2) - cplx(1.0)) < 1e-12);
  REQUIRE(inv.roots.size() == 2);
  CHECK(std::abs(inv.roots[0] - cplx(1.0)) < 1e-12);
  CHECK(std::abs(inv.roots[1] - cplx(4.0)) < 1e-12);
  for (int n = -2; n <= 3; ++n) {
    const auto zc = zero_curvature_residual(assemble(co, n - 1), assemble(co, n), s.a(n), s.b(n),
                                            default_z_samples());
    CHECK(zc.relations < 1e-11);
    CHECK(zc.matrix < 1e-11);
  }
  const auto tr = trace_check({}, {}, s.a(0), s.a(1), s.b(0), s.b(1), 2.0, 0);
  CHECK(tr.alpha < 1e-14);
  CHECK(tr.beta < 1e-14);
  for (int k = 0; k <= 2; ++k) CHECK(std::abs(r_coefficient(co, k, 0) - inv.mean(2 - k)) < 1e-12);
}

TEST_CASE("hierarchy polynomial roots") {
  Eigen::VectorXcd c(4);
  c << cplx(-6.0), cplx(11.0), cplx(-6.0), cplx(1.0);  // (z-1)(z-2)(z-3)
  const auto r = poly_roots(c);
  REQUIRE(r.size() == 3);
  CHECK(std::abs(r[0] - cplx(1.0)) < 1e-13);
  CHECK(std::abs(r[1] - cplx(2.0)) < 1e-13);
  CHECK(std::abs(r[2] - cplx(3.0)) < 1e-13);
}

TEST_CASE("hierarchy special divisor detection") {
  const std::vector<cplx> e = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const CurveSpec spec = validate_spec(e, 1);
  Divisor d;
  d.points = {make_point(spec, cplx(0.5, 1.0), 1), make_point(spec, cplx(0.5, 1.0), -1)};
  const auto w = is_special(d, spec);
  REQUIRE(w.has_value());
  CHECK(w->i == 0);
  CHECK(w->j == 1);
  Divisor ok;
  ok.points = {make_point(spec, cplx(0.5, 1.0), 1), make_point(spec, cplx(0.5, 1.0), 1)};
  CHECK_FALSE(is_special(ok, spec).has_value());
}

TEST_CASE("hierarchy scaling law") {
  const LatticeSeq s = random_seq(-12, 12, 23);
  const cplx A(0.6, -1.3);
  LatticeSeq t = s;
  for (auto& a : t.alpha) a *= A;
  for (auto& b : t.beta) b /= A;
  const int p = 2;
  const std::vector<cplx> c = {cplx(0.2, 0.1), cplx(-0.4, 0.3), cplx(1.0, -0.5)};
  const auto co = run_recursion(s, c, p, 0), cs = run_recursion(t, c, p, 0);
  double worst = 0.0;
  for (int l = 0; l <= p + 1; ++l)
    for (int n = -5; n <= 5; ++n) {
      worst = std::max(worst, std::abs(cs.f(l, n) - A * co.f(l, n)) / std::abs(co.f(l, n)));
      worst = std::max(worst, std::abs(cs.g(l, n) - co.g(l, n)) / std::abs(co.g(l, n)));
      worst = std::max(worst, std::abs(cs.h(l, n) - co.h(l, n) / A) / std::abs(co.h(l, n)));
    }
  CHECK(worst < 1e-12);
  const cplx g(0.8, 0.3);
  for (int n = -3; n <= 3; ++n) {
    const auto r = sb_residual(co, s, g, n), rs = sb_residual(cs, t, g, n);
    CHECK(std::abs(rs.first - A * r.first) <= 1e-12 * std::abs(r.first));
    CHECK(std::abs(rs.second - r.second / A) <= 1e-12 * std::abs(r.second));
  }
}

TEST_CASE("hierarchy low-order invariant coefficients are lattice constants") {
  const LatticeSeq s = random_seq(0, 19, 31);
  const int p = 2;
  const auto co = run_recursion(s, {cplx(0.5, 0.2), cplx(-0.3, 0.9)}, p, 10);
  double drift = 0.0;
  int sites = 0;
  for (int k = 0; k <= p + 1; ++k) {
    const cplx ref = r_coefficient(co, k, 10);
    for (int n = 0; n <= 19; ++n) {
      const cplx v = r_coefficient(co, k, n);
      if (!std::isfinite(v.real())) continue;
      drift = std::max(drift, std::abs(v - ref));
      ++sites;
    }
  }
  MESSAGE("drift=" << drift << " sites=" << sites);
  CHECK(sites > 40);
  CHECK(drift < 1e-10);
}

TEST_CASE("hierarchy summation constants from the curve") {
  const std::vector<cplx> e = {1.0, 4.0};
  const auto c = summation_constants(validate_spec(e), 2);
  CHECK(std::abs(c[0] - cplx(-2.5)) < 1e-15);
  // c(x)^2 = (1 - x)(1 - 4x) = 1 - 5x + 4x^2
  CHECK(std::abs(2.0 * c[1] + c[0] * c[0] - 4.0) < 1e-14);
  const std::vector<cplx> e2 = {1.0, 2.0, 3.0, 4.0};
  const auto d = summation_constants(validate_spec(e2), 3);
  CHECK(std::abs(d[0] - cplx(-5.0)) < 1e-14);
  CHECK(std::abs(2.0 * d[1] + d[0] * d[0] - 35.0) < 1e-13);
}
