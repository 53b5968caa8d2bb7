#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sbtheta/error.hpp"
#include "sbtheta/solution.hpp"

using namespace sbtheta;

namespace {

const SolutionState& genus1_state() {
  static const SolutionState st = [] {
    const std::vector<cplx> e = {1.0, 2.0, 3.0, 4.0};
    const CurveSpec spec = validate_spec(e);
    Divisor mu;
    mu.points = {make_point(spec, cplx(2.5, 0.6), 1)};
    return init_solution(spec, mu, 1.0, 0);
  }();
  return st;
}

SurfacePoint near_zero(const SolutionState& st, cplx z, cplx y_ref) {
  return make_point_from_y(st.spec, z, nearest_root(st.spec.R(z), y_ref));
}

// Even and odd parts of f over +-zeta isolate expansion coefficients up to O(zeta^2).
struct Parts {
  cplx even, odd;
};
Parts split(cplx f_plus, cplx f_minus, cplx zeta) {
  return {(f_plus + f_minus) / 2.0, (f_plus - f_minus) / (2.0 * zeta)};
}

}  // namespace

TEST_CASE("solution rejects a zero alpha0 and special divisors") {
  const std::vector<cplx> e = {1.0, 2.0, 3.0, 4.0, cplx(2.5, 2.0), cplx(1.0, -2.0)};
  const CurveSpec spec = validate_spec(e);
  const SurfacePoint P = make_point(spec, cplx(0.7, 0.9), 1);
  Divisor special;
  special.points = {P, involute(P)};
  try {
    init_solution(spec, special, 1.0, 0);
    FAIL("expected SpecialDivisor");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::SpecialDivisor);
  }
  Divisor ok;
  ok.points = {P, make_point(spec, cplx(2.2, -0.4), -1)};
  try {
    init_solution(spec, ok, 0.0, 0);
    FAIL("expected ZeroAlpha0");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ZeroAlpha0);
  }
}

TEST_CASE("solution genus one state self-checks") {
  const SolutionState& st = genus1_state();
  CHECK(st.abelian.identity_residual <= 1e-8);
  CHECK(st.abelian.b_period_residual <= 1e-7);
  CHECK(alpha_n(st, 0) == cplx(1.0));
  CHECK(beta_n(st, 0) == st.beta0);
  for (int n = -5; n <= 5; ++n) {
    const cplx prod = alpha_beta_product(st, n);
    CHECK(std::abs(alpha_n(st, n) * beta_n(st, n) - prod) <= 1e-8 * std::abs(prod));
  }
}

TEST_CASE("solution theta arguments are affine in n") {
  const SolutionState& st = genus1_state();
  const ThetaArguments a0 = theta_arguments(st, 0);
  CHECK((a0.mu - st.rho_mu).norm() == 0.0);
  CHECK((a0.nu - st.rho_nu).norm() == 0.0);
  for (int n = -3; n <= 3; ++n) {
    const ThetaArguments am = theta_arguments(st, n - 1), a = theta_arguments(st, n),
                         ap = theta_arguments(st, n + 1);
    CHECK(lattice_distance(ap.pinf_mu - 2.0 * a.pinf_mu + am.pinf_mu, st.periods.tau) < 1e-12);
  }
}

TEST_CASE("solution compensated theta is reduction independent") {
  const SolutionState& st = genus1_state();
  for (int n = -3; n <= 3; ++n) {
    const ThetaArguments a = theta_arguments(st, n);
    for (const CVec* z : {&a.p0plus_mu, &a.p0plus_nu, &a.pinf_mu, &a.pinf_nu}) {
      const cplx direct = theta_direct(*z, st.theta);
      const cplx compensated = theta_log(st, *z).full();
      CHECK(std::abs(direct - compensated) <= 1e-10 * std::abs(direct));
    }
  }
}

TEST_CASE("solution phi asymptotics at the four special points") {
  const SolutionState& st = genus1_state();
  const cplx g = st.spec.g_top();
  const int n = 1;
  const cplx a = alpha_n(st, n), a1 = alpha_n(st, n + 1), a2 = alpha_n(st, n + 2), am = alpha_n(st, n - 1);
  const cplx b = beta_n(st, n), b1 = beta_n(st, n + 1), b2 = beta_n(st, n + 2), bm = beta_n(st, n - 1);
  const cplx u = std::polar(1.0, 0.3);
  // First-order coefficients at zeta = 1e-4, second-order ones at zeta = 1e-3.
  for (double h : {1e-4, 1e-3}) {
    const cplx zeta = h * u;
    const bool first = h < 5e-4;
    Parts s = split(phi(st, near_zero(st, zeta, -g), n), phi(st, near_zero(st, -zeta, -g), n), zeta);
    if (first) CHECK(std::abs(s.odd + b1) <= 1e-6 * std::abs(b1));
    else CHECK(std::abs(s.even / (zeta * zeta) + (1.0 - a1 * b1) * b2) <= 1e-4 * std::abs((1.0 - a1 * b1) * b2));

    s = split(phi(st, near_zero(st, zeta, g), n), phi(st, near_zero(st, -zeta, g), n), zeta);
    if (first) CHECK(std::abs(s.even - 1.0 / a) <= 1e-6 * std::abs(1.0 / a));
    else CHECK(std::abs(s.odd + (1.0 - a * b) * am / (a * a)) <= 1e-4 * std::abs((1.0 - a * b) * am / (a * a)));

    s = split(phi(st, make_point(st.spec, 1.0 / zeta, 1), n), phi(st, make_point(st.spec, -1.0 / zeta, 1), n), zeta);
    if (first) CHECK(std::abs(s.even - b) <= 1e-6 * std::abs(b));
    else CHECK(std::abs(s.odd - (1.0 - a * b) * bm) <= 1e-4 * std::abs((1.0 - a * b) * bm));

    s = split(zeta * phi(st, make_point(st.spec, 1.0 / zeta, -1), n),
              -zeta * phi(st, make_point(st.spec, -1.0 / zeta, -1), n), zeta);
    if (first) CHECK(std::abs(s.even + 1.0 / a1) <= 1e-6 * std::abs(1.0 / a1));
    else CHECK(std::abs(s.odd - (1.0 - a1 * b1) * a2 / (a1 * a1)) <= 1e-4 * std::abs((1.0 - a1 * b1) * a2 / (a1 * a1)));
  }
  CHECK(std::abs(phi(st, p0_plus(st.spec), n) - 1.0 / a) <= 1e-12 * std::abs(1.0 / a));
  CHECK(std::abs(phi(st, infinity_point(1), n) - b) <= 1e-12 * std::abs(b));
  CHECK(phi(st, p0_minus(st.spec), n) == cplx(0.0));
  CHECK_THROWS_AS(phi(st, infinity_point(-1), n), Error);
}

TEST_CASE("solution phi has a pole on the mu divisor") {
  const SolutionState& st = genus1_state();
  try {
    phi(st, st.mu0.points[0], st.n0);
    FAIL("expected PoleOfPhi");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::PoleOfPhi);
  }
}

TEST_CASE("solution Baker-Akhiezer vector") {
  const SolutionState& st = genus1_state();
  const PointData pd = point_data(st, make_point(st.spec, cplx(0.8, 1.7), -1));
  const auto [p1, p2] = baker_akhiezer(st, pd, st.n0);
  CHECK(p1 == cplx(1.0));
  CHECK(std::abs(p2 - phi(st, pd, st.n0)) == 0.0);
  for (int n = -3; n <= 3; ++n) {
    const auto [q1, q2] = baker_akhiezer(st, pd, n);
    CHECK(std::abs(q2 / q1 - phi(st, pd, n)) <= 1e-12 * std::abs(q2 / q1));
  }
}

TEST_CASE("solution psi_1 winds (n - n0) times around P0-") {
  const SolutionState& st = genus1_state();
  const cplx g = st.spec.g_top();
  const double r = 0.25;
  std::vector<PointData> ring;
  const int M = 160;
  for (int k = 0; k < M; ++k) {
    const cplx z = std::polar(r, 2.0 * std::numbers::pi * k / M);
    ring.push_back(point_data(st, near_zero(st, z, -g)));
  }
  for (int n : {-2, 1, 3}) {
    double turn = 0.0;
    cplx prev = baker_akhiezer(st, ring[0], n).first;
    for (int k = 1; k <= M; ++k) {
      const cplx cur = baker_akhiezer(st, ring[k % M], n).first;
      turn += std::arg(cur / prev);
      prev = cur;
    }
    CHECK(std::round(turn / (2.0 * std::numbers::pi)) == doctest::Approx(n - st.n0));
  }
}

TEST_CASE("solution unit circle growth factor") {
  const std::vector<cplx> e = {std::polar(1.0, 0.5), std::polar(1.0, -0.5), std::polar(1.0, 2.0),
                               std::polar(1.0, -2.0)};
  const CurveSpec spec = validate_spec(e);
  Divisor mu;
  mu.points = {make_point(spec, cplx(0.3, 0.4), 1)};
  const SolutionState st = init_solution(spec, mu, 1.0, 0);
  const LatticeSolution sol = solve_window(st, -20, 20);
  double lo = 1e300, hi = 0.0;
  for (const cplx& a : sol.alpha) {
    lo = std::min(lo, std::abs(a));
    hi = std::max(hi, std::abs(a));
  }
  // bounded: no exponential growth over 41 sites
  CHECK(hi / lo < 100.0);
}

TEST_CASE("solution genus zero closed form") {
  const Genus0Constants k = genus0_constants(1.0, 4.0, 1);
  CHECK(k.g1 == cplx(2.0));
  CHECK(k.c1 == cplx(-2.5));
  CHECK(std::abs(k.alpha_beta - 9.0 / 8.0) < 1e-15);
  const LatticeSolution sol = genus0_solution(1.0, 4.0, 1, 1.0, 0, -10, 10);
  CHECK(sol.alpha[11] == cplx(-2.0));
  for (int n = -10; n <= 10; ++n) {
    CHECK(sol.alpha[n + 10] == cplx(std::pow(-2.0, n)));
    CHECK(std::abs(sol.alpha[n + 10] * sol.beta[n + 10] - 9.0 / 8.0) <= 1e-12);
  }
  const double t = 0.7;
  const LatticeSolution circ = genus0_solution(std::polar(1.0, t), std::polar(1.0, -t), 1, cplx(0.3, 0.1), 2, -6, 6);
  for (const cplx& a : circ.alpha) CHECK(std::abs(std::abs(a) - std::abs(cplx(0.3, 0.1))) < 1e-12);
  CHECK_THROWS_AS(genus0_solution(2.0, 2.0, 1, 1.0, 0, -3, 3), Error);
}
