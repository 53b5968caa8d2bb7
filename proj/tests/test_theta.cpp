#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sbtheta/theta.hpp"

using namespace sbtheta;

namespace {

constexpr cplx kI(0.0, 1.0);

ThetaParams params(const CMat& tau) {
  ThetaParams p;
  p.tau = tau;
  return p;
}

CMat genus2_tau() {
  CMat t(2, 2);
  t << cplx(0.3, 1.2), cplx(-0.1, 0.35), cplx(-0.1, 0.35), cplx(0.45, 0.9);
  return t;
}

}  // namespace

TEST_CASE("theta at the origin for tau = i") {
  CMat tau(1, 1);
  tau(0, 0) = kI;
  CVec z = CVec::Zero(1);
  CHECK(std::abs(theta(z, params(tau)) - 1.086434811213308) < 1e-12);
}

TEST_CASE("genus one theta equals the Jacobi theta_3 series") {
  const cplx t(0.2, 0.8);
  CMat tau(1, 1);
  tau(0, 0) = t;
  const cplx q = std::exp(kI * std::numbers::pi * t);
  for (cplx z : {cplx(0.1, 0.05), cplx(-0.3, 0.2), cplx(0.45, -0.3)}) {
    cplx s = 1.0;
    for (int n = 1; n < 60; ++n) s += 2.0 * std::pow(q, n * n) * std::cos(2.0 * std::numbers::pi * n * z);
    CVec v(1);
    v(0) = z;
    CHECK(std::abs(theta(v, params(tau)) - s) < 1e-13 * std::abs(s));
  }
}

TEST_CASE("theta quasi-periodicity and parity") {
  const CMat tau = genus2_tau();
  const ThetaParams p = params(tau);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::uniform_int_distribution<int> k(-2, 2);
  double worst = 0.0, parity = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    CVec z(2);
    z << cplx(u(rng), u(rng)), cplx(u(rng), u(rng));
    Eigen::VectorXd m(2), n(2);
    m << k(rng), k(rng);
    n << k(rng), k(rng);
    const CVec nc = n.cast<cplx>();
    const CVec shifted = z + m.cast<cplx>() + tau * nc;
    const cplx factor = std::exp(-kI * std::numbers::pi * nc.dot(tau * nc) -
                                 2.0 * kI * std::numbers::pi * nc.dot(z));
    const cplx lhs = theta_direct(shifted, p), rhs = factor * theta_direct(z, p);
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    const cplx a = theta(z, p), b = theta(CVec(-z), p);
    parity = std::max(parity, std::abs(a - b) / std::abs(a));
  }
  CHECK(worst <= 1e-10);
  CHECK(parity <= 1e-14);
}

TEST_CASE("reduced theta equals the direct sum") {
  const CMat tau = genus2_tau();
  const ThetaParams p = params(tau);
  CVec z(2);
  z << cplx(1.7, 0.9), cplx(-2.2, -1.4);
  const ThetaValue v = theta_reduced(z, p);
  const cplx d = theta_direct(z, p);
  CHECK(std::abs(v.full() - d) < 1e-12 * std::abs(d));
  const LatticeReduction r = reduce_lattice(z, tau);
  CHECK((r.reduced + r.m.cast<cplx>() + tau * r.n.cast<cplx>() - z).norm() < 1e-13);
  CHECK(lattice_distance(r.m.cast<cplx>() + tau * r.n.cast<cplx>(), tau) < 1e-13);
}
