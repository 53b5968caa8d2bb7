#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sbtheta/theta.hpp"

using namespace sbtheta;

namespace {

// Complete elliptic integral of the first kind via the arithmetic-geometric mean.
double ellint_k(double k) {
  double a = 1.0, b = std::sqrt(1.0 - k * k);
  for (int i = 0; i < 40; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

PeriodData periods_for(std::vector<cplx> e) {
  const CurveSpec spec = validate_spec(e);
  return compute_periods(spec, build_homology(spec));
}

}  // namespace

TEST_CASE("genus one period matrix matches the elliptic-integral ratio") {
  const double rho = ellint_k(std::sqrt(3.0) / 2.0) / ellint_k(0.5);
  CHECK(rho == doctest::Approx(1.279262).epsilon(1e-6));
  const PeriodData pd = periods_for({1.0, 2.0, 3.0, 4.0});
  const cplx tau = pd.tau(0, 0);
  MESSAGE("tau = " << tau.real() << " + " << tau.imag() << "i");
  const double d = std::min(std::abs(tau - cplx(0, rho)), std::abs(tau - cplx(0, 1.0 / rho)));
  CHECK(d < 1e-8);
}

TEST_CASE("a-period of dz/y equals twice the complete elliptic integral") {
  const PeriodData pd = periods_for({1.0, 2.0, 3.0, 4.0});
  CHECK(std::abs(pd.C(0, 0)) == doctest::Approx(2.0 * ellint_k(0.5)).epsilon(1e-11));
}

TEST_CASE("genus one tau branch is frozen") {
  // Regression constant: with this homology basis the realized branch is i * rho.
  const cplx frozen(0.0, 1.2792615711710065);
  const PeriodData pd = periods_for({1.0, 2.0, 3.0, 4.0});
  CHECK(std::abs(pd.tau(0, 0) - frozen) < 1e-8);
}

TEST_CASE("a-period agrees with an endpoint-free trapezoid oracle") {
  // On (1, 2), x = 1.5 - 0.5 cos t turns the a-period integrand into the smooth
  // periodic function 1 / sqrt((3 - x)(4 - x)); the trapezoid rule converges geometrically.
  const int N = 400;
  double s = 0.0;
  for (int k = 0; k < N; ++k) {
    const double t = std::numbers::pi * (k + 0.5) / N;
    const double x = 1.5 - 0.5 * std::cos(t);
    s += 1.0 / std::sqrt((3.0 - x) * (4.0 - x));
  }
  const double half_period = s * std::numbers::pi / N;
  const PeriodData pd = periods_for({1.0, 2.0, 3.0, 4.0});
  CHECK(std::abs(std::abs(pd.C(0, 0)) - 2.0 * half_period) < 1e-12);
}

TEST_CASE("period matrix is symmetric with positive imaginary part in genus two") {
  const PeriodData pd = periods_for({1.0, 2.0, 3.0, 4.0, cplx(2.5, 2.0), cplx(1.0, -2.0)});
  CHECK((pd.tau - pd.tau.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(pd.min_eig_im_tau > 0.0);
  CHECK(std::abs(pd.homology.intersect(pd.homology.a[0], pd.homology.b[0])) == 1);
  CHECK(pd.homology.intersect(pd.homology.a[0], pd.homology.b[1]) == 0);
  CHECK(pd.homology.intersect(pd.homology.a[0], pd.homology.a[1]) == 0);
  CHECK(pd.homology.intersect(pd.homology.b[0], pd.homology.b[1]) == 0);
}
