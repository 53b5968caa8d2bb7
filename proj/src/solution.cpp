#include "sbtheta/solution.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sbtheta/error.hpp"

namespace sbtheta {

namespace {

constexpr double kThetaFloor = 1e-12;

double parity(int k) { return k % 2 == 0 ? 1.0 : -1.0; }

cplx omega0(const ThirdKindData& tk, Special s) { return tk.omega0[static_cast<int>(s)]; }

/// exp(extra_log) * prod theta(num) / prod theta(den), keeping exponents in log form.
cplx theta_quotient(const SolutionState& st, const std::vector<const CVec*>& num,
                    const std::vector<const CVec*>& den, cplx extra_log, ErrorCode on_zero) {
  cplx lf = extra_log;
  cplx value = 1.0;
  for (const CVec* z : num) {
    const ThetaValue v = theta_log(st, *z);
    lf += v.log_factor;
    value *= v.value;
  }
  for (const CVec* z : den) {
    const ThetaValue v = theta_log(st, *z);
    if (theta_relative_size(st, v, *z) < kThetaFloor)
      throw Error(on_zero, "theta denominator vanishes");
    lf -= v.log_factor;
    value /= v.value;
  }
  return std::exp(lf) * value;
}

}  // namespace

ThetaValue theta_log(const SolutionState& st, const CVec& z) { return theta_reduced(z, st.theta); }

double theta_relative_size(const SolutionState& st, const ThetaValue& v, const CVec& z) {
  const CVec r = reduce_lattice(z, st.theta.tau).reduced;
  const Eigen::VectorXd y = r.imag();
  const double natural = std::exp(std::numbers::pi * y.dot(st.im_tau_inv * y));
  return std::abs(v.value) / natural;
}

SolutionState init_solution(const CurveSpec& spec, const Divisor& mu_hat, cplx alpha0, int n0,
                            const SolutionOptions& opts) {
  const int p = spec.genus();
  if (p < 1) throw Error(ErrorCode::GenusTooSmall, "theta formulas need genus >= 1");
  if (mu_hat.degree() != p)
    throw Error(ErrorCode::ConfigError, "mu_hat must contain exactly p = " + std::to_string(p) + " points");
  if (alpha0 == cplx(0.0)) throw Error(ErrorCode::ZeroAlpha0, "alpha(n0) must be nonzero");
  for (const auto& pt : mu_hat.points) {
    if (pt.at_infinity() || match_special(spec, pt))
      throw Error(ErrorCode::ConfigError, "mu_hat points must avoid P0+- and Pinf+-");
    const cplx r = spec.R(pt.z);
    if (std::abs(pt.y * pt.y - r) > 1e-8 * (1.0 + std::abs(r)))
      throw Error(ErrorCode::ConfigError, "mu_hat point is not on the curve");
  }
  if (auto w = is_special(mu_hat, spec)) {
    std::ostringstream os;
    os << "points " << w->i << " and " << w->j << " form a pair {P, P*} (z = "
       << mu_hat.points[w->i].z << ")";
    throw Error(ErrorCode::SpecialDivisor, os.str());
  }

  PeriodData periods = compute_periods(spec, build_homology(spec, opts.quad));
  AbelianSetup abelian = build_abelian(spec, periods, opts.quad);
  RiemannConstants riemann = riemann_constants(spec, periods, abelian.registry, opts.seed);

  SolutionState st{spec, std::move(periods), {}, std::move(abelian), std::move(riemann)};
  st.theta.tau = st.periods.tau;
  st.theta.tol = opts.theta_tol;
  st.im_tau_inv = st.periods.tau.imag().inverse();
  st.n0 = n0;
  st.alpha0 = alpha0;
  st.mu0 = mu_hat;
  st.rho_mu = abel_divisor(mu_hat, st.periods, st.abelian.registry);
  st.delta = st.abelian.delta;
  st.shift_minus = st.abelian.shift_minus;
  st.rho_nu = st.rho_mu + st.shift_minus;
  st.growth_log = omega0(st.abelian.minus, Special::P0Minus) - omega0(st.abelian.minus, Special::PinfPlus);
  st.abel_p0plus = abel_point(p0_plus(spec), st.periods, st.abelian.registry);
  st.abel_pinfplus = abel_point(infinity_point(1), st.periods, st.abelian.registry);
  st.beta0 = alpha_beta_product(st, n0) / alpha0;
  return st;
}

ThetaArguments theta_arguments(const SolutionState& st, int n) {
  const double k = n - st.n0;
  ThetaArguments a;
  a.mu = st.rho_mu + k * st.delta;
  a.nu = st.rho_nu + k * st.delta;
  const CVec& xi = st.riemann.xi;
  a.p0plus_mu = xi - st.abel_p0plus + a.mu;
  a.p0plus_nu = xi - st.abel_p0plus + a.nu;
  a.pinf_mu = xi - st.abel_pinfplus + a.mu;
  a.pinf_nu = xi - st.abel_pinfplus + a.nu;
  return a;
}

cplx alpha_n(const SolutionState& st, int n) {
  if (n == st.n0) return st.alpha0;
  const int k = n - st.n0;
  const ThetaArguments a = theta_arguments(st, n), a0 = theta_arguments(st, st.n0);
  return st.alpha0 * parity(k) *
         theta_quotient(st, {&a0.p0plus_nu, &a.p0plus_mu}, {&a0.p0plus_mu, &a.p0plus_nu},
                        -static_cast<double>(k) * st.growth_log, ErrorCode::ThetaNearZero);
}

cplx beta_n(const SolutionState& st, int n) {
  if (n == st.n0) return st.beta0;
  const int k = n - st.n0;
  const ThetaArguments a = theta_arguments(st, n), a0 = theta_arguments(st, st.n0);
  return st.beta0 * parity(k) *
         theta_quotient(st, {&a0.pinf_mu, &a.pinf_nu}, {&a0.pinf_nu, &a.pinf_mu},
                        static_cast<double>(k) * st.growth_log, ErrorCode::ThetaNearZero);
}

cplx alpha_beta_product(const SolutionState& st, int n) {
  const ThetaArguments a = theta_arguments(st, n);
  const cplx e = omega0(st.abelian.minus, Special::PinfPlus) - omega0(st.abelian.minus, Special::P0Plus);
  return theta_quotient(st, {&a.p0plus_mu, &a.pinf_nu}, {&a.p0plus_nu, &a.pinf_mu}, e,
                        ErrorCode::ThetaNearZero);
}

PointData point_data(const SolutionState& st, const SurfacePoint& p) {
  PointData pd;
  pd.point = p;
  pd.special = match_special(st.spec, p);
  if (pd.special) {
    pd.abel = abel_point(p, st.periods, st.abelian.registry);
    pd.omega_minus = omega0(st.abelian.minus, *pd.special);
    pd.omega_plus = omega0(st.abelian.plus, *pd.special);
    return pd;
  }
  const Basis v = st.abelian.registry.path_to(p).value;
  pd.abel = st.periods.abel(v);
  pd.omega_minus = st.abelian.minus.integrate(v);
  pd.omega_plus = st.abelian.plus.integrate(v);
  return pd;
}

cplx phi(const SolutionState& st, const PointData& pd, int n) {
  if (pd.special == Special::P0Minus) return 0.0;
  if (pd.special == Special::PinfMinus) throw Error(ErrorCode::PoleOfPhi, "phi has a pole at Pinf-");
  const int k = n - st.n0;
  const ThetaArguments a = theta_arguments(st, n), a0 = theta_arguments(st, st.n0);
  const CVec zn = st.riemann.xi - pd.abel + a.nu;
  const CVec zm = st.riemann.xi - pd.abel + a.mu;
  const cplx lg = static_cast<double>(k) * st.growth_log - omega0(st.abelian.minus, Special::P0Plus) +
                  pd.omega_minus;
  const ThetaValue tm = theta_log(st, zm);
  if (theta_relative_size(st, tm, zm) < kThetaFloor)
    throw Error(ErrorCode::PoleOfPhi, "P lies on the mu divisor");
  return parity(k) / st.alpha0 *
         theta_quotient(st, {&a0.p0plus_mu, &zn}, {&a0.p0plus_nu, &zm}, lg, ErrorCode::ThetaNearZero);
}

cplx phi(const SolutionState& st, const SurfacePoint& p, int n) {
  return phi(st, point_data(st, p), n);
}

std::pair<cplx, cplx> baker_akhiezer(const SolutionState& st, const PointData& pd, int n) {
  if (pd.special == Special::P0Minus || pd.special == Special::PinfPlus)
    throw Error(ErrorCode::PoleOfPhi, "psi is singular at P0- and Pinf+");
  const double k = n - st.n0;
  const ThetaArguments a = theta_arguments(st, n), a0 = theta_arguments(st, st.n0);
  const CVec zn = st.riemann.xi - pd.abel + a.mu;
  const CVec z0 = st.riemann.xi - pd.abel + a0.mu;
  const cplx lg = k * (pd.omega_plus - omega0(st.abelian.plus, Special::PinfPlus));
  const cplx psi1 = n == st.n0 ? cplx(1.0)
                               : theta_quotient(st, {&a0.pinf_mu, &zn}, {&a.pinf_mu, &z0}, lg,
                                                ErrorCode::ThetaNearZero);
  return {psi1, phi(st, pd, n) * psi1};
}

LatticeSeq LatticeSolution::seq() const {
  LatticeSeq s;
  s.n_min = n_min;
  s.n_max = n_max;
  s.alpha = alpha;
  s.beta = beta;
  return s;
}

LatticeSolution solve_window(const SolutionState& st, int n_min, int n_max) {
  LatticeSolution sol;
  sol.n_min = n_min;
  sol.n_max = n_max;
  sol.n0 = st.n0;
  for (int n = n_min; n <= n_max; ++n) {
    const cplx a = alpha_n(st, n), b = beta_n(st, n);
    const cplx prod = alpha_beta_product(st, n);
    sol.alpha.push_back(a);
    sol.beta.push_back(b);
    sol.product_residual.push_back(std::abs(a * b - prod) / std::abs(prod));
  }
  return sol;
}

Genus0Constants genus0_constants(cplx E0, cplx E1, int g_sign) {
  const std::vector<cplx> e = {E0, E1};
  const CurveSpec spec = validate_spec(e, g_sign);
  Genus0Constants k;
  k.g1 = spec.g_top();
  k.c1 = -(E0 + E1) / 2.0;
  k.alpha_beta = (1.0 - k.c1 / k.g1) / 2.0;
  return k;
}

LatticeSolution genus0_solution(cplx E0, cplx E1, int g_sign, cplx alpha0, int n0, int n_min,
                                int n_max) {
  const double scale = std::max(std::abs(E0), std::abs(E1));
  if (std::abs(E0 - E1) <= 1e-12 * scale)
    throw Error(ErrorCode::EqualBranchPoints, "E0 = E1 makes alpha*beta equal to 0 or 1");
  if (alpha0 == cplx(0.0)) throw Error(ErrorCode::ZeroAlpha0, "alpha(n0) must be nonzero");
  if (n0 < n_min || n0 > n_max) throw Error(ErrorCode::ConfigError, "window must contain n0");
  const Genus0Constants k = genus0_constants(E0, E1, g_sign);
  const cplx q = -k.g1;
  const cplx beta0 = k.alpha_beta / alpha0;
  LatticeSolution sol;
  sol.n_min = n_min;
  sol.n_max = n_max;
  sol.n0 = n0;
  const int N = n_max - n_min + 1;
  sol.alpha.assign(N, 0.0);
  sol.beta.assign(N, 0.0);
  sol.product_residual.assign(N, 0.0);
  // Integer powers by repeated multiplication keep (-2)^k exact.
  cplx a = alpha0, b = beta0;
  for (int n = n0; n <= n_max; ++n, a *= q, b /= q) {
    sol.alpha[n - n_min] = a;
    sol.beta[n - n_min] = b;
  }
  a = alpha0 / q;
  b = beta0 * q;
  for (int n = n0 - 1; n >= n_min; --n, a /= q, b *= q) {
    sol.alpha[n - n_min] = a;
    sol.beta[n - n_min] = b;
  }
  for (int i = 0; i < N; ++i)
    sol.product_residual[i] = std::abs(sol.alpha[i] * sol.beta[i] - k.alpha_beta) / std::abs(k.alpha_beta);
  return sol;
}

}  // namespace sbtheta
