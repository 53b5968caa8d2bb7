#include "sbtheta/theta.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "sbtheta/error.hpp"

namespace sbtheta {

namespace {

constexpr cplx kI(0.0, 1.0);

double min_eig_sym(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  return es.eigenvalues().minCoeff();
}

CMat tau_from(const CMat& c, const Homology& h) {
  const int p = h.genus;
  CMat B(p, p);
  for (int l = 0; l < p; ++l)
    for (int m = 0; m < p; ++m) B(m, l) = h.b_values[l](m);
  return c * B;
}

}  // namespace

Differential PeriodData::omega(int j) const {
  Differential d = zero_basis(genus);
  for (int l = 0; l < genus; ++l) d(l) = c(j, l);
  return d;
}

CVec PeriodData::abel(const Basis& v) const {
  CVec eta(genus);
  for (int l = 0; l < genus; ++l) eta(l) = v(l);
  return c * eta;
}

PeriodData compute_periods(const CurveSpec& spec, Homology homology) {
  PeriodData pd;
  const int p = spec.genus();
  pd.genus = p;
  if (p == 0) {
    pd.homology = std::move(homology);
    return pd;
  }
  pd.C.resize(p, p);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < p; ++k) pd.C(j, k) = homology.a_values[k](j);
  Eigen::FullPivLU<CMat> lu(pd.C);
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-14 * std::pow(pd.C.norm(), p))
    throw Error(ErrorCode::SingularC, "a-period matrix is singular");
  pd.c = lu.inverse();
  pd.tau = tau_from(pd.c, homology);
  double ev = min_eig_sym(pd.tau.imag());
  if (ev < 0.0) {
    flip_b(homology);
    pd.b_flipped = true;
    pd.tau = tau_from(pd.c, homology);
    ev = min_eig_sym(pd.tau.imag());
  }
  const double asym = (pd.tau - pd.tau.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * std::max(1.0, pd.tau.cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::SelfCheckFailed,
                "period matrix is not symmetric (" + std::to_string(asym) + ")");
  if (!(ev > 0.0))
    throw Error(ErrorCode::NonconvergentTau, "Im(tau) is not positive definite");
  pd.tau = 0.5 * (pd.tau + pd.tau.transpose());
  pd.min_eig_im_tau = ev;
  pd.homology = std::move(homology);
  return pd;
}

// ------------------------------------------------------------- theta --

void lattice_coordinates(const CVec& z, const CMat& tau, Eigen::VectorXd& m, Eigen::VectorXd& n) {
  const Eigen::MatrixXd im = tau.imag();
  n = im.ldlt().solve(z.imag());
  m = z.real() - tau.real() * n;
}

double lattice_distance(const CVec& z, const CMat& tau) {
  Eigen::VectorXd m, n;
  lattice_coordinates(z, tau, m, n);
  double d = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    d = std::max(d, std::abs(m(i) - std::round(m(i))));
    d = std::max(d, std::abs(n(i) - std::round(n(i))));
  }
  return d;
}

LatticeReduction reduce_lattice(const CVec& z, const CMat& tau) {
  LatticeReduction r;
  Eigen::VectorXd m, n;
  lattice_coordinates(z, tau, m, n);
  r.n = n.array().round();
  const CVec shifted = z - tau * r.n.cast<cplx>();
  r.m = shifted.real().array().round();
  r.reduced = shifted - r.m.cast<cplx>();
  return r;
}

namespace {

// Visits every integer vector with sup-norm exactly r.
template <class F>
void for_shell(int p, int r, F&& f) {
  Eigen::VectorXi n = Eigen::VectorXi::Constant(p, -r);
  for (;;) {
    if (n.cwiseAbs().maxCoeff() == r) f(n);
    int i = 0;
    while (i < p && n(i) == r) n(i++) = -r;
    if (i == p) break;
    ++n(i);
  }
}

cplx shell_sum(const CVec& z, const ThetaParams& params, int min_radius) {
  const int p = static_cast<int>(z.size());
  if (p == 0) return 1.0;
  const double pi = std::numbers::pi;
  cplx sum = 0.0;
  double prev_shell = 0.0;
  for (int r = 0; r <= params.max_radius; ++r) {
    cplx shell = 0.0;
    for_shell(p, r, [&](const Eigen::VectorXi& n) {
      const CVec nc = n.cast<cplx>();
      const cplx expo = 2.0 * pi * kI * nc.dot(z) + pi * kI * nc.dot(params.tau * nc);
      shell += std::exp(expo);
    });
    sum += shell;
    const double s = std::abs(shell);
    if (r >= std::max(1, min_radius) && s <= params.tol * std::abs(sum) &&
        prev_shell <= 1e3 * params.tol * std::abs(sum))
      return sum;
    prev_shell = s;
  }
  throw Error(ErrorCode::NonconvergentTau, "theta series did not converge");
}

}  // namespace

cplx theta_direct(const CVec& z, const ThetaParams& params) {
  Eigen::VectorXd m, n;
  lattice_coordinates(z, params.tau, m, n);
  const int rmin = static_cast<int>(std::ceil(n.cwiseAbs().maxCoeff())) + 1;
  return shell_sum(z, params, rmin);
}

ThetaValue theta_reduced(const CVec& z, const ThetaParams& params) {
  const LatticeReduction r = reduce_lattice(z, params.tau);
  // theta(z' + m + tau n) = exp(-2 pi i (n, z') - pi i (n, tau n)) theta(z');
  // n is an integer vector, so the conjugation in (n, z') is immaterial.
  const CVec nc = r.n.cast<cplx>();
  const double pi = std::numbers::pi;
  ThetaValue out;
  out.log_factor = -2.0 * pi * kI * nc.dot(r.reduced) - pi * kI * nc.dot(params.tau * nc);
  out.value = shell_sum(r.reduced, params, 1);
  return out;
}

cplx theta(const CVec& z, const ThetaParams& params) { return theta_reduced(z, params).full(); }

}  // namespace sbtheta
