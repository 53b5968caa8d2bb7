#include "sbtheta/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "sbtheta/error.hpp"

namespace sbtheta {

namespace {

const cplx kNaN(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

bool lex_less(cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }

}  // namespace

cplx LatticeSeq::a(int n) const { return contains(n) ? alpha[n - n_min] : kNaN; }
cplx LatticeSeq::b(int n) const { return contains(n) ? beta[n - n_min] : kNaN; }

std::vector<int> degenerate_sites(const LatticeSeq& seq) {
  std::vector<int> out;
  for (int n = seq.n_min; n <= seq.n_max; ++n) {
    const cplx ab = seq.a(n) * seq.b(n);
    if (std::abs(ab) < 1e-12 || std::abs(ab - 1.0) < 1e-12) out.push_back(n);
  }
  return out;
}

cplx HierarchyCoefficients::get(const Table& t, int l, int n) const {
  if (l < 0 || l >= static_cast<int>(t.size()) || n < n_min || n > n_max) return kNaN;
  return t[l][n - n_min];
}

cplx HierarchyCoefficients::g_hom_local(int l, int n) const {
  if (l == 0) return 1.0;
  cplx s = 0.0;
  for (int i = 0; i <= l - 1; ++i) s += f_hom(i, n) * h_hom(l - 1 - i, n);
  for (int i = 1; i <= l - 1; ++i) s -= g_hom(i, n) * g_hom(l - i, n);
  return 0.5 * s;
}

HierarchyCoefficients run_recursion(const LatticeSeq& seq, const std::vector<cplx>& constants,
                                    int p, int n_ref) {
  HierarchyCoefficients co;
  co.p = p;
  co.n_ref = n_ref;
  co.n_min = seq.n_min;
  co.n_max = seq.n_max;
  co.c.assign(p + 2, 0.0);
  co.c[0] = 1.0;
  for (int l = 1; l <= p + 1 && l <= static_cast<int>(constants.size()); ++l)
    co.c[l] = constants[l - 1];
  if (n_ref - (p + 2) < seq.n_min || n_ref + (p + 2) > seq.n_max)
    throw Error(ErrorCode::WindowTooSmall,
                "reference site needs " + std::to_string(p + 2) + " margin sites on each side");

  const int N = seq.size();
  const int L = p + 2;
  auto table = [&] { return HierarchyCoefficients::Table(L, std::vector<cplx>(N, kNaN)); };
  co.fh_ = table();
  co.gh_ = table();
  co.hh_ = table();
  auto idx = [&](int n) { return n - seq.n_min; };
  for (int n = seq.n_min; n <= seq.n_max; ++n) {
    co.fh_[0][idx(n)] = -2.0 * seq.a(n + 1);
    co.gh_[0][idx(n)] = 1.0;
    co.hh_[0][idx(n)] = 2.0 * seq.b(n);
  }
  for (int l = 0; l + 1 < L; ++l) {
    auto& gn = co.gh_[l + 1];
    auto increment = [&](int n) {
      return seq.a(n) * co.h_hom(l, n - 1) + seq.b(n) * co.f_hom(l, n);
    };
    gn[idx(n_ref)] = co.g_hom_local(l + 1, n_ref);
    for (int n = n_ref + 1; n <= seq.n_max; ++n) gn[idx(n)] = gn[idx(n - 1)] + increment(n);
    for (int n = n_ref; n > seq.n_min; --n) gn[idx(n - 1)] = gn[idx(n)] - increment(n);
    for (int n = seq.n_min; n <= seq.n_max; ++n) {
      co.fh_[l + 1][idx(n)] =
          co.f_hom(l, n + 1) - seq.a(n + 1) * (co.g_hom(l + 1, n + 1) + co.g_hom(l + 1, n));
      co.hh_[l + 1][idx(n)] =
          co.h_hom(l, n - 1) + seq.b(n) * (co.g_hom(l + 1, n) + co.g_hom(l + 1, n - 1));
    }
  }
  if (!finite(co.g_hom(p + 1, n_ref)))
    throw Error(ErrorCode::WindowTooSmall, "window does not determine level p+1 at n_ref");

  co.f_ = table();
  co.g_ = table();
  co.h_ = table();
  for (int l = 0; l < L; ++l)
    for (int i = 0; i < N; ++i) {
      cplx f = 0.0, g = 0.0, h = 0.0;
      for (int k = 0; k <= l; ++k) {
        f += co.c[l - k] * co.fh_[k][i];
        g += co.c[l - k] * co.gh_[k][i];
        h += co.c[l - k] * co.hh_[k][i];
      }
      co.f_[l][i] = f;
      co.g_[l][i] = g;
      co.h_[l][i] = h;
    }
  return co;
}

std::vector<cplx> summation_constants(const CurveSpec& spec, int count) {
  const int N = count + 1;
  std::vector<cplx> r(N, 0.0), c(N, 0.0);
  r[0] = 1.0;
  for (const cplx& e : spec.branch_points())
    for (int k = N - 1; k >= 1; --k) r[k] -= e * r[k - 1];
  c[0] = 1.0;
  for (int k = 1; k < N; ++k) {
    cplx s = r[k];
    for (int i = 1; i < k; ++i) s -= c[i] * c[k - i];
    c[k] = 0.5 * s;
  }
  return {c.begin() + 1, c.end()};
}

double dual_identity_check(const HierarchyCoefficients& co, const LatticeSeq& seq) {
  double worst = 0.0;
  for (int l = 0; l <= co.p; ++l)
    for (int n = seq.n_min; n <= seq.n_max; ++n) {
      const cplx r = co.g(l + 1, n) - co.g(l + 1, n - 1) - seq.a(n) * co.h(l + 1, n) -
                     seq.b(n) * co.f(l + 1, n - 1);
      if (finite(r)) worst = std::max(worst, std::abs(r));
    }
  return worst;
}

LaurentPolyTriple assemble(const HierarchyCoefficients& co, int n) {
  const int p = co.p;
  LaurentPolyTriple t;
  t.F.resize(p + 1);
  t.G.resize(p + 2);
  t.H.resize(p + 2);
  for (int l = 0; l <= p; ++l) t.F(l) = co.f(p - l, n);
  for (int l = 0; l <= p + 1; ++l) {
    t.G(l) = co.g(p + 1 - l, n);
    t.H(l) = co.h(p + 1 - l, n);
  }
  return t;
}

// ---------------------------------------------------------- polynomials --

cplx polyval(const Eigen::VectorXcd& c, cplx z) {
  cplx v = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) v = v * z + c(i);
  return v;
}

Eigen::VectorXcd polymul(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd r = Eigen::VectorXcd::Zero(a.size() + b.size() - 1);
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j) r(i + j) += a(i) * b(j);
  return r;
}

std::vector<cplx> poly_roots(const Eigen::VectorXcd& c) {
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<cplx> roots;
  if (d <= 0) return roots;
  const cplx lead = c(d);
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -c(i) / lead;
  const Eigen::VectorXcd ev = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(comp).eigenvalues();
  Eigen::VectorXcd deriv(d);
  for (int i = 1; i <= d; ++i) deriv(i - 1) = static_cast<double>(i) * c(i);
  for (int i = 0; i < d; ++i) {
    cplx r = ev(i);
    const cplx dp = polyval(deriv, r);
    if (std::abs(dp) > 0) r -= polyval(c, r) / dp;
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end(), lex_less);
  return roots;
}

std::vector<cplx> default_z_samples() {
  std::vector<cplx> z;
  for (double r : {0.7, 1.5})
    for (int k = 0; k < 6; ++k) z.push_back(std::polar(r, 0.3 + 2.0 * 3.141592653589793 * k / 6.0));
  return z;
}

ZeroCurvatureReport zero_curvature_residual(const LaurentPolyTriple& prev,
                                            const LaurentPolyTriple& cur, cplx alpha, cplx beta,
                                            const std::vector<cplx>& z_samples) {
  ZeroCurvatureReport rep;
  for (cplx z : z_samples) {
    const cplx F = polyval(cur.F, z), G = polyval(cur.G, z), H = polyval(cur.H, z);
    const cplx Fm = polyval(prev.F, z), Gm = polyval(prev.G, z), Hm = polyval(prev.H, z);
    const double r1 = std::abs(F - z * Fm - alpha * (G + Gm));
    const double r2 = std::abs(z * beta * (G + Gm) + Hm - z * H);
    const double r3 = std::abs(z * (Gm - G) + alpha * Hm + z * beta * F);
    const double r4 = std::abs(G - Gm - alpha * H - z * beta * Fm);
    rep.relations = std::max({rep.relations, r1, r2, r3, r4});
    Eigen::Matrix2cd U, V, Vp;
    U << z, alpha, z * beta, 1.0;
    V << Gm, -Fm, Hm, -Gm;
    Vp << G, -F, H, -G;
    const Eigen::Matrix2cd M = U * V - Vp * U;
    rep.matrix = std::max(rep.matrix, M.cwiseAbs().maxCoeff());
  }
  return rep;
}

LatticeInvariant lattice_invariant(const std::vector<LaurentPolyTriple>& triples) {
  LatticeInvariant inv;
  for (const auto& t : triples) {
    Eigen::VectorXcd r = polymul(t.G, t.G);
    const Eigen::VectorXcd fh = polymul(t.F, t.H);
    r.head(fh.size()) -= fh;
    inv.per_site.push_back(r);
  }
  if (inv.per_site.empty()) return inv;
  const int m = static_cast<int>(inv.per_site[0].size());
  inv.mean = Eigen::VectorXcd::Zero(m);
  for (const auto& r : inv.per_site) inv.mean += r;
  inv.mean /= static_cast<double>(inv.per_site.size());
  for (std::size_t i = 1; i < inv.per_site.size(); ++i)
    inv.drift = std::max(inv.drift, (inv.per_site[i] - inv.per_site[i - 1]).cwiseAbs().maxCoeff());
  inv.roots = poly_roots(inv.mean);
  return inv;
}

cplx r_coefficient(const HierarchyCoefficients& co, int k, int n) {
  const int top = co.p + 1;
  cplx s = 0.0;
  for (int i = std::max(0, k - top); i <= std::min(k, top); ++i) s += co.g(i, n) * co.g(k - i, n);
  for (int i = std::max(0, k - 1 - top); i <= std::min(k - 1, co.p); ++i)
    s -= co.f(i, n) * co.h(k - 1 - i, n);
  return s;
}

std::pair<cplx, cplx> sb_residual(const HierarchyCoefficients& co, const LatticeSeq& seq,
                                  cplx g_top, int n) {
  const int p = co.p;
  return {co.f(p, n) - 2.0 * g_top * seq.a(n), co.h(p, n - 1) + 2.0 * g_top * seq.b(n)};
}

std::pair<cplx, cplx> sb_residual_explicit(const LatticeSeq& s, int p, cplx c1, cplx g, int n) {
  if (p == 0)
    return {2.0 * (-s.a(n + 1) - g * s.a(n)), 2.0 * (s.b(n - 1) + g * s.b(n))};
  if (p == 1) {
    const cplx a = s.a(n), a1 = s.a(n + 1), a2 = s.a(n + 2), am = s.a(n - 1);
    const cplx b = s.b(n), b1 = s.b(n + 1), bm = s.b(n - 1), bmm = s.b(n - 2);
    return {2.0 * (a1 * a2 * b1 + a1 * a1 * b - a2 - c1 * a1 - g * a),
            2.0 * (-am * bmm * bm - a * bm * bm + bmm + c1 * bm + g * b)};
  }
  throw Error(ErrorCode::ConfigError, "explicit forms exist for p = 0 and p = 1 only");
}

// ------------------------------------------------------------- divisors --

namespace {

SurfacePoint lift(const CurveSpec& spec, cplx z, cplx y_target) {
  if (auto m = branch_index(spec, z)) return branch_point(spec, *m);
  const cplx s = std::sqrt(spec.R(z));
  const cplx y = std::abs(s - y_target) <= std::abs(s + y_target) ? s : -s;
  if (std::abs(y - y_target) > 1e-4 * std::max(1.0, std::abs(y)))
    throw Error(ErrorCode::SelfCheckFailed, "divisor point does not lie on the curve");
  if (std::abs(y) < 1e-6 * std::max(1.0, std::abs(y_target)) && std::abs(y_target) < 1e-6)
    throw Error(ErrorCode::SelfCheckFailed, "ambiguous sheet for a divisor point");
  return make_point_from_y(spec, z, y);
}

void check_collisions(const std::vector<cplx>& roots, const CurveSpec& spec) {
  const double tol = 1e-7 * std::max(1.0, spec.scale());
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < tol) {
        for (const cplx& e : spec.branch_points())
          if (std::abs(roots[i] - e) < tol)
            throw Error(ErrorCode::RootAtBranchPointCollision,
                        "double root at a branch point");
      }
}

}  // namespace

ExtractedDivisors extract_divisors(const LaurentPolyTriple& t, const CurveSpec& spec) {
  const int p = static_cast<int>(t.F.size()) - 1;
  const double scale = std::max(1e-300, t.G.cwiseAbs().maxCoeff());
  if (std::abs(t.F(p)) < 1e-14 * scale || std::abs(t.H(p + 1)) < 1e-14 * scale)
    throw Error(ErrorCode::DegenerateLeadingCoefficient, "alpha^+ or beta vanishes");
  ExtractedDivisors out;
  const std::vector<cplx> mu = poly_roots(t.F);
  const std::vector<cplx> nu = poly_roots(t.H.tail(p + 1).eval());
  check_collisions(mu, spec);
  check_collisions(nu, spec);
  for (cplx z : mu) out.mu.push_back(lift(spec, z, polyval(t.G, z)));
  for (cplx z : nu) out.nu.push_back(lift(spec, z, -polyval(t.G, z)));
  return out;
}

TraceResidual trace_check(const std::vector<cplx>& mu, const std::vector<cplx>& nu, cplx alpha,
                          cplx alpha_next, cplx beta, cplx beta_next, cplx g_top, int p) {
  cplx pm = 1.0, pn = 1.0;
  for (cplx m : mu) pm *= m;
  for (cplx v : nu) pn *= v;
  const double sign = (p + 1) % 2 == 0 ? 1.0 : -1.0;
  return {std::abs(alpha / alpha_next - sign * pm / g_top),
          std::abs(beta_next / beta - sign * pn / g_top)};
}

std::optional<SpecialWitness> is_special(const Divisor& d, const CurveSpec& spec) {
  const double tol = 1e-9 * std::max(1.0, spec.scale());
  const auto& pts = d.points;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i].at_infinity() || pts[j].at_infinity()) {
        if (pts[i].at_infinity() && pts[j].at_infinity() && pts[i].sheet != pts[j].sheet)
          return SpecialWitness{static_cast<int>(i), static_cast<int>(j)};
        continue;
      }
      if (std::abs(pts[i].z - pts[j].z) > tol) continue;
      const double ytol = 1e-9 * (1.0 + std::abs(pts[i].y));
      if (std::abs(pts[i].y + pts[j].y) <= ytol)
        return SpecialWitness{static_cast<int>(i), static_cast<int>(j)};
    }
  return std::nullopt;
}

}  // namespace sbtheta
