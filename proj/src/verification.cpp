#include "sbtheta/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "sbtheta/error.hpp"

namespace sbtheta {

void Residual::add(double r) {
  mean = (mean * samples + r) / (samples + 1);
  ++samples;
  max = std::max(max, std::isfinite(r) ? r : std::numeric_limits<double>::infinity());
}

bool VerificationReport::all_passed() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const Residual& r) { return r.passed(); });
}

const Residual* VerificationReport::find(const std::string& name) const {
  for (const auto& r : residuals)
    if (r.name == name) return &r;
  return nullptr;
}

namespace {

Residual make(const std::string& name, double tol) {
  Residual r;
  r.name = name;
  r.tol = tol;
  return r;
}

Residual skipped(const std::string& name, double tol) {
  Residual r = make(name, tol);
  r.skipped = true;
  return r;
}

double coef_scale(const LaurentPolyTriple& t) {
  return std::max({1.0, t.F.cwiseAbs().maxCoeff(), t.G.cwiseAbs().maxCoeff(), t.H.cwiseAbs().maxCoeff()});
}

/// prod (z - E_m) in ascending coefficients.
Eigen::VectorXcd curve_polynomial(const CurveSpec& spec) {
  Eigen::VectorXcd r(1);
  r(0) = 1.0;
  for (const cplx& e : spec.branch_points()) {
    Eigen::VectorXcd lin(2);
    lin << -e, 1.0;
    r = polymul(r, lin);
  }
  return r;
}

Eigen::VectorXcd solve_ls(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= 0.0 || s(0) / s(s.size() - 1) > 1e12)
    throw Error(ErrorCode::IllConditionedInterpolation, "reconstruction system is ill-conditioned");
  return svd.solve(b);
}

std::vector<PointData> point_set(const SolutionState& st, int count, std::uint64_t seed) {
  std::vector<PointData> out;
  for (const auto& p : random_points(st.spec, count, seed)) out.push_back(point_data(st, p));
  return out;
}

}  // namespace

Residual riccati_residual(const SolutionState& st, const std::vector<PointData>& pts, int n_min,
                          int n_max, double tol) {
  Residual r = make("riccati", tol);
  for (const auto& pd : pts) {
    const cplx z = pd.point.z;
    cplx fm = phi(st, pd, n_min - 1);
    for (int n = n_min; n <= n_max; ++n) {
      const cplx f = phi(st, pd, n), a = alpha_n(st, n), b = beta_n(st, n);
      const double scale = std::abs(a * f * fm) + std::abs(fm) + std::abs(z * f) + std::abs(z * b);
      r.add(std::abs(a * f * fm - fm + z * f - z * b) / scale);
      fm = f;
    }
  }
  return r;
}

std::vector<cplx> reconstruction_samples(const CurveSpec& spec, int count) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const cplx& e : spec.branch_points()) {
    lo = std::min(lo, std::abs(e));
    hi = std::max(hi, std::abs(e));
  }
  const double gm = std::sqrt(lo * hi);
  double best_r = gm, best_d = -1.0;
  for (double f = 0.5; f <= 1.6001; f += 0.05) {
    const double r = gm * f;
    double d = r;
    for (const cplx& e : spec.branch_points()) d = std::min(d, std::abs(std::abs(e) - r));
    if (d > best_d) {
      best_d = d;
      best_r = r;
    }
  }
  std::vector<cplx> z;
  for (int k = 0; k < count; ++k)
    z.push_back(std::polar(best_r, 0.1 + 2.0 * std::numbers::pi * k / count));
  return z;
}

SheetSamples sheet_samples(const SolutionState& st, const std::vector<cplx>& z) {
  SheetSamples s;
  s.z = z;
  for (cplx zi : z) {
    const SurfacePoint p = make_point(st.spec, zi, 1);
    s.upper.push_back(point_data(st, p));
    s.lower.push_back(point_data(st, involute(p)));
  }
  return s;
}

LaurentPolyTriple reconstruct_FGH(const SolutionState& st, int n, const SheetSamples& smp,
                                  cplx alpha_next) {
  const int p = st.genus();
  const int N = static_cast<int>(smp.z.size());
  if (N < 2 * p + 4)
    throw Error(ErrorCode::IllConditionedInterpolation, "need at least 2p+4 samples");
  const double r = std::abs(smp.z[0]);
  const cplx fp = -2.0 * alpha_next;
  std::vector<cplx> s(N), q(N);
  for (int i = 0; i < N; ++i) {
    const cplx a = phi(st, smp.upper[i], n), b = phi(st, smp.lower[i], n);
    s[i] = a + b;
    q[i] = a * b;
  }
  // Unknowns in the scaled variable w = z / r: G~_0..G~_p, F~_0..F~_{p-1}.
  Eigen::MatrixXcd A(N, 2 * p + 1);
  Eigen::VectorXcd rhs(N);
  for (int i = 0; i < N; ++i) {
    const cplx w = smp.z[i] / r;
    const cplx zp = std::pow(smp.z[i], p);
    const double weight = 1.0 / (std::abs(zp * smp.z[i]) + 0.5 * std::abs(s[i] * fp * zp) + 1.0);
    cplx wl = 1.0;
    for (int l = 0; l <= p; ++l, wl *= w) {
      A(i, l) = weight * wl;
      if (l < p) A(i, p + 1 + l) = -weight * 0.5 * s[i] * wl;
    }
    rhs(i) = weight * (0.5 * s[i] * fp * zp - zp * smp.z[i]);
  }
  const Eigen::VectorXcd x = solve_ls(A, rhs);
  LaurentPolyTriple t;
  t.F.resize(p + 1);
  t.G.resize(p + 2);
  t.H.resize(p + 2);
  double rl = 1.0;
  for (int l = 0; l <= p; ++l, rl *= r) {
    t.G(l) = x(l) / rl;
    if (l < p) t.F(l) = x(p + 1 + l) / rl;
  }
  t.F(p) = fp;
  t.G(p + 1) = 1.0;

  Eigen::MatrixXcd B(N, p + 2);
  Eigen::VectorXcd rh(N);
  for (int i = 0; i < N; ++i) {
    const cplx w = smp.z[i] / r;
    const cplx v = q[i] * polyval(t.F, smp.z[i]);
    const double weight = 1.0 / (1.0 + std::abs(v));
    cplx wl = 1.0;
    for (int l = 0; l <= p + 1; ++l, wl *= w) B(i, l) = weight * wl;
    rh(i) = weight * v;
  }
  const Eigen::VectorXcd h = solve_ls(B, rh);
  rl = 1.0;
  for (int l = 0; l <= p + 1; ++l, rl *= r) t.H(l) = h(l) / rl;
  return t;
}

void check_transfer(const SolutionState& st, const LatticeSeq& seq,
                    const std::map<int, LaurentPolyTriple>& triples,
                    const std::vector<PointData>& pts, int n_min, int n_max, Residual& transfer,
                    Residual& eigen) {
  for (const auto& pd : pts) {
    const cplx z = pd.point.z, y = pd.point.y;
    auto [p1m, p2m] = baker_akhiezer(st, pd, n_min - 1);
    for (int n = n_min; n <= n_max; ++n) {
      const auto [p1, p2] = baker_akhiezer(st, pd, n);
      const cplx a = seq.a(n), b = seq.b(n);
      const cplx u1 = z * p1m + a * p2m, u2 = z * b * p1m + p2m;
      const double psi = std::max(std::hypot(std::abs(p1), std::abs(p2)),
                                  std::hypot(std::abs(u1), std::abs(u2)));
      transfer.add(std::hypot(std::abs(p1 - u1), std::abs(p2 - u2)) / psi);
      const auto it = triples.find(n - 1);
      if (it != triples.end()) {
        const cplx F = polyval(it->second.F, z), G = polyval(it->second.G, z),
                   H = polyval(it->second.H, z);
        const cplx e1 = (G + y) * p1m - F * p2m, e2 = H * p1m + (y - G) * p2m;
        const double scale = (std::abs(F) + std::abs(G) + std::abs(H) + std::abs(y)) *
                             std::hypot(std::abs(p1m), std::abs(p2m));
        eigen.add(std::hypot(std::abs(e1), std::abs(e2)) / scale);
      }
      p1m = p1;
      p2m = p2;
    }
  }
}

Residual ba_product_residual(const SolutionState& st, const LatticeSeq& seq,
                             const std::vector<PointData>& pts, int max_offset, double tol) {
  Residual r = make("ba_product", tol);
  const int n0 = st.n0;
  for (const auto& pd : pts) {
    const cplx z = pd.point.z;
    cplx prod = 1.0;
    for (int n = n0 + 1; n <= n0 + max_offset; ++n) {
      prod *= z + seq.a(n) * phi(st, pd, n - 1);
      const cplx th = baker_akhiezer(st, pd, n).first;
      r.add(std::abs(th - prod) / std::abs(prod));
    }
    prod = 1.0;
    for (int n = n0 - 1; n >= n0 - max_offset; --n) {
      prod /= z + seq.a(n + 1) * phi(st, pd, n);
      const cplx th = baker_akhiezer(st, pd, n).first;
      r.add(std::abs(th - prod) / std::abs(prod));
    }
  }
  return r;
}

double growth_factor(const SolutionState& st) {
  const Eigen::VectorXd yd = st.delta.imag(), ys = st.shift_minus.imag();
  return std::exp(-st.growth_log.real() - 2.0 * std::numbers::pi * yd.dot(st.im_tau_inv * ys));
}

bool unit_circle_conjugate(const CurveSpec& spec) {
  const auto& e = spec.branch_points();
  for (const cplx& a : e) {
    if (std::abs(std::abs(a) - 1.0) > 1e-12) return false;
    const bool has_conj = std::any_of(e.begin(), e.end(), [&](const cplx& b) {
      return std::abs(b - std::conj(a)) <= 1e-12;
    });
    if (!has_conj) return false;
  }
  return true;
}

namespace {

// Integral of the basis from P to P* along a loop around the branch point nearest to z(P),
// independent of the registry paths.
Basis involution_loop(const CurveSpec& spec, const SurfacePoint& pt) {
  const std::vector<cplx> obstacles = path_obstacles(spec);
  const auto& e = spec.branch_points();
  int k = 0;
  for (int m = 1; m < static_cast<int>(e.size()); ++m)
    if (std::abs(e[m] - pt.z) < std::abs(e[k] - pt.z)) k = m;
  std::vector<cplx> others;
  double gap = std::abs(e[k] - pt.z);
  for (const cplx& o : obstacles)
    if (std::abs(o - e[k]) > 0.0) {
      others.push_back(o);
      gap = std::min(gap, std::abs(o - e[k]));
    }
  const double r = 0.3 * gap;
  const cplx u = (pt.z - e[k]) / std::abs(pt.z - e[k]);
  std::vector<cplx> out = {pt.z};
  for (const cplx& w : route(pt.z, e[k] + r * u, others, r)) out.push_back(w);
  std::vector<cplx> verts = out;
  for (int j = 1; j <= 8; ++j) verts.push_back(e[k] + r * u * std::polar(1.0, 2.0 * std::numbers::pi * j / 8));
  for (auto it = out.rbegin() + 1; it != out.rend(); ++it) verts.push_back(*it);
  Basis total = zero_basis(spec.genus());
  cplx y = pt.y;
  for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
    const LegResult leg = integrate_line(spec, verts[i], verts[i + 1], y);
    total += leg.value;
    y = leg.y_end;
  }
  if (std::abs(y + pt.y) > 1e-8 * std::max(1.0, std::abs(pt.y)))
    throw Error(ErrorCode::SelfCheckFailed, "involution loop did not reach the other sheet");
  return total;
}

}  // namespace

double abel_invariant_drift(const SolutionState& st, int count, std::uint64_t seed) {
  const auto& reg = st.abelian.registry;
  const CVec inf = abel_point(infinity_point(1), st.periods, reg) +
                   abel_point(infinity_point(-1), st.periods, reg);
  double worst = 0.0;
  for (const auto& p : random_points(st.spec, count, seed)) {
    // A(P*) = A(P) + integral over a path from P to P*.
    const CVec ap = abel_point(p, st.periods, reg);
    const CVec v = 2.0 * ap + st.periods.abel(involution_loop(st.spec, p)) - inf;
    worst = std::max(worst, lattice_distance(v, st.periods.tau));
  }
  return worst;
}

VerificationReport full_report(const SolutionState& st, const VerifyConfig& cfg) {
  const Tolerances& tol = cfg.tol;
  const int p = st.genus();
  const cplx g = st.spec.g_top();
  VerificationReport rep;

  const int lo = std::min(cfg.n_min - 1, st.n0 - cfg.ba_offset - 1) - (p + 2);
  const int hi = std::max(cfg.n_max, st.n0 + cfg.ba_offset) + 2 + (p + 2);
  const LatticeSolution sol = solve_window(st, lo, hi);
  const LatticeSeq seq = sol.seq();

  Residual product = make("product", tol.product);
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) product.add(sol.product_residual[n - lo]);

  const auto ric_pts = point_set(st, cfg.riccati_points, cfg.seed);
  rep.residuals.push_back(riccati_residual(st, ric_pts, cfg.n_min, cfg.n_max, tol.riccati));

  const SheetSamples smp = sheet_samples(st, reconstruction_samples(st.spec, cfg.samples));
  std::map<int, LaurentPolyTriple> triples;
  for (int n = cfg.n_min - 1; n <= cfg.n_max; ++n)
    triples[n] = reconstruct_FGH(st, n, smp, seq.a(n + 1));

  const Eigen::VectorXcd R = curve_polynomial(st.spec);
  const double r_scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  Residual rmatch = make("R_match", tol.r_match), hconst = make("H_constant", tol.h_constant);
  Residual zc = make("zero_curvature", tol.zero_curvature), sb = make("sb", tol.sb);
  Residual trace = make("trace", tol.trace), flow = make("divisor_flow", tol.divisor_flow);
  Residual roundtrip = make("mu_roundtrip", 1e-7);
  std::vector<LaurentPolyTriple> window;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const LaurentPolyTriple& t = triples[n];
    window.push_back(t);
    Eigen::VectorXcd r = polymul(t.G, t.G);
    const Eigen::VectorXcd fh = polymul(t.F, t.H);
    r.head(fh.size()) -= fh;
    rmatch.add((r - R).cwiseAbs().maxCoeff() / r_scale);
    hconst.add(std::abs(t.H(0)) / coef_scale(t));
    const auto z = zero_curvature_residual(triples[n - 1], t, seq.a(n), seq.b(n), default_z_samples());
    zc.add(std::max(z.relations, z.matrix) / std::max(coef_scale(t), coef_scale(triples[n - 1])));
    const double cs = coef_scale(t);
    sb.add(std::max({std::abs(t.F(0) - 2.0 * g * seq.a(n)), std::abs(t.H(1) + 2.0 * g * seq.b(n + 1)),
                     std::abs(t.G(0) - g)}) / cs);
    const ExtractedDivisors d = extract_divisors(t, st.spec);
    std::vector<cplx> mu, nu;
    for (const auto& q : d.mu) mu.push_back(q.z);
    for (const auto& q : d.nu) nu.push_back(q.z);
    const TraceResidual tr = trace_check(mu, nu, seq.a(n), seq.a(n + 1), seq.b(n), seq.b(n + 1), g, p);
    trace.add(std::max(tr.alpha / std::abs(seq.a(n) / seq.a(n + 1)),
                       tr.beta / std::abs(seq.b(n + 1) / seq.b(n))));
    Divisor dm;
    dm.points = d.mu;
    const CVec expect = st.rho_mu + static_cast<double>(n - st.n0) * st.delta;
    flow.add(lattice_distance(abel_divisor(dm, st.periods, st.abelian.registry) - expect, st.periods.tau));
    if (n == st.n0) {
      std::vector<cplx> given;
      for (const auto& q : st.mu0.points) given.push_back(q.z);
      std::sort(given.begin(), given.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
      });
      double worst = 0.0;
      for (int j = 0; j < p; ++j) worst = std::max(worst, std::abs(given[j] - mu[j]));
      roundtrip.add(worst);
    }
  }
  // Independent of the reconstruction: the recursion with constants taken from the curve.
  Residual sbrec = make("sb_recursion", tol.sb);
  const HierarchyCoefficients co = run_recursion(seq, summation_constants(st.spec, p + 1), p, st.n0);
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const auto r = sb_residual(co, seq, g, n);
    const double sa = std::max(std::abs(seq.a(n)), std::abs(seq.a(n + 1)));
    const double sbeta = std::max(std::abs(seq.b(n)), std::abs(seq.b(n - 1)));
    sbrec.add(std::max({std::abs(r.first) / (sa * std::abs(g)), std::abs(r.second) / (sbeta * std::abs(g)),
                        std::abs(co.g(p + 1, n) - g) / std::abs(g)}));
  }
  rep.residuals.push_back(sbrec);
  const LatticeInvariant inv = lattice_invariant(window);
  Residual drift = make("R_drift", tol.r_drift);
  drift.add(inv.drift / r_scale);
  for (auto* r : {&rmatch, &drift, &hconst, &zc, &sb, &trace, &product, &flow, &roundtrip})
    rep.residuals.push_back(*r);

  const auto tr_pts = point_set(st, cfg.transfer_points, cfg.seed + 1);
  Residual transfer = make("transfer", tol.transfer), eigen = make("eigenrelation", tol.eigenrelation);
  check_transfer(st, seq, triples, tr_pts, cfg.n_min, cfg.n_max, transfer, eigen);
  rep.residuals.push_back(transfer);
  rep.residuals.push_back(eigen);
  rep.residuals.push_back(ba_product_residual(st, seq, tr_pts, cfg.ba_offset, tol.ba_product));

  if (unit_circle_conjugate(st.spec)) {
    Residual growth = make("growth_factor", tol.growth);
    growth.add(std::abs(growth_factor(st) - 1.0));
    Residual ratio = make("alpha_modulus_ratio", tol.modulus_ratio);
    double amax = 0.0, amin = std::numeric_limits<double>::infinity();
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
      amax = std::max(amax, std::abs(seq.a(n)));
      amin = std::min(amin, std::abs(seq.a(n)));
    }
    ratio.add(amax / amin - 1.0);
    rep.residuals.push_back(growth);
    rep.residuals.push_back(ratio);
  } else {
    rep.residuals.push_back(skipped("growth_factor", tol.growth));
    rep.residuals.push_back(skipped("alpha_modulus_ratio", tol.modulus_ratio));
  }
  return rep;
}

VerificationReport genus0_report(cplx E0, cplx E1, int g_sign, const LatticeSolution& sol,
                                 const Tolerances& tol) {
  const Genus0Constants k = genus0_constants(E0, E1, g_sign);
  const std::vector<cplx> e = {E0, E1};
  const CurveSpec spec = validate_spec(e, g_sign);
  const LatticeSeq seq = sol.seq();
  VerificationReport rep;

  Residual product = make("product", tol.product);
  for (double r : sol.product_residual) product.add(r);

  Residual sb = make("sb", 1e-12), sbx = make("sb_explicit", 1e-12);
  Residual rmatch = make("R_match", tol.r_match), zc = make("zero_curvature", tol.zero_curvature);
  Residual trace = make("trace", tol.trace), ric = make("riccati", tol.riccati);
  Residual transfer = make("transfer", tol.transfer), eigen = make("eigenrelation", tol.eigenrelation);
  const Eigen::VectorXcd R = curve_polynomial(spec);
  const int n_ref = std::clamp(sol.n0, sol.n_min + 2, sol.n_max - 2);
  const HierarchyCoefficients co = run_recursion(seq, {k.c1}, 0, n_ref);
  std::map<int, LaurentPolyTriple> triples;
  for (int n = sol.n_min + 1; n <= sol.n_max - 1; ++n) triples[n] = assemble(co, n);
  std::vector<LaurentPolyTriple> window;
  for (int n = sol.n_min + 1; n <= sol.n_max - 1; ++n) {
    const double sa = std::max(std::abs(seq.a(n)), std::abs(seq.a(n + 1)));
    const double sbeta = std::max(std::abs(seq.b(n)), std::abs(seq.b(n - 1)));
    const auto r = sb_residual(co, seq, k.g1, n);
    sb.add(std::max(std::abs(r.first) / sa, std::abs(r.second) / sbeta));
    const auto x = sb_residual_explicit(seq, 0, 0.0, k.g1, n);
    sbx.add(std::max(std::abs(x.first) / sa, std::abs(x.second) / sbeta));
    const LaurentPolyTriple& t = triples[n];
    window.push_back(t);
    Eigen::VectorXcd rr = polymul(t.G, t.G);
    const Eigen::VectorXcd fh = polymul(t.F, t.H);
    rr.head(fh.size()) -= fh;
    rmatch.add((rr - R).cwiseAbs().maxCoeff() / coef_scale(t));
    if (triples.count(n - 1)) {
      const auto z = zero_curvature_residual(triples[n - 1], t, seq.a(n), seq.b(n), default_z_samples());
      zc.add(std::max(z.relations, z.matrix) / std::max(coef_scale(t), coef_scale(triples[n - 1])));
    }
    if (n + 1 <= sol.n_max) {
      const TraceResidual tr = trace_check({}, {}, seq.a(n), seq.a(n + 1), seq.b(n), seq.b(n + 1), k.g1, 0);
      trace.add(std::max(tr.alpha, tr.beta));
    }
  }
  Residual drift = make("R_drift", tol.r_drift);
  drift.add(lattice_invariant(window).drift / std::max(1.0, R.cwiseAbs().maxCoeff()));

  // phi = (y + G) / F with F = -2 alpha^+ and G = z + g1; Psi from the finite products.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double scale = spec.scale();
  const int lo = sol.n_min + 1, hi = sol.n_max - 2;
  const int n0 = std::clamp(sol.n0, lo, hi);
  for (int i = 0; i < 5; ++i) {
    const cplx z = scale * cplx(u(rng), u(rng)) + cplx(0.0, 0.1 * scale);
    const SurfacePoint P = make_point(spec, z, i % 2 == 0 ? 1 : -1);
    auto ph = [&](int n) { return (P.y + polyval(triples[n].G, z)) / polyval(triples[n].F, z); };
    for (int n = lo + 1; n <= hi; ++n) {
      const cplx a = seq.a(n), b = seq.b(n), f = ph(n), fm = ph(n - 1);
      const double s = std::abs(a * f * fm) + std::abs(fm) + std::abs(z * f) + std::abs(z * b);
      ric.add(std::abs(a * f * fm - fm + z * f - z * b) / s);
    }
    cplx psi1 = 1.0;
    cplx p1m = 1.0 / (z + seq.a(n0) * ph(n0 - 1)), p2m = ph(n0 - 1) * p1m;
    for (int n = n0; n <= hi; ++n) {
      if (n > n0) psi1 *= z + seq.a(n) * ph(n - 1);
      const cplx psi2 = ph(n) * psi1;
      const cplx u1 = z * p1m + seq.a(n) * p2m, u2 = z * seq.b(n) * p1m + p2m;
      transfer.add(std::hypot(std::abs(psi1 - u1), std::abs(psi2 - u2)) /
                   std::hypot(std::abs(psi1), std::abs(psi2)));
      const LaurentPolyTriple& t = triples[n - 1];
      const cplx F = polyval(t.F, z), G = polyval(t.G, z), H = polyval(t.H, z);
      const cplx e1 = (G + P.y) * p1m - F * p2m, e2 = H * p1m + (P.y - G) * p2m;
      eigen.add(std::hypot(std::abs(e1), std::abs(e2)) /
                ((std::abs(F) + std::abs(G) + std::abs(H) + std::abs(P.y)) *
                 std::hypot(std::abs(p1m), std::abs(p2m))));
      p1m = psi1;
      p2m = psi2;
    }
  }
  for (auto* r : {&sb, &sbx, &product, &rmatch, &drift, &zc, &trace, &ric, &transfer, &eigen})
    rep.residuals.push_back(*r);
  return rep;
}

}  // namespace sbtheta
