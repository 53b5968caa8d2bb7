#include "sbtheta/abelian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sbtheta/error.hpp"

namespace sbtheta {

namespace {

constexpr cplx kI(0.0, 1.0);

struct Prefix {
  Basis value;
  cplx y_end;
};

// Integral from Q0 = E_0 through the given waypoints (first leg in the u-coordinate).
Prefix integrate_waypoints(const CurveSpec& spec, const std::vector<cplx>& pts,
                           const QuadOptions& opts) {
  Prefix out{zero_basis(spec.genus()), 0.0};
  if (pts.empty()) return out;
  LegResult first = integrate_from_branch(spec, 0, pts[0], opts);
  out.value = first.value;
  out.y_end = first.y_end;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    LegResult leg = integrate_line(spec, pts[i - 1], pts[i], out.y_end, opts);
    out.value += leg.value;
    out.y_end = leg.y_end;
  }
  return out;
}

bool same_sign(cplx y, cplx target) { return std::abs(y - target) <= std::abs(y + target); }

}  // namespace

PathRegistry::PathRegistry(const CurveSpec& spec, const QuadOptions& opts)
    : spec_(spec), opts_(opts), obstacles_(path_obstacles(spec)) {
  const int p = spec.genus();
  clearance_ = 0.3 * spec.min_separation();
  const auto& e = spec.branch_points();
  const cplx dir = e[0] / std::abs(e[0]);
  double min_abs = std::abs(e[0]);
  for (const cplx& x : e) min_abs = std::min(min_abs, std::abs(x));

  // P0-: radial approach to 0 along the ray through E_0.
  {
    const cplx z1 = 0.5 * min_abs * dir;
    Prefix pre = integrate_waypoints(spec, route(e[0], z1, obstacles_, clearance_), opts);
    LegResult zero = integrate_to_zero(spec, z1, pre.y_end, opts);
    SpecialPath sp{{pre.value + zero.value, p0_minus(spec)}, pre.value, zero_basis(p), z1,
                   pre.y_end};
    if (!same_sign(zero.y_end, -spec.g_top())) {
      sp.record.value = involute_basis(sp.record.value, p);
      sp.prefix = involute_basis(sp.prefix, p);
      sp.y_start = -sp.y_start;
    }
    special_[static_cast<int>(Special::P0Minus)] = sp;
    SpecialPath plus = sp;
    plus.record = {involute_basis(sp.record.value, p), p0_plus(spec)};
    plus.prefix = involute_basis(sp.prefix, p);
    plus.y_start = -sp.y_start;
    special_[static_cast<int>(Special::P0Plus)] = plus;
  }
  // Pinf+: radial escape along the same ray beyond every branch point.
  {
    const cplx zR = (2.0 * spec.scale() + 2.0) * dir;
    Prefix pre = integrate_waypoints(spec, route(e[0], zR, obstacles_, clearance_), opts);
    LegResult inf = integrate_to_infinity(spec, zR, pre.y_end, opts);
    SpecialPath sp{{pre.value + inf.value, infinity_point(1)}, pre.value, zero_basis(p), zR,
                   pre.y_end};
    if (inf.y_end.real() < 0.0) {
      sp.record.value = involute_basis(sp.record.value, p);
      sp.prefix = involute_basis(sp.prefix, p);
      sp.y_start = -sp.y_start;
    }
    special_[static_cast<int>(Special::PinfPlus)] = sp;
    SpecialPath minus = sp;
    minus.record = {involute_basis(sp.record.value, p), infinity_point(-1)};
    minus.prefix = involute_basis(sp.prefix, p);
    minus.y_start = -sp.y_start;
    special_[static_cast<int>(Special::PinfMinus)] = minus;
  }
}

PathRecord PathRegistry::path_to(const SurfacePoint& pt) const {
  const int p = spec_.genus();
  const auto& e = spec_.branch_points();
  if (pt.at_infinity())
    throw Error(ErrorCode::PoleOnPath, "path_to expects a finite point");
  if (auto m = branch_index(spec_, pt.z)) {
    if (*m == 0) return {zero_basis(p), pt};
    std::vector<cplx> pts = route(e[0], e[*m], obstacles_, clearance_);
    if (pts.size() == 1) pts.insert(pts.begin(), 0.5 * (e[0] + e[*m]));
    const cplx last = pts[pts.size() - 2];
    pts.pop_back();
    Prefix pre = integrate_waypoints(spec_, pts, opts_);
    LegResult back = integrate_from_branch(spec_, *m, last, opts_);
    Basis tail = same_sign(back.y_end, pre.y_end) ? back.value : involute_basis(back.value, p);
    return {pre.value - tail, pt};
  }
  if (std::abs(pt.z) <= 1e-14 * std::max(1.0, spec_.scale()))
    throw Error(ErrorCode::PoleOnPath, "z = 0 is reached through the special paths only");
  Prefix pre = integrate_waypoints(spec_, route(e[0], pt.z, obstacles_, clearance_), opts_);
  const double tol = 1e-6 * std::max(1.0, std::abs(pt.y));
  if (std::abs(pre.y_end - pt.y) <= tol) return {pre.value, pt};
  if (std::abs(pre.y_end + pt.y) <= tol) return {involute_basis(pre.value, p), pt};
  throw Error(ErrorCode::SelfCheckFailed, "continued y does not match the target point");
}

std::optional<Special> match_special(const CurveSpec& spec, const SurfacePoint& pt) {
  if (pt.at_infinity()) return pt.sheet > 0 ? Special::PinfPlus : Special::PinfMinus;
  if (std::abs(pt.z) <= 1e-14 * std::max(1.0, spec.scale()))
    return same_sign(pt.y, spec.g_top()) ? Special::P0Plus : Special::P0Minus;
  return std::nullopt;
}

PathRecord PathRegistry::record(const SurfacePoint& pt) const {
  if (auto s = match_special(spec_, pt)) return special(*s).record;
  return path_to(pt);
}

void PathRegistry::add_cycle(Special s, const Basis& cycle_value) {
  SpecialPath& sp = special_[static_cast<int>(s)];
  sp.record.value += cycle_value;
  sp.correction += cycle_value;
}

Basis PathRegistry::truncated(Special s, double zeta) const {
  const SpecialPath& sp = special(s);
  const bool at_zero = s == Special::P0Plus || s == Special::P0Minus;
  const cplx dir = sp.radial_start / std::abs(sp.radial_start);
  const cplx z = at_zero ? zeta * dir : dir / zeta;
  LegResult leg = integrate_line(spec_, sp.radial_start, z, sp.y_start, opts_);
  return sp.prefix + sp.correction + leg.value;
}

CVec abel_point(const SurfacePoint& pt, const PeriodData& periods, const PathRegistry& registry) {
  return periods.abel(registry.record(pt).value);
}

CVec abel_divisor(const Divisor& d, const PeriodData& periods, const PathRegistry& registry) {
  CVec sum = CVec::Zero(periods.genus);
  for (const SurfacePoint& pt : d.points) sum += abel_point(pt, periods, registry);
  return sum;
}

// -------------------------------------------------------- third kind --

ThirdKindData third_kind(const CurveSpec& spec, const PeriodData& periods, int target) {
  const int p = spec.genus();
  if (p < 1) throw Error(ErrorCode::GenusTooSmall, "third-kind differentials need p >= 1");
  const cplx y0 = -spec.g_top();
  const double t = target > 0 ? 1.0 : -1.0;
  const Homology& h = periods.homology;
  CMat A(p, p);
  CVec rhs(p);
  for (int j = 0; j < p; ++j) {
    const Basis& a = h.a_values[j];
    for (int k = 0; k < p; ++k) A(j, k) = a(k);
    rhs(j) = t * (a(idx_log(p)) + y0 * a(idx_inv_z(p))) - a(p);
  }
  Eigen::FullPivLU<CMat> lu(A);
  if (!lu.isInvertible())
    throw Error(ErrorCode::SingularNormalizationSystem, "third-kind normalization is singular");
  ThirdKindData tk;
  tk.target = target > 0 ? 1 : -1;
  tk.poly = lu.solve(rhs);

  CMat companion = CMat::Zero(p, p);
  for (int i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < p; ++i) companion(i, p - 1) = -tk.poly(i);
  tk.lambda = Eigen::ComplexEigenSolver<CMat>(companion).eigenvalues();

  tk.form = zero_basis(p);
  tk.form(idx_log(p)) = 0.5;
  tk.form(idx_inv_z(p)) = 0.5 * y0;
  tk.form(p) = -0.5 * t;
  for (int k = 0; k < p; ++k) tk.form(k) = -0.5 * t * tk.poly(k);

  tk.b_periods.resize(p);
  for (int j = 0; j < p; ++j)
    tk.b_periods(j) = tk.integrate(h.b_values[j]) / (2.0 * std::numbers::pi * kI);
  return tk;
}

double ThirdKindData::log_coefficient(Special s) const {
  switch (s) {
    case Special::P0Minus: return 1.0;
    case Special::P0Plus: return 0.0;
    case Special::PinfPlus: return target > 0 ? -1.0 : 0.0;
    case Special::PinfMinus: return target < 0 ? -1.0 : 0.0;
  }
  return 0.0;
}

void omega0_constants(ThirdKindData& tk, const PathRegistry& registry) {
  const std::array<double, 3> ladder = {1e-2, 5e-3, 2.5e-3};
  tk.ladder_deviation = 0.0;
  for (int si = 0; si < 4; ++si) {
    const Special s = static_cast<Special>(si);
    const SpecialPath& sp = registry.special(s);
    tk.omega0[si] = tk.integrate(sp.record.value);

    const bool at_zero = s == Special::P0Plus || s == Special::P0Minus;
    const double r = std::abs(sp.radial_start);
    const double f = at_zero ? std::min(1.0, 0.5 * r / ladder[0])
                             : std::min(1.0, 0.5 / (ladder[0] * r));
    const cplx dir = sp.radial_start / r;
    std::array<cplx, 3> est;
    for (int k = 0; k < 3; ++k) {
      const double h = ladder[k] * f;
      const cplx zeta = at_zero ? h * dir : h * std::conj(dir);
      est[k] = tk.integrate(registry.truncated(s, h)) - tk.log_coefficient(s) * std::log(zeta);
    }
    const double d1 = std::abs(est[1] - est[0]), d2 = std::abs(est[2] - est[1]);
    if (d2 > 0.75 * d1 + 1e-10 * (1.0 + std::abs(est[2])))
      throw Error(ErrorCode::ExtrapolationDivergence,
                  "omega0 ladder is not converging linearly in zeta");
    const cplx r1a = 2.0 * est[1] - est[0];
    const cplx r1b = 2.0 * est[2] - est[1];
    tk.omega0_ladder[si] = (4.0 * r1b - r1a) / 3.0;
    tk.ladder_deviation = std::max(tk.ladder_deviation, std::abs(tk.omega0_ladder[si] - tk.omega0[si]));
  }
}

double omega0_identity_residual(const ThirdKindData& tk) {
  const auto& w = tk.omega0;
  const cplx combo = w[static_cast<int>(Special::P0Minus)] - w[static_cast<int>(Special::PinfPlus)] -
                     w[static_cast<int>(Special::PinfMinus)] + w[static_cast<int>(Special::P0Plus)];
  return std::abs(std::exp(combo) - 1.0);
}

cplx residue_at(const CurveSpec& spec, const ThirdKindData& tk, Special s,
                const QuadOptions& opts) {
  const int p = spec.genus();
  constexpr int kSides = 96;
  const bool at_zero = s == Special::P0Plus || s == Special::P0Minus;
  double min_abs = spec.scale();
  for (const cplx& e : spec.branch_points()) min_abs = std::min(min_abs, std::abs(e));
  const double radius = at_zero ? 0.25 * min_abs : 4.0 * spec.scale() + 4.0;
  std::vector<cplx> v;
  for (int k = 0; k <= kSides; ++k) {
    // Counterclockwise in the local coordinate: clockwise in z near infinity.
    const double ang = 2.0 * std::numbers::pi * k / kSides * (at_zero ? 1.0 : -1.0);
    v.push_back(radius * std::polar(1.0, ang));
  }
  v.back() = v.front();
  cplx y;
  if (at_zero) {
    const cplx y_pt = s == Special::P0Plus ? spec.g_top() : -spec.g_top();
    y = nearest_root(spec.R(v[0]), y_pt);
  } else {
    y = y_on_sheet(spec, v[0], s == Special::PinfPlus ? 1 : -1);
  }
  LoopIntegral li = integrate_loop(spec, {v, y}, opts);
  (void)p;
  return tk.integrate(li.value) / (2.0 * std::numbers::pi * kI);
}

AbelianSetup build_abelian(const CurveSpec& spec, const PeriodData& periods,
                           const QuadOptions& opts) {
  const int p = spec.genus();
  AbelianSetup setup{PathRegistry(spec, opts), third_kind(spec, periods, -1),
                     third_kind(spec, periods, 1), {}, {}, 0.0, 0.0};
  PathRegistry& reg = setup.registry;
  const Homology& h = periods.homology;
  const CVec a0m = periods.abel(reg.special(Special::P0Minus).record.value);

  Basis total = zero_basis(p);
  for (const ThirdKindData* tk : {&setup.minus, &setup.plus}) {
    const Special s = tk->target > 0 ? Special::PinfPlus : Special::PinfMinus;
    const CVec v = periods.abel(reg.special(s).record.value) - a0m + tk->b_periods;
    Eigen::VectorXd m, n;
    lattice_coordinates(v, periods.tau, m, n);
    setup.b_period_residual = std::max(setup.b_period_residual, lattice_distance(v, periods.tau));
    Basis corr = zero_basis(p);
    for (int j = 0; j < p; ++j) {
      corr -= std::round(m(j)) * h.a_values[j];
      corr -= std::round(n(j)) * h.b_values[j];
    }
    reg.add_cycle(s, corr);
    total += corr;
  }
  if (setup.b_period_residual > 1e-7)
    throw Error(ErrorCode::SelfCheckFailed,
                "b-period relation violated (lattice distance " +
                    std::to_string(setup.b_period_residual) + ")");
  reg.add_cycle(Special::P0Plus, total);

  omega0_constants(setup.minus, reg);
  omega0_constants(setup.plus, reg);
  setup.identity_residual =
      std::max(omega0_identity_residual(setup.minus), omega0_identity_residual(setup.plus));
  if (setup.identity_residual > 1e-8)
    throw Error(ErrorCode::SelfCheckFailed,
                "omega0 identity violated (" + std::to_string(setup.identity_residual) + ")");

  setup.delta = periods.abel(reg.special(Special::PinfPlus).record.value) - a0m;
  setup.shift_minus = periods.abel(reg.special(Special::PinfMinus).record.value) - a0m;
  return setup;
}

// -------------------------------------------------- Riemann constants --

std::vector<SurfacePoint> random_points(const CurveSpec& spec, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  cplx center = 0.0;
  for (const cplx& e : spec.branch_points()) center += e;
  center /= static_cast<double>(spec.branch_points().size());
  double spread = 0.0;
  for (const cplx& e : spec.branch_points()) spread = std::max(spread, std::abs(e - center));
  spread += 0.5;
  const double keep_out = 0.2 * spec.min_separation();
  std::vector<SurfacePoint> out;
  while (static_cast<int>(out.size()) < count) {
    const cplx z = center + spread * cplx(uni(rng), uni(rng));
    const int sheet = uni(rng) < 0.0 ? -1 : 1;
    bool ok = std::abs(z) > keep_out;
    for (const cplx& e : spec.branch_points()) ok = ok && std::abs(z - e) > keep_out;
    if (ok) out.push_back(make_point(spec, z, sheet));
  }
  return out;
}

double vanishing_ratio(const CVec& xi, const CurveSpec& spec, const PeriodData& periods,
                       const PathRegistry& registry, std::uint64_t seed) {
  const int p = spec.genus();
  const ThetaParams tp{periods.tau};
  Divisor d{random_points(spec, p, seed)};
  const CVec ad = abel_divisor(d, periods, registry);
  double at_points = 0.0;
  for (const SurfacePoint& q : d.points)
    at_points = std::max(at_points, std::abs(theta(xi - abel_point(q, periods, registry) + ad, tp)));
  std::vector<double> mags;
  for (const SurfacePoint& q : random_points(spec, 21, seed + 7919))
    mags.push_back(std::abs(theta(xi - abel_point(q, periods, registry) + ad, tp)));
  std::nth_element(mags.begin(), mags.begin() + 10, mags.end());
  const double median = mags[10];
  if (!(median > 1e-300)) return std::numeric_limits<double>::infinity();
  return at_points / median;
}

namespace {

// Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - t);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

// Sum over l != j of the integral over a_l of omega_l(P) * A_j(P).
CVec riemann_sum(const CurveSpec& spec, const PeriodData& periods, const PathRegistry& registry) {
  const int p = spec.genus();
  const Homology& h = periods.homology;
  std::vector<double> gx, gw;
  gauss_legendre(12, gx, gw);
  CVec result = CVec::Zero(p);
  auto omega_vec = [&](cplx z, cplx y) {
    CVec eta(p);
    cplx zk = 1.0;
    for (int m = 0; m < p; ++m) {
      eta(m) = zk / y;
      zk *= z;
    }
    return CVec(periods.c * eta);
  };
  for (int l = 0; l < p; ++l) {
    const int loop_index = 2 * p + l;
    const Loop& loop = h.loops[loop_index];
    const LoopIntegral& li = h.loop_integrals[loop_index];
    CVec a_run = periods.abel(
        registry.path_to(make_point_from_y(spec, loop.vertices.front(), loop.y_start)).value);
    CVec acc = CVec::Zero(p);
    for (const EdgeTrace& e : li.edges) {
      const cplx dz = e.b - e.a;
      const auto& br = e.y.breaks;
      for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        constexpr int kSub = 4;
        for (int sidx = 0; sidx < kSub; ++sidx) {
          const double t0 = br[k] + (br[k + 1] - br[k]) * sidx / kSub;
          const double t1 = br[k] + (br[k + 1] - br[k]) * (sidx + 1) / kSub;
          auto om = [&](double t) { return CVec(omega_vec(e.a + dz * t, e.y.root_at(t)) * dz); };
          for (int i = 0; i < 12; ++i) {
            const double ti = t0 + (t1 - t0) * gx[i];
            CVec partial = CVec::Zero(p);
            for (int q = 0; q < 12; ++q) partial += gw[q] * (ti - t0) * om(t0 + (ti - t0) * gx[q]);
            const CVec a_here = a_run + partial;
            const CVec w_here = om(ti);
            for (int j = 0; j < p; ++j)
              if (j != l) acc(j) += gw[i] * (t1 - t0) * w_here(l) * a_here(j);
          }
          CVec full = CVec::Zero(p);
          for (int q = 0; q < 12; ++q) full += gw[q] * (t1 - t0) * om(t0 + (t1 - t0) * gx[q]);
          a_run += full;
        }
      }
    }
    result += acc;
  }
  return result;
}

}  // namespace

RiemannConstants riemann_constants(const CurveSpec& spec, const PeriodData& periods,
                                   const PathRegistry& registry, std::uint64_t seed) {
  const int p = spec.genus();
  RiemannConstants rc;
  rc.xi.resize(p);
  const CVec sum = riemann_sum(spec, periods, registry);
  for (int j = 0; j < p; ++j) rc.xi(j) = 0.5 * (1.0 + periods.tau(j, j)) - sum(j);
  rc.vanishing_ratio = vanishing_ratio(rc.xi, spec, periods, registry, seed);
  if (rc.vanishing_ratio <= 1e-6) return rc;

  // Fall back to the half-period with the best vanishing behaviour.
  const int count = 1 << (2 * p);
  for (int code = 0; code < count; ++code) {
    Eigen::VectorXd m(p), n(p);
    for (int j = 0; j < p; ++j) {
      m(j) = (code >> j) & 1;
      n(j) = (code >> (p + j)) & 1;
    }
    const CVec cand = 0.5 * (m.cast<cplx>() + periods.tau * n.cast<cplx>());
    const double r = vanishing_ratio(cand, spec, periods, registry, seed);
    if (r < rc.vanishing_ratio) {
      rc.vanishing_ratio = r;
      rc.xi = cand;
      rc.from_formula = false;
    }
  }
  return rc;
}

}  // namespace sbtheta
