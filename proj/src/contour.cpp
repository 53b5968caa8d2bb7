#include "sbtheta/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "sbtheta/error.hpp"

namespace sbtheta {

Basis zero_basis(int p) { return Basis::Zero(basis_size(p)); }

Basis involute_basis(const Basis& v, int p) {
  Basis out = -v;
  out(idx_log(p)) = v(idx_log(p));
  return out;
}

cplx apply(const Differential& d, const Basis& v) { return (d.array() * v.array()).sum(); }

// ------------------------------------------------------ continuation --

cplx SqrtTrace::root_at(double t) const {
  auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
  std::size_t k = it == breaks.begin() ? 0 : static_cast<std::size_t>(it - breaks.begin()) - 1;
  if (k + 1 >= breaks.size()) k = breaks.size() - 2;
  return ref_root[k] * std::sqrt(q(t) / ref_q[k]);
}

SqrtTrace continue_sqrt(std::function<cplx(double)> q, cplx start_root) {
  SqrtTrace tr;
  tr.q = std::move(q);
  double t0 = 0.0;
  cplx q0 = tr.q(0.0);
  cplx s0 = start_root;
  tr.breaks.push_back(0.0);
  tr.ref_root.push_back(s0);
  tr.ref_q.push_back(q0);
  int guard = 0;
  while (t0 < 1.0) {
    double t1 = 1.0;
    for (;;) {
      bool ok = true;
      for (int i = 1; i <= 9 && ok; ++i) {
        const double s = t0 + (t1 - t0) * i / 9.0;
        ok = std::abs(tr.q(s) / q0 - 1.0) < 0.5;
      }
      if (ok) break;
      t1 = 0.5 * (t0 + t1);
      if (t1 - t0 < 1e-14)
        throw Error(ErrorCode::TooCloseToBranchPoint, "square-root continuation stalled");
    }
    const cplx q1 = tr.q(t1);
    const cplx s1 = s0 * std::sqrt(q1 / q0);
    tr.breaks.push_back(t1);
    tr.ref_root.push_back(s1);
    tr.ref_q.push_back(q1);
    t0 = t1;
    q0 = q1;
    s0 = s1;
    if (++guard > 100000)
      throw Error(ErrorCode::TooCloseToBranchPoint, "too many continuation panels");
  }
  return tr;
}

namespace {

double distance_to_segment(cplx o, cplx a, cplx b, double* param = nullptr) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  double t = len2 > 0 ? ((o - a) * std::conj(d)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (param) *param = t;
  return std::abs(a + t * d - o);
}

void check_segment(const CurveSpec& spec, cplx a, cplx b, bool allow_zero_end = false,
                   int skip_branch = -1) {
  const double eps = 1e-9 * std::max(1.0, spec.scale());
  const auto& bp = spec.branch_points();
  for (int m = 0; m < static_cast<int>(bp.size()); ++m)
    if (m != skip_branch && distance_to_segment(bp[m], a, b) < eps)
      throw Error(ErrorCode::TooCloseToBranchPoint, "path passes through a branch point");
  if (!allow_zero_end && distance_to_segment(0.0, a, b) < eps)
    throw Error(ErrorCode::PoleOnPath, "path passes through z = 0");
}

cplx pow_int(cplx z, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

// Fills out[0..p] with z^k / y, then 1/(z y) and 1/z, all scaled by dz.
void basis_integrand(cplx z, cplx y, cplx dz, int p, Basis& out) {
  const cplx inv_y = 1.0 / y;
  cplx zk = 1.0;
  for (int k = 0; k <= p; ++k) {
    out(k) = zk * inv_y * dz;
    zk *= z;
  }
  out(idx_inv_z(p)) = inv_y / z * dz;
  out(idx_log(p)) = dz / z;
}

// Sum of per-panel integrals of f(t, root) over a SqrtTrace, Neumaier-compensated.
Basis integrate_over_trace(const SqrtTrace& tr, int n,
                           const std::function<void(double, cplx, Basis&)>& f,
                           const QuadOptions& opts) {
  Basis sum = Basis::Zero(n), comp = Basis::Zero(n);
  for (std::size_t k = 0; k + 1 < tr.breaks.size(); ++k) {
    const double t0 = tr.breaks[k], t1 = tr.breaks[k + 1];
    const cplx s0 = tr.ref_root[k], q0 = tr.ref_q[k];
    auto g = [&](double s) {
      const double t = t0 + (t1 - t0) * s;
      const cplx root = s0 * std::sqrt(tr.q(t) / q0);
      Basis v(n);
      f(t, root, v);
      return Basis(v * (t1 - t0));
    };
    const Basis part = integrate_vector(g, n, opts);
    for (int i = 0; i < n; ++i) {
      const cplx s = sum(i) + part(i);
      const double ar = std::abs(sum(i).real()) >= std::abs(part(i).real())
                            ? (sum(i).real() - s.real()) + part(i).real()
                            : (part(i).real() - s.real()) + sum(i).real();
      const double ai = std::abs(sum(i).imag()) >= std::abs(part(i).imag())
                            ? (sum(i).imag() - s.imag()) + part(i).imag()
                            : (part(i).imag() - s.imag()) + sum(i).imag();
      comp(i) += cplx(ar, ai);
      sum(i) = s;
    }
  }
  return sum + comp;
}

}  // namespace

// -------------------------------------------------------- quadrature --

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<Basis(double)>& f, double a, double b, int n, Basis& kronrod,
          double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Basis fc = f(c);
  kronrod = fc * kWgk[7];
  Basis gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const Basis f1 = f(c - h * kXgk[j]);
    const Basis f2 = f(c + h * kXgk[j]);
    kronrod += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  kronrod *= h;
  gauss *= h;
  err = 0.0;
  for (int i = 0; i < n; ++i) err = std::max(err, std::abs(kronrod(i) - gauss(i)));
}

double max_abs(const Basis& v) {
  double m = 0.0;
  for (int i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v(i)));
  return m;
}

Basis adapt(const std::function<Basis(double)>& f, double a, double b, int n,
            const QuadOptions& opts, double scale, int depth) {
  Basis val;
  double err;
  gk15(f, a, b, n, val, err);
  const double tol = std::max(opts.abs_tol, opts.rel_tol * std::max(scale, max_abs(val)));
  if (err <= tol) return val;
  if (depth >= opts.max_depth)
    throw Error(ErrorCode::ToleranceNotReached,
                "adaptive quadrature did not converge (error " + std::to_string(err) + ")");
  const double m = 0.5 * (a + b);
  return adapt(f, a, m, n, opts, scale, depth + 1) + adapt(f, m, b, n, opts, scale, depth + 1);
}

}  // namespace

Basis integrate_vector(const std::function<Basis(double)>& f, int n, const QuadOptions& opts) {
  Basis coarse;
  double err;
  gk15(f, 0.0, 1.0, n, coarse, err);
  return adapt(f, 0.0, 1.0, n, opts, max_abs(coarse), 0);
}

// -------------------------------------------------------------- legs --

std::vector<cplx> continue_y(const CurveSpec& spec, const std::vector<cplx>& vertices,
                             cplx y_start) {
  std::vector<cplx> out{y_start};
  cplx y = y_start;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const cplx a = vertices[i], b = vertices[i + 1];
    check_segment(spec, a, b, true);
    SqrtTrace tr = continue_sqrt([spec, a, b](double t) { return spec.R(a + (b - a) * t); }, y);
    y = tr.end_root();
    out.push_back(y);
  }
  return out;
}

LegResult integrate_line(const CurveSpec& spec, cplx a, cplx b, cplx y_a,
                         const QuadOptions& opts) {
  check_segment(spec, a, b);
  const int p = spec.genus();
  const int n = basis_size(p);
  LegResult res;
  if (a == b) {
    res.value = zero_basis(p);
    res.y_end = y_a;
    return res;
  }
  SqrtTrace tr = continue_sqrt([spec, a, b](double t) { return spec.R(a + (b - a) * t); }, y_a);
  const cplx dz = b - a;
  res.value = integrate_over_trace(
      tr, n, [&](double t, cplx y, Basis& out) { basis_integrand(a + dz * t, y, dz, p, out); },
      opts);
  res.y_end = tr.end_root();
  res.edges.push_back({a, b, std::move(tr)});
  return res;
}

LegResult integrate_from_branch(const CurveSpec& spec, int m, cplx z1, const QuadOptions& opts) {
  const cplx e = spec.branch_points().at(m);
  check_segment(spec, e, z1, false, m);
  const int p = spec.genus();
  const int n = basis_size(p);
  const cplx u1 = std::sqrt(z1 - e);
  SqrtTrace tr = continue_sqrt(
      [spec, e, u1, m](double t) {
        const cplx u = u1 * t;
        return spec.R_without(e + u * u, m);
      },
      std::sqrt(spec.R_without(e, m)));
  LegResult res;
  res.value = integrate_over_trace(
      tr, n,
      [&](double t, cplx w, Basis& out) {
        const cplx u = u1 * t;
        const cplx z = e + u * u;
        const cplx du = u1;
        cplx zk = 1.0;
        for (int k = 0; k <= p; ++k) {
          out(k) = 2.0 * zk / w * du;
          zk *= z;
        }
        out(idx_inv_z(p)) = 2.0 / (z * w) * du;
        out(idx_log(p)) = 2.0 * u / z * du;
      },
      opts);
  res.y_end = u1 * tr.end_root();
  return res;
}

LegResult integrate_to_zero(const CurveSpec& spec, cplx z1, cplx y1, const QuadOptions& opts) {
  check_segment(spec, z1, 0.0, true);
  const int p = spec.genus();
  const int n = basis_size(p);
  SqrtTrace tr = continue_sqrt([spec, z1](double t) { return spec.R(z1 * (1.0 - t)); }, y1);
  const cplx y0 = tr.end_root();
  const cplx dz = -z1;
  LegResult res;
  res.value = integrate_over_trace(
      tr, n,
      [&](double t, cplx y, Basis& out) {
        const cplx z = z1 * (1.0 - t);
        const cplx inv_y = 1.0 / y;
        cplx zk = 1.0;
        for (int k = 0; k <= p; ++k) {
          out(k) = zk * inv_y * dz;
          zk *= z;
        }
        out(idx_inv_z(p)) = (inv_y - 1.0 / y0) / z * dz;
        out(idx_log(p)) = 0.0;
      },
      opts);
  const cplx lz = std::log(z1);
  res.value(idx_inv_z(p)) -= lz / y0;
  res.value(idx_log(p)) -= lz;
  res.y_end = y0;
  return res;
}

LegResult integrate_to_infinity(const CurveSpec& spec, cplx zR, cplx yR, const QuadOptions& opts) {
  const int p = spec.genus();
  const int n = basis_size(p);
  const cplx zeta1 = 1.0 / zR;
  const cplx v1 = yR * pow_int(zeta1, p + 1);
  SqrtTrace tr =
      continue_sqrt([spec, zeta1](double t) { return spec.R_at_infinity(zeta1 * (1.0 - t)); }, v1);
  const cplx v0 = tr.end_root();
  const cplx dzeta = -zeta1;
  LegResult res;
  res.value = integrate_over_trace(
      tr, n,
      [&](double t, cplx v, Basis& out) {
        const cplx zeta = zeta1 * (1.0 - t);
        const cplx inv_v = 1.0 / v;
        for (int k = 0; k < p; ++k) out(k) = -pow_int(zeta, p - 1 - k) * inv_v * dzeta;
        out(p) = (1.0 / v0 - inv_v) / zeta * dzeta;
        out(idx_inv_z(p)) = -pow_int(zeta, p) * inv_v * dzeta;
        out(idx_log(p)) = 0.0;
      },
      opts);
  const cplx lz = std::log(zeta1);
  res.value(p) += lz / v0;
  res.value(idx_log(p)) += lz;
  res.y_end = -v0;
  return res;
}

// ----------------------------------------------------------- routing --

std::vector<cplx> path_obstacles(const CurveSpec& spec) {
  std::vector<cplx> obs = spec.branch_points();
  obs.push_back(0.0);
  return obs;
}

namespace {

void route_rec(cplx a, cplx b, const std::vector<cplx>& obstacles, double clearance, int depth,
               std::vector<cplx>& out) {
  const double tiny = 1e-12 * std::max(1.0, std::abs(a) + std::abs(b));
  int best = -1;
  double best_t = 2.0;
  for (int i = 0; i < static_cast<int>(obstacles.size()); ++i) {
    const cplx o = obstacles[i];
    if (std::abs(o - a) <= tiny || std::abs(o - b) <= tiny) continue;
    double t;
    const double d = distance_to_segment(o, a, b, &t);
    if (d < clearance && t > 0.0 && t < 1.0 && t < best_t) {
      best = i;
      best_t = t;
    }
  }
  if (best < 0 || depth > 12) {
    out.push_back(b);
    return;
  }
  const cplx o = obstacles[best];
  const cplx dir = (b - a) / std::abs(b - a);
  const cplx normal = cplx(0.0, 1.0) * dir;
  const double side = (std::conj(dir) * (o - a)).imag();
  const cplx w = o - (side > 0 ? 1.0 : -1.0) * 1.5 * clearance * normal;
  route_rec(a, w, obstacles, clearance, depth + 1, out);
  route_rec(w, b, obstacles, clearance, depth + 1, out);
}

}  // namespace

std::vector<cplx> route(cplx a, cplx b, const std::vector<cplx>& obstacles, double clearance) {
  std::vector<cplx> out;
  route_rec(a, b, obstacles, clearance, 0, out);
  return out;
}

}  // namespace sbtheta
