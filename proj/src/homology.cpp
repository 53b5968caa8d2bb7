#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sbtheta/contour.hpp"
#include "sbtheta/error.hpp"

namespace sbtheta {

namespace {

double cross(cplx a, cplx b) { return (std::conj(a) * b).imag(); }

double distance_to_segment(cplx o, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  double t = len2 > 0 ? ((o - a) * std::conj(d)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(a + t * d - o);
}

bool segments_meet(cplx a, cplx b, cplx c, cplx d, double tol) {
  if (distance_to_segment(a, c, d) <= tol || distance_to_segment(b, c, d) <= tol ||
      distance_to_segment(c, a, b) <= tol || distance_to_segment(d, a, b) <= tol)
    return true;
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// Counterclockwise stadium around [A, B] at distance `margin`.
Loop stadium(const CurveSpec& spec, cplx A, cplx B, double margin) {
  const cplx d = (B - A) / std::abs(B - A);
  const cplx n = cplx(0.0, 1.0) * d;
  constexpr int kArc = 8;
  std::vector<cplx> v;
  v.push_back(A - margin * n);
  for (int i = 0; i <= kArc; ++i) {
    const double phi = -std::numbers::pi / 2 + std::numbers::pi * i / kArc;
    v.push_back(B + margin * d * std::polar(1.0, phi));
  }
  for (int i = 0; i <= kArc; ++i) {
    const double phi = std::numbers::pi / 2 + std::numbers::pi * i / kArc;
    v.push_back(A + margin * d * std::polar(1.0, phi));
  }
  v.back() = v.front();
  return {v, y_on_sheet(spec, v.front(), 1)};
}

// Shrinks `margin` so that the stadium around [A, B] keeps every other obstacle outside.
double safe_margin(const CurveSpec& spec, cplx A, cplx B, double margin) {
  std::vector<cplx> obs = path_obstacles(spec);
  for (const cplx& o : obs) {
    if (o == A || o == B) continue;
    const double dist = distance_to_segment(o, A, B);
    if (dist < 1e-9 * std::max(1.0, spec.scale()))
      throw Error(o == cplx(0.0) ? ErrorCode::PoleOnPath : ErrorCode::TooCloseToBranchPoint,
                  "an obstacle lies on the segment to be encircled");
    margin = std::min(margin, 0.4 * dist);
  }
  return margin;
}

}  // namespace

std::vector<Cut> build_cuts(const CurveSpec& spec, const std::vector<Cut>* pairing) {
  const auto& e = spec.branch_points();
  const int n = static_cast<int>(e.size());
  std::vector<Cut> cuts;
  if (pairing == nullptr) {
    for (int j = 0; j < n / 2; ++j) cuts.push_back({2 * j, 2 * j + 1});
  } else {
    cuts = *pairing;
    std::vector<int> used(n, 0);
    if (static_cast<int>(cuts.size()) != n / 2)
      throw Error(ErrorCode::ConfigError, "cut pairing must contain p+1 pairs");
    for (const Cut& c : cuts) {
      if (c.first < 0 || c.first >= n || c.second < 0 || c.second >= n || c.first == c.second)
        throw Error(ErrorCode::ConfigError, "cut pairing index out of range");
      if (used[c.first]++ || used[c.second]++)
        throw Error(ErrorCode::ConfigError, "cut pairing is not a perfect matching");
    }
  }
  const double tol = 1e-12 * std::max(1.0, spec.scale());
  for (std::size_t i = 0; i < cuts.size(); ++i)
    for (std::size_t j = i + 1; j < cuts.size(); ++j)
      if (segments_meet(e[cuts[i].first], e[cuts[i].second], e[cuts[j].first],
                        e[cuts[j].second], tol))
        throw Error(ErrorCode::IntersectingCuts,
                    "cuts " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
  return cuts;
}

LoopIntegral integrate_loop(const CurveSpec& spec, const Loop& loop, const QuadOptions& opts) {
  LoopIntegral out;
  out.value = zero_basis(spec.genus());
  cplx y = loop.y_start;
  for (std::size_t i = 0; i + 1 < loop.vertices.size(); ++i) {
    LegResult leg = integrate_line(spec, loop.vertices[i], loop.vertices[i + 1], y, opts);
    out.value += leg.value;
    y = leg.y_end;
    for (auto& e : leg.edges) out.edges.push_back(std::move(e));
  }
  if (std::abs(y - loop.y_start) > 1e-8 * std::max(1.0, std::abs(y)))
    throw Error(ErrorCode::SelfCheckFailed, "loop does not close on the surface");
  return out;
}

int intersection_number(const CurveSpec&, const LoopIntegral& x, const LoopIntegral& y) {
  int total = 0;
  for (const EdgeTrace& e1 : x.edges) {
    const cplx d1 = e1.b - e1.a;
    for (const EdgeTrace& e2 : y.edges) {
      const cplx d2 = e2.b - e2.a;
      const double den = cross(d1, d2);
      if (std::abs(den) < 1e-300) continue;
      // a1 + s d1 = a2 + t d2
      const cplx w = e2.a - e1.a;
      const double s = cross(w, d2) / den;
      const double t = cross(w, d1) / den;
      if (s < 0.0 || s >= 1.0 || t < 0.0 || t >= 1.0) continue;
      const cplx y1 = e1.y.root_at(s);
      const cplx y2 = e2.y.root_at(t);
      if (std::abs(y1 - y2) < std::abs(y1 + y2)) total += den > 0 ? 1 : -1;
    }
  }
  return total;
}

Basis Homology::cycle_value(const Eigen::VectorXi& coeffs) const {
  Basis v = zero_basis(genus);
  for (int i = 0; i < coeffs.size(); ++i)
    if (coeffs(i) != 0) v += static_cast<double>(coeffs(i)) * loop_integrals[i].value;
  return v;
}

int Homology::intersect(const Eigen::VectorXi& x, const Eigen::VectorXi& y) const {
  return x.dot(loop_intersections * y);
}

Homology build_homology(const CurveSpec& spec, const QuadOptions& opts) {
  Homology h;
  const int p = spec.genus();
  h.genus = p;
  if (p == 0) return h;
  const auto& e = spec.branch_points();
  const double m0 = 0.1 * spec.min_separation();

  for (int k = 0; k < 2 * p; ++k) {
    const double m = safe_margin(spec, e[k], e[k + 1], m0) * (1.0 + 0.05 * k);
    h.loops.push_back(stadium(spec, e[k], e[k + 1], m));
  }
  for (int j = 0; j < p; ++j) {
    const cplx A = e[spec.cuts()[j].first], B = e[spec.cuts()[j].second];
    const double m = safe_margin(spec, A, B, m0) * 0.8;
    h.loops.push_back(stadium(spec, A, B, m));
  }
  const int L = static_cast<int>(h.loops.size());
  for (const Loop& lp : h.loops) h.loop_integrals.push_back(integrate_loop(spec, lp, opts));
  h.loop_intersections = Eigen::MatrixXi::Zero(L, L);
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) {
      const int k = intersection_number(spec, h.loop_integrals[i], h.loop_integrals[j]);
      h.loop_intersections(i, j) = k;
      h.loop_intersections(j, i) = -k;
    }

  for (int j = 0; j < p; ++j) {
    Eigen::VectorXi a = Eigen::VectorXi::Zero(L);
    a(2 * p + j) = 1;
    h.a.push_back(a);
  }

  // Brute-force search for b'_j over chain-loop combinations with entries in [-2, 2].
  const int nc = 2 * p;
  long total = 1;
  for (int i = 0; i < nc; ++i) total *= 5;
  std::vector<Eigen::VectorXi> bprime(p);
  std::vector<int> best_norm(p, 1 << 30);
  for (long code = 0; code < total; ++code) {
    Eigen::VectorXi w = Eigen::VectorXi::Zero(L);
    long c = code;
    int norm1 = 0;
    for (int i = 0; i < nc; ++i) {
      w(i) = static_cast<int>(c % 5) - 2;
      c /= 5;
      norm1 += std::abs(w(i));
    }
    if (norm1 == 0) continue;
    int hit = -1;
    bool ok = true;
    for (int k = 0; k < p && ok; ++k) {
      const int v = h.intersect(h.a[k], w);
      if (v == 1 && hit < 0)
        hit = k;
      else if (v != 0)
        ok = false;
    }
    if (ok && hit >= 0 && norm1 < best_norm[hit]) {
      best_norm[hit] = norm1;
      bprime[hit] = w;
    }
  }
  for (int j = 0; j < p; ++j)
    if (best_norm[j] == (1 << 30))
      throw Error(ErrorCode::SelfCheckFailed, "no dual cycle found for a_" + std::to_string(j + 1));

  h.b = bprime;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      const int k = h.intersect(bprime[i], bprime[j]);
      h.b[i] -= k * h.a[j];
    }

  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      if (h.intersect(h.a[i], h.a[j]) != 0 || h.intersect(h.b[i], h.b[j]) != 0 ||
          h.intersect(h.a[i], h.b[j]) != (i == j ? 1 : 0))
        throw Error(ErrorCode::SelfCheckFailed, "homology basis is not canonical");
    }
  for (int j = 0; j < p; ++j) {
    h.a_values.push_back(h.cycle_value(h.a[j]));
    h.b_values.push_back(h.cycle_value(h.b[j]));
  }
  return h;
}

void flip_b(Homology& h) {
  for (int j = 0; j < h.genus; ++j) {
    h.b[j] = -h.b[j];
    h.b_values[j] = -h.b_values[j];
  }
}

}  // namespace sbtheta
