#include "sbtheta/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbtheta/error.hpp"

namespace sbtheta {

cplx CurveSpec::R(cplx z) const {
  cplx r = 1.0;
  for (const cplx& e : branch_points_) r *= (z - e);
  return r;
}

cplx CurveSpec::R_without(cplx z, int skip) const {
  cplx r = 1.0;
  for (int m = 0; m < static_cast<int>(branch_points_.size()); ++m)
    if (m != skip) r *= (z - branch_points_[m]);
  return r;
}

cplx CurveSpec::R_at_infinity(cplx zeta) const {
  cplx r = 1.0;
  for (const cplx& e : branch_points_) r *= (1.0 - e * zeta);
  return r;
}

CurveSpec CurveSpec::with_cuts(std::vector<Cut> cuts) const {
  CurveSpec out = *this;
  out.cuts_ = std::move(cuts);
  return out;
}

CurveSpec validate_spec(std::span<const cplx> branch_points, int g_sign) {
  const std::size_t n = branch_points.size();
  if (n < 2 || n % 2 != 0)
    throw Error(ErrorCode::OddCount, "need an even number >= 2 of branch points, got " +
                                         std::to_string(n));
  if (g_sign != 1 && g_sign != -1)
    throw Error(ErrorCode::ConfigError, "g_sign must be +1 or -1");

  CurveSpec spec;
  spec.branch_points_.assign(branch_points.begin(), branch_points.end());
  std::sort(spec.branch_points_.begin(), spec.branch_points_.end(),
            [](const cplx& a, const cplx& b) {
              return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });

  double scale = 0.0;
  for (const cplx& e : spec.branch_points_) scale = std::max(scale, std::abs(e));
  spec.scale_ = scale;

  double min_sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx ei = spec.branch_points_[i];
    if (std::abs(ei) <= 1e-14 * std::max(1.0, scale))
      throw Error(ErrorCode::ZeroBranchPoint, "branch point at z = 0");
    min_sep = std::min(min_sep, std::abs(ei));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::abs(ei - spec.branch_points_[j]);
      if (d <= 1e-12 * scale)
        throw Error(ErrorCode::DuplicateBranchPoint,
                    "branch points " + std::to_string(i) + " and " + std::to_string(j) +
                        " coincide");
      min_sep = std::min(min_sep, d);
    }
  }
  spec.min_separation_ = min_sep;

  spec.genus_ = static_cast<int>(n / 2) - 1;
  spec.g_sign_ = g_sign;
  cplx prod = 1.0;
  for (const cplx& e : spec.branch_points_) prod *= e;
  spec.g_top_ = static_cast<double>(g_sign) * std::sqrt(prod);

  for (int j = 0; j < static_cast<int>(n / 2); ++j) spec.cuts_.push_back({2 * j, 2 * j + 1});
  return spec;
}

cplx nearest_root(cplx q, cplx reference) {
  const cplx r = std::sqrt(q);
  return std::norm(r - reference) <= std::norm(r + reference) ? r : -r;
}

std::optional<int> branch_index(const CurveSpec& spec, cplx z) {
  const auto& e = spec.branch_points();
  const double tol = 1e-12 * std::max(1.0, spec.scale());
  for (int m = 0; m < static_cast<int>(e.size()); ++m)
    if (std::abs(z - e[m]) <= tol) return m;
  return std::nullopt;
}

namespace {

// Root s of (z - E_a)(z - E_b) analytic off the segment [E_a, E_b] with s ~ z at infinity.
cplx segment_root(cplx z, cplx ea, cplx eb) {
  const cplx mid = 0.5 * (ea + eb);
  const cplx xi = z - mid;
  const cplx s = std::sqrt((z - ea) * (z - eb));
  return (s * std::conj(xi)).real() >= 0.0 ? s : -s;
}

}  // namespace

cplx y_on_sheet(const CurveSpec& spec, cplx z, int sheet) {
  if (branch_index(spec, z))
    throw Error(ErrorCode::AtBranchPoint, "y_on_sheet evaluated at a branch point");
  const auto& e = spec.branch_points();
  cplx prod = 1.0;
  for (const Cut& c : spec.cuts()) prod *= segment_root(z, e[c.first], e[c.second]);
  return -static_cast<double>(sheet) * prod;
}

SurfacePoint make_point(const CurveSpec& spec, cplx z, int sheet) {
  if (auto m = branch_index(spec, z)) return branch_point(spec, *m);
  return {SurfacePoint::Kind::Finite, z, sheet, y_on_sheet(spec, z, sheet)};
}

SurfacePoint make_point_from_y(const CurveSpec& spec, cplx z, cplx y) {
  if (auto m = branch_index(spec, z)) return branch_point(spec, *m);
  const cplx yp = y_on_sheet(spec, z, 1);
  const int sheet = std::norm(y - yp) <= std::norm(y + yp) ? 1 : -1;
  return {SurfacePoint::Kind::Finite, z, sheet, y};
}

SurfacePoint branch_point(const CurveSpec& spec, int index) {
  return {SurfacePoint::Kind::Finite, spec.branch_points().at(index), 1, 0.0};
}

SurfacePoint infinity_point(int sheet) {
  return {SurfacePoint::Kind::Infinity, 0.0, sheet, 0.0};
}

SurfacePoint p0_plus(const CurveSpec& spec) { return make_point_from_y(spec, 0.0, spec.g_top()); }

SurfacePoint p0_minus(const CurveSpec& spec) {
  return make_point_from_y(spec, 0.0, -spec.g_top());
}

SurfacePoint involute(const SurfacePoint& p) {
  SurfacePoint q = p;
  if (p.at_infinity()) {
    q.sheet = -p.sheet;
    return q;
  }
  if (p.y == cplx(0.0)) return q;  // branch point
  q.y = -p.y;
  q.sheet = -p.sheet;
  return q;
}

}  // namespace sbtheta
