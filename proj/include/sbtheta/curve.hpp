#pragma once

// Compactified hyperelliptic curve y^2 = prod_m (z - E_m) with two points at
// infinity, its sheets, and the special points P0+-, Pinf+-.

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace sbtheta {

using cplx = std::complex<double>;

/// Straight cut joining two branch points (indices into CurveSpec::branch_points).
struct Cut {
  int first = 0;
  int second = 0;
};

class CurveSpec {
 public:
  /// Branch points sorted lexicographically by (Re, Im).
  const std::vector<cplx>& branch_points() const { return branch_points_; }
  int genus() const { return genus_; }
  int g_sign() const { return g_sign_; }
  /// g_{p+1} = g_sign * principal sqrt(prod E_m).
  cplx g_top() const { return g_top_; }
  const std::vector<Cut>& cuts() const { return cuts_; }
  /// max |E_m|, used to set geometric scales.
  double scale() const { return scale_; }
  /// Minimal pairwise distance among {E_m} and 0.
  double min_separation() const { return min_separation_; }

  /// R(z) = prod (z - E_m).
  cplx R(cplx z) const;
  /// prod_{m != skip} (z - E_m).
  cplx R_without(cplx z, int skip) const;
  /// prod (1 - E_m zeta), so that y = zeta^{-(p+1)} * sqrt(this).
  cplx R_at_infinity(cplx zeta) const;

  /// Returns a copy using a different cut system (validated by build_cuts).
  CurveSpec with_cuts(std::vector<Cut> cuts) const;

 private:
  friend CurveSpec validate_spec(std::span<const cplx>, int);
  std::vector<cplx> branch_points_;
  int genus_ = 0;
  int g_sign_ = 1;
  cplx g_top_;
  std::vector<Cut> cuts_;
  double scale_ = 1.0;
  double min_separation_ = 1.0;
};

/// Validates branch points; throws Error{OddCount|ZeroBranchPoint|DuplicateBranchPoint}.
CurveSpec validate_spec(std::span<const cplx> branch_points, int g_sign = 1);

/// y on sheet `sheet` (+1/-1). Sheet +1 satisfies y/z^{p+1} -> -1 at infinity,
/// so Pinf+ lies on sheet +1. Continuous off the cut segments.
/// Throws Error{AtBranchPoint} when z coincides with some E_m.
cplx y_on_sheet(const CurveSpec& spec, cplx z, int sheet);

/// Principal-branch-free root of w^2 = q closest to `reference`.
cplx nearest_root(cplx q, cplx reference);

struct SurfacePoint {
  enum class Kind { Finite, Infinity };
  Kind kind = Kind::Finite;
  cplx z;
  int sheet = 1;
  cplx y;

  bool at_infinity() const { return kind == Kind::Infinity; }
};

/// Finite point (z, y) with y taken on the given sheet.
SurfacePoint make_point(const CurveSpec& spec, cplx z, int sheet);
/// Finite point from an explicit y value; the sheet is recovered by matching.
SurfacePoint make_point_from_y(const CurveSpec& spec, cplx z, cplx y);
SurfacePoint branch_point(const CurveSpec& spec, int index);
SurfacePoint infinity_point(int sheet);

/// P0,+ = (0, g) and P0,- = (0, -g).
SurfacePoint p0_plus(const CurveSpec& spec);
SurfacePoint p0_minus(const CurveSpec& spec);

/// (z, y) -> (z, -y); Pinf+ <-> Pinf-.
SurfacePoint involute(const SurfacePoint& p);

/// Index of the branch point at z, if z coincides with one (relative 1e-12).
std::optional<int> branch_index(const CurveSpec& spec, cplx z);

/// Formal sum of points, multiplicities by repetition.
struct Divisor {
  std::vector<SurfacePoint> points;
  int degree() const { return static_cast<int>(points.size()); }
};

}  // namespace sbtheta
