#pragma once

// Paths on the cut plane, continuation of y along them, adaptive quadrature of
// the differentials used by the library, and a canonical homology basis.
//
// Every differential we need is a linear combination of
//   z^k dz / y (k = 0..p),  dz / (z y),  dz / z,
// so a path integral is returned as the vector of these p+3 numbers (a Basis).

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "sbtheta/curve.hpp"

namespace sbtheta {

constexpr int kMaxBasis = 8;
using Basis = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, kMaxBasis, 1>;

/// Index layout of a Basis for genus p.
inline int basis_size(int p) { return p + 3; }
inline int idx_power(int k) { return k; }
inline int idx_inv_z(int p) { return p + 1; }
inline int idx_log(int p) { return p + 2; }

Basis zero_basis(int p);
/// Image of a path under the involution: odd components flip, dz/z is kept.
Basis involute_basis(const Basis& v, int p);

/// Linear functional on Basis vectors, e.g. eta_j has a single 1 at index j-1.
using Differential = Basis;
cplx apply(const Differential& d, const Basis& v);

struct QuadOptions {
  double rel_tol = 1e-13;
  double abs_tol = 1e-15;
  int max_depth = 40;
};

/// Square-root continuation along a parametrized curve t in [0,1]: between
/// panel breaks t_k the value is s_k * sqrt(q(t)/q(t_k)) with |q(t)/q(t_k)-1| < 1/2.
struct SqrtTrace {
  std::vector<double> breaks;  // t_0 = 0 < ... < t_K = 1
  std::vector<cplx> ref_root;  // root value at breaks[k]
  std::vector<cplx> ref_q;     // q(breaks[k])
  std::function<cplx(double)> q;

  cplx root_at(double t) const;
  cplx end_root() const { return ref_root.back(); }
};

SqrtTrace continue_sqrt(std::function<cplx(double)> q, cplx start_root);

/// Straight segment a -> b with y continued from y_a.
struct EdgeTrace {
  cplx a, b;
  SqrtTrace y;
};

struct LegResult {
  Basis value;
  cplx y_end;
  std::vector<EdgeTrace> edges;  // only straight z-plane pieces with regular y
};

/// Continues y along a polygon starting at (vertices[0], y_start); returns node values.
std::vector<cplx> continue_y(const CurveSpec& spec, const std::vector<cplx>& vertices,
                             cplx y_start);

/// Integral of the basis along the straight segment a -> b.
LegResult integrate_line(const CurveSpec& spec, cplx a, cplx b, cplx y_a,
                         const QuadOptions& opts = {});

/// Integral from the branch point E_m to z1, using z = E_m + u^2. The sheet at
/// z1 is whichever the u-continuation produces (negate odd parts to switch).
LegResult integrate_from_branch(const CurveSpec& spec, int m, cplx z1,
                                const QuadOptions& opts = {});

/// Regularized integral from (z1, y1) radially into z = 0: singular parts
/// r ln(zeta) of dz/(zy) and dz/z are removed with local coordinate zeta = z.
/// Returns the value and y(0) reached.
LegResult integrate_to_zero(const CurveSpec& spec, cplx z1, cplx y1,
                            const QuadOptions& opts = {});

/// Regularized integral from (zR, yR) radially to infinity with zeta = 1/z.
/// y_end holds -v(0) = the sheet sign reached (+1 or -1) as a complex number.
LegResult integrate_to_infinity(const CurveSpec& spec, cplx zR, cplx yR,
                                const QuadOptions& opts = {});

/// Adaptive Gauss-Kronrod 7-15 for a vector integrand on [0,1].
Basis integrate_vector(const std::function<Basis(double)>& f, int n,
                       const QuadOptions& opts);

/// Polyline from a to b avoiding disks of radius `clearance` around obstacles.
/// Returns waypoints after a, ending with b.
std::vector<cplx> route(cplx a, cplx b, const std::vector<cplx>& obstacles,
                        double clearance);

/// Obstacles every path must avoid: all branch points and z = 0.
std::vector<cplx> path_obstacles(const CurveSpec& spec);

// ---------------------------------------------------------------- cuts --

/// Cut system; default pairs consecutive sorted branch points.
/// Throws IntersectingCuts when two segments meet.
std::vector<Cut> build_cuts(const CurveSpec& spec, const std::vector<Cut>* pairing = nullptr);

// ------------------------------------------------------------ homology --

/// Closed polygon lifted to the surface from (vertices[0], y_start).
struct Loop {
  std::vector<cplx> vertices;  // closed: last vertex equals the first
  cplx y_start;
};

struct LoopIntegral {
  Basis value;
  std::vector<EdgeTrace> edges;
};

LoopIntegral integrate_loop(const CurveSpec& spec, const Loop& loop,
                            const QuadOptions& opts = {});

/// Signed intersection number of two lifted closed polygons.
int intersection_number(const CurveSpec& spec, const LoopIntegral& x, const LoopIntegral& y);

/// Canonical cycles as integer combinations of elementary loops.
struct Homology {
  int genus = 0;
  std::vector<Loop> loops;
  std::vector<LoopIntegral> loop_integrals;
  Eigen::MatrixXi loop_intersections;
  std::vector<Eigen::VectorXi> a, b;  // coefficients over loops
  std::vector<Basis> a_values, b_values;

  /// Integer combination -> integral of the basis along that cycle.
  Basis cycle_value(const Eigen::VectorXi& coeffs) const;
  /// Intersection number of two cycles given as loop coefficients.
  int intersect(const Eigen::VectorXi& x, const Eigen::VectorXi& y) const;
};

/// a_j encircles the j-th cut; b_j is completed to a symplectic basis.
/// The orientation of the b_j is fixed later by Im(tau) > 0 (see flip_b).
Homology build_homology(const CurveSpec& spec, const QuadOptions& opts = {});
void flip_b(Homology& h);

}  // namespace sbtheta
