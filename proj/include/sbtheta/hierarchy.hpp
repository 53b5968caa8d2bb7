#pragma once

// The f/g/h recursion on concrete lattice data, polynomial assembly,
// zero-curvature residuals, the lattice invariant G^2 - F H, the stationary
// hierarchy residual, divisor extraction, trace formulas and a specialness test.

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sbtheta/curve.hpp"

namespace sbtheta {

/// alpha(n), beta(n) on [n_min, n_max]; reads outside the window return NaN.
struct LatticeSeq {
  int n_min = 0;
  int n_max = -1;
  std::vector<cplx> alpha, beta;

  int size() const { return n_max - n_min + 1; }
  bool contains(int n) const { return n >= n_min && n <= n_max; }
  cplx a(int n) const;
  cplx b(int n) const;
};

/// Sites with alpha*beta in {0, 1} (within 1e-12), which curve-based operations reject.
std::vector<int> degenerate_sites(const LatticeSeq& seq);

class HierarchyCoefficients {
 public:
  int p = 0;
  int n_ref = 0;
  int n_min = 0, n_max = -1;
  std::vector<cplx> c;  // c[0] = 1, c[1..p+1]

  /// Dressed coefficients; NaN where the window does not determine them.
  cplx f(int l, int n) const { return get(f_, l, n); }
  cplx g(int l, int n) const { return get(g_, l, n); }
  cplx h(int l, int n) const { return get(h_, l, n); }
  /// Coefficients with all summation constants zero.
  cplx f_hom(int l, int n) const { return get(fh_, l, n); }
  cplx g_hom(int l, int n) const { return get(gh_, l, n); }
  cplx h_hom(int l, int n) const { return get(hh_, l, n); }

  /// Homogeneous g from the local closed form, independent of the cumulative sums.
  cplx g_hom_local(int l, int n) const;

 private:
  friend HierarchyCoefficients run_recursion(const LatticeSeq&, const std::vector<cplx>&, int, int);
  using Table = std::vector<std::vector<cplx>>;
  cplx get(const Table& t, int l, int n) const;
  Table f_, g_, h_, fh_, gh_, hh_;
};

/// Runs the recursion through level p+1. `constants` holds c_1, c_2, ... (missing
/// entries are zero). Throws WindowTooSmall when n_ref lacks p+2 margin sites.
HierarchyCoefficients run_recursion(const LatticeSeq& seq, const std::vector<cplx>& constants,
                                    int p, int n_ref);

/// c_1..c_count as the Taylor coefficients of c(x) = prod_m (1 - E_m x)^{1/2}. The
/// homogeneous coefficients give G^2 - F H = z^{2p+2} + O(z^p), and dressing multiplies
/// the generating series by c(x)^2, so these constants reproduce the curve polynomial.
std::vector<cplx> summation_constants(const CurveSpec& spec, int count);

/// max over l <= p and sites of |g_{l+1} - g_{l+1}^- - alpha h_{l+1} - beta f_{l+1}^-|.
double dual_identity_check(const HierarchyCoefficients& co, const LatticeSeq& seq);

/// Coefficients in ascending powers of z.
struct LaurentPolyTriple {
  Eigen::VectorXcd F;  // degree p
  Eigen::VectorXcd G;  // degree p+1
  Eigen::VectorXcd H;  // degree p+1
};

LaurentPolyTriple assemble(const HierarchyCoefficients& co, int n);

cplx polyval(const Eigen::VectorXcd& c, cplx z);
Eigen::VectorXcd polymul(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);
/// Roots via companion matrix plus one Newton step, sorted by (Re, Im).
std::vector<cplx> poly_roots(const Eigen::VectorXcd& c);

/// Sample points on |z| = 0.7 and |z| = 1.5 (six on each).
std::vector<cplx> default_z_samples();

struct ZeroCurvatureReport {
  double relations = 0.0;  // max of the four scalar relations
  double matrix = 0.0;     // max entry of U V - V^+ U
};

/// Relations between the triple at n-1 (prev) and at n (cur) with alpha(n), beta(n).
ZeroCurvatureReport zero_curvature_residual(const LaurentPolyTriple& prev,
                                            const LaurentPolyTriple& cur, cplx alpha, cplx beta,
                                            const std::vector<cplx>& z_samples);

struct LatticeInvariant {
  std::vector<Eigen::VectorXcd> per_site;  // G^2 - F H, ascending
  Eigen::VectorXcd mean;
  double drift = 0.0;  // max coefficient deviation between sites
  std::vector<cplx> roots;
};

LatticeInvariant lattice_invariant(const std::vector<LaurentPolyTriple>& triples);

/// Coefficient r_k of z^{2p+2-k} in G^2 - F H from the hierarchy coefficients.
cplx r_coefficient(const HierarchyCoefficients& co, int k, int n);

/// (f_p - 2 g alpha, h_p^- + 2 g beta) at site n.
std::pair<cplx, cplx> sb_residual(const HierarchyCoefficients& co, const LatticeSeq& seq,
                                  cplx g_top, int n);
/// Explicit p = 0 and p = 1 forms (c1 used for p = 1).
std::pair<cplx, cplx> sb_residual_explicit(const LatticeSeq& seq, int p, cplx c1, cplx g_top,
                                           int n);

struct ExtractedDivisors {
  std::vector<SurfacePoint> mu;
  std::vector<SurfacePoint> nu;  // nu_1..nu_p; nu_0 = 0 is lifted to P0- and not stored
};

/// Roots of F and H / z lifted with y = +G(mu) and y = -G(nu).
ExtractedDivisors extract_divisors(const LaurentPolyTriple& t, const CurveSpec& spec);

struct TraceResidual {
  double alpha = 0.0;
  double beta = 0.0;
};

TraceResidual trace_check(const std::vector<cplx>& mu, const std::vector<cplx>& nu, cplx alpha,
                          cplx alpha_next, cplx beta, cplx beta_next, cplx g_top, int p);

struct SpecialWitness {
  int i = -1, j = -1;
};

/// Degree-p divisor containing {P, P*} or a repeated branch point.
std::optional<SpecialWitness> is_special(const Divisor& d, const CurveSpec& spec);

}  // namespace sbtheta
