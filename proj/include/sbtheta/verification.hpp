#pragma once

// Independent checks of the theta solution: Riccati, transfer and eigen
// relations of the Baker-Akhiezer vector, reconstruction of F, G, H from phi,
// zero curvature, the curve polynomial, trace and product formulas, the
// divisor flow and the growth factor for unit-circle data.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sbtheta/hierarchy.hpp"
#include "sbtheta/solution.hpp"

namespace sbtheta {

struct Residual {
  std::string name;
  double max = 0.0;
  double mean = 0.0;
  int samples = 0;
  double tol = 0.0;
  bool skipped = false;

  bool passed() const { return skipped || max <= tol; }
  void add(double r);
};

struct VerificationReport {
  std::vector<Residual> residuals;

  bool all_passed() const;
  const Residual* find(const std::string& name) const;
};

struct Tolerances {
  double riccati = 1e-6;
  double transfer = 1e-6;
  double eigenrelation = 1e-6;
  double zero_curvature = 1e-6;
  double r_match = 1e-7;
  double r_drift = 1e-8;
  double h_constant = 1e-9;
  double sb = 1e-6;
  double trace = 1e-6;
  double product = 1e-8;
  double divisor_flow = 1e-6;
  double ba_product = 1e-6;
  double growth = 1e-6;
  double modulus_ratio = 1e-4;
};

struct VerifyConfig {
  int n_min = -5;
  int n_max = 5;
  int riccati_points = 10;
  int transfer_points = 5;
  int ba_offset = 5;
  int samples = 24;  // z samples for the reconstruction
  std::uint64_t seed = 2024;
  Tolerances tol;
};

Residual riccati_residual(const SolutionState& st, const std::vector<PointData>& pts, int n_min,
                          int n_max, double tol);

/// z samples on a circle through the branch-point annulus, kept away from E_m and 0.
std::vector<cplx> reconstruction_samples(const CurveSpec& spec, int count);

/// Sample data for the reconstruction: phi on both sheets above each z.
struct SheetSamples {
  std::vector<cplx> z;
  std::vector<PointData> upper, lower;
};
SheetSamples sheet_samples(const SolutionState& st, const std::vector<cplx>& z);

/// Least-squares solve of G = (s/2) F and H = q F with F leading -2 alpha(n+1), G monic.
/// Throws IllConditionedInterpolation.
LaurentPolyTriple reconstruct_FGH(const SolutionState& st, int n, const SheetSamples& samples,
                                  cplx alpha_next);

/// Transfer Psi = U Psi^- and eigenrelation (V + y) Psi^- = 0 at sites n_min..n_max;
/// alpha, beta come from `seq` and V from triples[n - 1].
void check_transfer(const SolutionState& st, const LatticeSeq& seq,
                    const std::map<int, LaurentPolyTriple>& triples,
                    const std::vector<PointData>& pts, int n_min, int n_max, Residual& transfer,
                    Residual& eigen);

/// Theta psi_1 against the finite product of (z + alpha(m) phi(P, m-1)).
Residual ba_product_residual(const SolutionState& st, const LatticeSeq& seq,
                             const std::vector<PointData>& pts, int max_offset, double tol);

/// |alpha(n+1)/alpha(n)| averaged over quasi-periods: |exp(-growth_log)| times the theta factor.
double growth_factor(const SolutionState& st);

/// All branch points on the unit circle and the set closed under conjugation.
bool unit_circle_conjugate(const CurveSpec& spec);

/// max |Abel(P) + Abel(P*) - Abel(Pinf+) - Abel(Pinf-)| mod lattice over random P,
/// with Abel(P*) reached from P by a loop around the nearest branch point.
double abel_invariant_drift(const SolutionState& st, int count, std::uint64_t seed);

VerificationReport full_report(const SolutionState& st, const VerifyConfig& cfg = {});

/// Genus-0 closed form against the hierarchy with c1 = -(E0 + E1)/2 and g1.
VerificationReport genus0_report(cplx E0, cplx E1, int g_sign, const LatticeSolution& sol,
                                 const Tolerances& tol = {});

}  // namespace sbtheta
