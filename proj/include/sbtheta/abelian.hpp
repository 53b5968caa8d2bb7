#pragma once

// Abel maps along a canonical path registry, normal differentials of the third
// kind with poles at P0- and Pinf+-, their asymptotic constants, and the
// vector of Riemann constants.

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "sbtheta/contour.hpp"
#include "sbtheta/theta.hpp"

namespace sbtheta {

/// Integral of the Basis from Q0 = (E_0, 0) to `end` along a registered path.
/// For P0+- and Pinf+- the singular components are regularized in the local
/// coordinate (zeta = z near 0, zeta = 1/z near infinity).
struct PathRecord {
  Basis value;
  SurfacePoint end;
};

enum class Special { P0Plus = 0, P0Minus = 1, PinfPlus = 2, PinfMinus = 3 };

/// Data that reproduces a special-point path truncated at local coordinate zeta.
struct SpecialPath {
  PathRecord record;
  Basis prefix;       // Q0 -> radial start point
  Basis correction;   // integer cycle combination added to the geometric path
  cplx radial_start;  // z1 (towards 0) or zR (towards infinity)
  cplx y_start;       // y at radial_start on this path
};

class PathRegistry {
 public:
  PathRegistry(const CurveSpec& spec, const QuadOptions& opts = {});

  const CurveSpec& spec() const { return spec_; }
  const QuadOptions& options() const { return opts_; }

  /// Geometric path from Q0 to a finite point (branch points allowed).
  PathRecord path_to(const SurfacePoint& p) const;
  /// Registered path to any point; special points use their stored records.
  PathRecord record(const SurfacePoint& p) const;

  const SpecialPath& special(Special s) const { return special_[static_cast<int>(s)]; }
  /// Adds an integer cycle combination (given by its Basis value) to a special path.
  void add_cycle(Special s, const Basis& cycle_value);

  /// Raw (unregularized) integral from Q0 to the special point's local coordinate zeta.
  Basis truncated(Special s, double zeta) const;

 private:
  CurveSpec spec_;
  QuadOptions opts_;
  std::vector<cplx> obstacles_;
  double clearance_ = 0.0;
  std::array<SpecialPath, 4> special_;
};

/// Whether a surface point coincides with a special point (returns which).
std::optional<Special> match_special(const CurveSpec& spec, const SurfacePoint& p);

/// Abel map of a point: vector (integral of omega_j), reduced modulo nothing.
CVec abel_point(const SurfacePoint& p, const PeriodData& periods, const PathRegistry& registry);
/// Multiplicity-weighted sum of abel_point over the divisor.
CVec abel_divisor(const Divisor& d, const PeriodData& periods, const PathRegistry& registry);

/// omega^(3) with poles at P0- (residue +1) and target Pinf+- (residue -1).
struct ThirdKindData {
  int target = 1;             // +1: Pinf+, -1: Pinf-
  Eigen::VectorXcd poly;      // q_0..q_{p-1}: prod(z - lambda_j) = z^p + sum q_k z^k
  Eigen::VectorXcd lambda;    // roots lambda_{+-, j}
  Differential form;          // functional on Basis vectors
  CVec b_periods;             // (1 / 2 pi i) integral over b_j
  // Asymptotic constants, indexed by Special.
  std::array<cplx, 4> omega0{};
  // Same constants from the extrapolation ladder (diagnostic).
  std::array<cplx, 4> omega0_ladder{};
  double ladder_deviation = 0.0;

  cplx integrate(const Basis& v) const { return apply(form, v); }
  /// Coefficient of ln(zeta) in the expansion near the special point.
  double log_coefficient(Special s) const;
};

ThirdKindData third_kind(const CurveSpec& spec, const PeriodData& periods, int target);

/// Fills omega0 from the registry (local-coordinate subtraction) and the
/// Richardson ladder at zeta in {1e-2, 5e-3, 2.5e-3}. Throws ExtrapolationDivergence.
void omega0_constants(ThirdKindData& tk, const PathRegistry& registry);

/// Residual of the Lemma 3.8a combination: |exp(w0- - winf+ - winf- + w0+) - 1|.
double omega0_identity_residual(const ThirdKindData& tk);

/// Numerical residue of omega^(3) at a special point from a small polygon in
/// the local coordinate around it.
cplx residue_at(const CurveSpec& spec, const ThirdKindData& tk, Special s,
                const QuadOptions& opts = {});

struct AbelianSetup {
  PathRegistry registry;
  ThirdKindData minus, plus;
  CVec delta;        // A_{P0-}(Pinf+)
  CVec shift_minus;  // A_{P0-}(Pinf-)
  double b_period_residual = 0.0;  // lattice distance before correction, max over targets
  double identity_residual = 0.0;  // Lemma 3.8a, max over targets
};

/// Builds the registry, both third-kind differentials, corrects the special
/// paths so that A(T) - A(P0-) = -b-periods/(2 pi i) exactly, and computes the
/// omega0 constants. Throws SelfCheckFailed when the relations fail.
AbelianSetup build_abelian(const CurveSpec& spec, const PeriodData& periods,
                           const QuadOptions& opts = {});

struct RiemannConstants {
  CVec xi;
  bool from_formula = true;
  double vanishing_ratio = 0.0;  // max |theta at divisor points| / median |theta|
};

/// Riemann constants for base point Q0, validated with the vanishing theorem.
RiemannConstants riemann_constants(const CurveSpec& spec, const PeriodData& periods,
                                   const PathRegistry& registry, std::uint64_t seed = 12345);

/// Vanishing ratio of theta(xi - A(P) + alpha(D)) for a random divisor D.
double vanishing_ratio(const CVec& xi, const CurveSpec& spec, const PeriodData& periods,
                       const PathRegistry& registry, std::uint64_t seed);

/// Deterministic pseudo-random finite surface points away from the special points.
std::vector<SurfacePoint> random_points(const CurveSpec& spec, int count, std::uint64_t seed);

}  // namespace sbtheta
