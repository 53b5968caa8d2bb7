#pragma once

// Theta-function representations of alpha(n), beta(n), phi and the
// Baker-Akhiezer vector, plus the genus-0 closed form.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sbtheta/abelian.hpp"
#include "sbtheta/hierarchy.hpp"
#include "sbtheta/theta.hpp"

namespace sbtheta {

struct SolutionOptions {
  QuadOptions quad;
  double theta_tol = 1e-15;
  std::uint64_t seed = 12345;
};

struct SolutionState {
  CurveSpec spec;
  PeriodData periods;
  ThetaParams theta;
  AbelianSetup abelian;
  RiemannConstants riemann;
  int n0 = 0;
  cplx alpha0{}, beta0{};
  Divisor mu0{};
  CVec rho_mu{}, rho_nu{};  // Abel images of the mu and nu divisors at n0
  CVec delta{};             // flow vector A_{P0-}(Pinf+)
  CVec shift_minus{};       // A_{P0-}(Pinf-)
  cplx growth_log{};        // omega0^{0,-} - omega0^{inf+} of the Pinf- differential
  CVec abel_p0plus{}, abel_pinfplus{};
  Eigen::MatrixXd im_tau_inv{};

  int genus() const { return periods.genus; }
};

SolutionState init_solution(const CurveSpec& spec, const Divisor& mu_hat, cplx alpha0, int n0,
                            const SolutionOptions& opts = {});

/// Theta arguments z(P, D) = Xi - A(P) + alpha(D) used by the alpha/beta formulas at site n.
struct ThetaArguments {
  CVec mu, nu;  // alpha(D_mu(n)), alpha(D_nu(n))
  CVec p0plus_mu, p0plus_nu, pinf_mu, pinf_nu;
};

ThetaArguments theta_arguments(const SolutionState& st, int n);

/// Theta at z with the quasi-periodicity factor kept in log form.
ThetaValue theta_log(const SolutionState& st, const CVec& z);
/// |theta| relative to its natural size exp(pi y^T (Im tau)^-1 y) at the reduced argument.
double theta_relative_size(const SolutionState& st, const ThetaValue& v, const CVec& z);

cplx alpha_n(const SolutionState& st, int n);
cplx beta_n(const SolutionState& st, int n);
/// Right-hand side of the alpha*beta product formula at site n.
cplx alpha_beta_product(const SolutionState& st, int n);

/// Integrals needed to evaluate phi and psi at a point, computed once per point.
struct PointData {
  SurfacePoint point;
  std::optional<Special> special;
  CVec abel;
  cplx omega_minus;  // integral of omega^(3)_{P0-, Pinf-} from Q0
  cplx omega_plus;   // integral of omega^(3)_{P0-, Pinf+} from Q0
};

PointData point_data(const SolutionState& st, const SurfacePoint& p);

cplx phi(const SolutionState& st, const PointData& pd, int n);
cplx phi(const SolutionState& st, const SurfacePoint& p, int n);

/// (psi_1, psi_2) at P for site n relative to the state's n0.
std::pair<cplx, cplx> baker_akhiezer(const SolutionState& st, const PointData& pd, int n);

struct LatticeSolution {
  int n_min = 0, n_max = -1, n0 = 0;
  std::vector<cplx> alpha, beta;
  std::vector<double> product_residual;  // relative, per site

  LatticeSeq seq() const;
};

LatticeSolution solve_window(const SolutionState& st, int n_min, int n_max);

/// Genus-0 closed form on y^2 = (z - E0)(z - E1).
LatticeSolution genus0_solution(cplx E0, cplx E1, int g_sign, cplx alpha0, int n0, int n_min,
                                int n_max);

struct Genus0Constants {
  cplx g1, c1, alpha_beta;
};
Genus0Constants genus0_constants(cplx E0, cplx E1, int g_sign);

}  // namespace sbtheta
