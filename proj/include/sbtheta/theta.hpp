#pragma once

// Period matrices of the normalized holomorphic differentials and the Riemann
// theta function with lattice reduction.

#include <vector>

#include <Eigen/Dense>

#include "sbtheta/contour.hpp"
#include "sbtheta/curve.hpp"

namespace sbtheta {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct PeriodData {
  int genus = 0;
  CMat C;    // C(j,k) = integral of z^{j} dz/y over a_{k+1}
  CMat c;    // inverse of C
  CMat tau;  // tau(j,l) = integral of omega_{j+1} over b_{l+1}
  double min_eig_im_tau = 0.0;
  bool b_flipped = false;
  Homology homology;

  /// omega_{j+1} as a functional on Basis vectors.
  Differential omega(int j) const;
  /// (integral of omega_1, ..., omega_p) for a path with basis integral v.
  CVec abel(const Basis& v) const;
};

/// Throws SingularC or NonconvergentTau.
PeriodData compute_periods(const CurveSpec& spec, Homology homology);

struct ThetaParams {
  CMat tau;
  double tol = 1e-15;
  int max_radius = 64;
};

/// theta(z) = exp(log_factor) * value; value is the sum at the reduced argument.
struct ThetaValue {
  cplx log_factor;
  cplx value;

  cplx full() const { return std::exp(log_factor) * value; }
};

/// z = reduced + m + tau n with integer m, n chosen by rounding.
struct LatticeReduction {
  Eigen::VectorXd m, n;
  CVec reduced;
};

LatticeReduction reduce_lattice(const CVec& z, const CMat& tau);

/// Real (m, n) coordinates of z = m + tau n (no rounding).
void lattice_coordinates(const CVec& z, const CMat& tau, Eigen::VectorXd& m, Eigen::VectorXd& n);

/// Distance of z from the lattice Z^p + tau Z^p measured in (m, n) coordinates.
double lattice_distance(const CVec& z, const CMat& tau);

/// Shell sum without reduction.
cplx theta_direct(const CVec& z, const ThetaParams& params);
/// Reduced evaluation with the exact quasi-periodicity factor.
ThetaValue theta_reduced(const CVec& z, const ThetaParams& params);
cplx theta(const CVec& z, const ThetaParams& params);

}  // namespace sbtheta
