#pragma once

// Flat tori T^n = R^n / Z^n with a constant metric and a spin structure given
// by offsets eps in {0, 1/2}^n. Spinor Fourier modes are xi in 2*pi*(Z^n + eps).

#include <vector>

#include "loopchern/clifford.hpp"

namespace loopchern {

class TorusGeometry {
 public:
  /// Offsets default to (1/2, ..., 1/2) (no harmonic spinors).
  explicit TorusGeometry(const RealMatrix& g);
  TorusGeometry(const RealMatrix& g, std::vector<double> spin_offsets);

  int n() const { return static_cast<int>(g_.rows()); }
  const RealMatrix& metric() const { return g_; }
  const RealMatrix& inverse_metric() const { return g_inv_; }
  const std::vector<double>& spin_offsets() const { return eps_; }
  /// Extreme eigenvalues of g^{-1}.
  double inv_eig_min() const { return mu_min_; }
  double inv_eig_max() const { return mu_max_; }

  /// |xi|_g^2 = xi^T g^{-1} xi.
  double norm_sq(const RealVector& xi) const { return xi.dot(g_inv_ * xi); }

  TorusGeometry with_metric(const RealMatrix& g) const { return TorusGeometry(g, eps_); }

 private:
  RealMatrix g_;
  RealMatrix g_inv_;
  std::vector<double> eps_;
  double mu_min_ = 0.0;
  double mu_max_ = 0.0;
};

struct LatticeMode {
  std::vector<int> k;  // xi = 2*pi*(k + eps)
  RealVector xi;
  double norm_sq = 0.0;
};

LatticeMode make_mode(const TorusGeometry& geom, const std::vector<int>& k);

/// D_xi = i * sum_k c(dx^k) xi_k.
SpinorMatrix dirac_mode(const Quantizer& q, const RealVector& xi);
SpinorMatrix dirac_mode(const TorusGeometry& geom, const GammaSet& gammas, const LatticeMode& mode);

double heat_weight(const LatticeMode& mode, double t);

/// Certified bound on sum over lattice modes with |xi|_g > radius of exp(-a |xi|_g^2).
double lattice_gaussian_tail(const TorusGeometry& geom, double radius, double a);

struct LatticeTruncation {
  std::vector<LatticeMode> modes;  // ascending |xi|_g^2, then lexicographic in k
  double radius = 0.0;
  double tail_bound = 0.0;
};

/// Modes used to sum terms bounded by (1 + |xi|_g + S)^p * exp(-s (|xi|_g - S)_+^2),
/// where S (shift_radius) is the largest g-norm of a mode shift along a path,
/// s the minimal total heat time and p the polynomial growth of the insertions.
/// tail_bound certifies the sum over the excluded modes and is <= tol.
LatticeTruncation truncate_lattice(const TorusGeometry& geom, double shift_radius, double tol,
                                   double heat_time = 1.0, int poly_degree = 0);

/// All modes with |xi|_g <= radius, in the canonical order.
std::vector<LatticeMode> lattice_ball(const TorusGeometry& geom, double radius);

/// tr(exp(-t D^2)) = 2^{n/2} sum_xi exp(-t |xi|_g^2), tail <= 1e-12 relative.
double theta_trace(const TorusGeometry& geom, double t);

}  // namespace loopchern
