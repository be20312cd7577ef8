#pragma once

// Flat metric families g_t on T^n, the Bourguignon-Gauduchon transport to g_0,
// the pulled-back Dirac family Q_t and the checks built on it.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "loopchern/chain.hpp"
#include "loopchern/current.hpp"
#include "loopchern/torus.hpp"

namespace loopchern {

struct MetricFamily {
  std::function<RealMatrix(double)> g_of;
  std::function<RealMatrix(double)> dg_of;  // may be empty: centered difference
  std::string kind;

  RealMatrix g(double t) const { return g_of(t); }
  /// Analytic derivative when available, otherwise a centered difference with step 1e-5.
  RealMatrix dg(double t) const;
};

MetricFamily constant_family(const RealMatrix& g);
/// g_t = (1 - t) g0 + t g1.
MetricFamily linear_family(const RealMatrix& g0, const RealMatrix& g1);
/// g_t = g0^{1/2} exp(t L) g0^{1/2}, L = log(g0^{-1/2} g1 g0^{-1/2}).
MetricFamily log_geodesic_family(const RealMatrix& g0, const RealMatrix& g1);
MetricFamily make_family(const std::string& kind, const RealMatrix& g0, const RealMatrix& g1);

/// Checks g_t is SPD at the samples and returns the largest residual between
/// dg and a centered difference (relative to 1 + |dg|).
double validate_family(const MetricFamily& fam, const std::vector<double>& samples);

std::vector<double> uniform_samples(int count);

struct Transport {
  RealMatrix A;             // g_t^{-1} g_0
  RealMatrix A_inv_sqrt;    // isometry (TX, g_t) -> (TX, g_0)
  RealMatrix A_prime_sqrt;  // (A^{1/2})^T, isometry on covectors
  RealMatrix rotation;      // frame rotation O in SO(n)
  SpinorMatrix beta;        // spin lift: beta gamma^a beta^{-1} = sum_b O_ba gamma^b
  double rho = 1.0;         // sqrt(det g_0 / det g_t)
};

/// Spin lift is anchored at `ref` (the previous transport along the family) when given.
Transport build_transport(const RealMatrix& g0, const RealMatrix& gt, const GammaSet& gammas,
                          const Transport* ref = nullptr);

/// Sequential transports along the samples; substeps are inserted where the rotation jumps.
std::vector<Transport> transport_along(const MetricFamily& fam, const GammaSet& gammas,
                                       const std::vector<double>& samples);

/// max_i |beta c_{gt}(dx^i) beta^{-1} - c_{g0}(A'^{1/2} dx^i)|.
double intertwining_residual(const Transport& tr, const RealMatrix& g0, const RealMatrix& gt, const GammaSet& gammas);

/// Q_xi(t) = beta D_xi(g_t) beta^{-1}.
SpinorMatrix pulled_dirac_mode(const Transport& tr, const TorusGeometry& geom_t, const GammaSet& gammas,
                               const LatticeMode& mode);

/// d/dt Q_xi(t) from the derivative of A_t^{1/2} (Sylvester equation).
SpinorMatrix pulled_dirac_derivative(const MetricFamily& fam, double t, const GammaSet& gammas, const RealVector& xi);

struct H1Sample {
  double t = 0.0;
  double trace = 0.0;         // sum_xi tr exp(-Q_xi^2), directly
  double theta = 0.0;         // theta_trace(g_t, 1)
  double scalar_bound = 0.0;  // rank(Sigma) * tr exp(-Laplacian_{g_t})
};

struct H1Report {
  std::vector<H1Sample> samples;
  double sup = 0.0;
  double max_theta_mismatch = 0.0;  // relative
  double max_adjacent_jump = 0.0;
  bool dominated = true;
  bool equality = true;  // expected only for eps = 0
};

H1Report h1_check(const MetricFamily& fam, const std::vector<double>& spin_offsets, const GammaSet& gammas,
                  const std::vector<double>& samples);

struct H2Sample {
  double t = 0.0;
  double interior_sup = 0.0;  // over |xi|_{g_t} <= 2 pi cutoff
  double symbol_sup = 0.0;    // r -> infinity, over the direction grid
  double sigma_sup = 0.0;     // linear-in-xi part
  double tau_norm = 0.0;      // constant part
  double max_lr_diff = 0.0;   // | |Qdot R| - |R Qdot| |
  std::size_t modes = 0;
};

struct H2Report {
  std::vector<H2Sample> samples;
  double sup = 0.0;
  double max_lr_diff = 0.0;
  double cutoff = 0.0;
  std::size_t directions = 0;
};

H2Report h2_check(const MetricFamily& fam, const std::vector<double>& spin_offsets, const GammaSet& gammas,
                  const std::vector<double>& samples, double cutoff, int direction_density = 0);

struct LemmaReport {
  int trials = 0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  double min_ratio = 0.0;
  int max_dim = 0;
};

/// ratio = |S (S*S + T + 1)^{-1/2}| / sqrt(lambda + 1) on random S and Hermitian T.
LemmaReport lemma_bound_test(int max_dim1, int max_dim2, int trials, std::uint64_t seed);
double lemma_ratio(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& T);

struct SweepReport {
  std::vector<double> samples;
  std::vector<std::vector<Complex>> values;  // [cocycle][sample]
  std::vector<double> deviation;             // per cocycle, max_t |v(t) - v(0)|
  double max_deviation = 0.0;
  std::vector<Complex> control_values;
  double control_deviation = 0.0;
  double control_relative = 0.0;
  double tol = 0.0;
  bool pass = false;
};

SweepReport metric_independence_sweep(const MetricFamily& fam, const std::vector<double>& spin_offsets,
                                      const GammaSet& gammas, const std::vector<Chain<GaussQ>>& cocycles,
                                      const Chain<Complex>& control, const std::vector<double>& samples, double tol,
                                      const EvaluationOptions& opts = {});

using IntMatrix = Eigen::MatrixXi;

/// Pullback of a chain under x -> O x.
Chain<Complex> pullback(const Chain<Complex>& chain, const IntMatrix& O);
/// Spin offsets of the pulled-back structure: O^T eps mod 1.
std::vector<double> pullback_offsets(const std::vector<double>& eps, const IntMatrix& O);

struct DiffeoReport {
  Complex value_g;
  Complex value_h;
  double abs_diff = 0.0;
  std::vector<double> offsets_h;
  bool offsets_invariant = false;
};

/// Compares the current for (g, chain) with (O^T g O, pullback(chain)).
DiffeoReport diffeo_invariance_check(const TorusGeometry& geom, const GammaSet& gammas, const IntMatrix& O,
                                     const Chain<Complex>& chain, const EvaluationOptions& opts = {});

}  // namespace loopchern
