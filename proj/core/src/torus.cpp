#include "loopchern/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "loopchern/errors.hpp"

namespace loopchern {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Sum over p in 2*pi*(Z + e) with |p| > rho of exp(-b p^2).
double tail_1d(double e, double b, double rho) {
  // Consecutive points on either side are 2*pi apart, so p_j^2 >= rho^2 + 4*pi*rho*j.
  if (rho <= 1.0) {
    // Crude but safe: compare with the full sum plus the Gaussian integral.
    double total = 0.0;
    for (int k = -200; k <= 200; ++k) {
      const double p = kTwoPi * (k + e);
      if (std::abs(p) > rho) total += std::exp(-b * p * p);
    }
    return total + 2.0 * std::exp(-b * std::pow(kTwoPi * 199.5, 2)) + 1e-300;
  }
  const double ratio = std::exp(-4.0 * std::numbers::pi * b * rho);
  return 2.0 * std::exp(-b * rho * rho) / (1.0 - ratio);
}

// Upper bound on the full one-dimensional sum.
double full_1d(double e, double b) {
  double total = 0.0;
  const int kmax = 4 + static_cast<int>(std::ceil(10.0 / (kTwoPi * std::sqrt(b))));
  for (int k = -kmax; k <= kmax; ++k) {
    const double p = kTwoPi * (k + e);
    total += std::exp(-b * p * p);
  }
  return total + tail_1d(e, b, kTwoPi * (kmax - 0.5));
}

}  // namespace

TorusGeometry::TorusGeometry(const RealMatrix& g) : TorusGeometry(g, std::vector<double>(g.rows(), 0.5)) {}

TorusGeometry::TorusGeometry(const RealMatrix& g, std::vector<double> spin_offsets) : eps_(std::move(spin_offsets)) {
  require_spd(g, "TorusGeometry");
  g_ = 0.5 * (g + g.transpose());
  if (static_cast<int>(eps_.size()) != g_.rows())
    throw DimensionError("TorusGeometry: spin offsets must have length n");
  for (double e : eps_)
    if (e != 0.0 && e != 0.5) throw ContractError("TorusGeometry: spin offsets must be 0 or 1/2");
  g_inv_ = g_.inverse();
  g_inv_ = 0.5 * (g_inv_ + g_inv_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g_inv_);
  mu_min_ = es.eigenvalues().minCoeff();
  mu_max_ = es.eigenvalues().maxCoeff();
}

LatticeMode make_mode(const TorusGeometry& geom, const std::vector<int>& k) {
  if (static_cast<int>(k.size()) != geom.n()) throw DimensionError("make_mode: wrong number of components");
  LatticeMode m;
  m.k = k;
  m.xi.resize(geom.n());
  for (int i = 0; i < geom.n(); ++i) m.xi[i] = kTwoPi * (k[i] + geom.spin_offsets()[i]);
  m.norm_sq = geom.norm_sq(m.xi);
  return m;
}

SpinorMatrix dirac_mode(const Quantizer& q, const RealVector& xi) { return Complex(0.0, 1.0) * q.covector(xi); }

SpinorMatrix dirac_mode(const TorusGeometry& geom, const GammaSet& gammas, const LatticeMode& mode) {
  if (gammas.n != geom.n()) throw DimensionError("dirac_mode: gamma dimension does not match torus");
  return dirac_mode(Quantizer(gammas, geom.metric()), mode.xi);
}

double heat_weight(const LatticeMode& mode, double t) {
  if (!(t >= 0.0)) throw ContractError("heat_weight: t must be >= 0");
  return std::exp(-t * mode.norm_sq);
}

double lattice_gaussian_tail(const TorusGeometry& geom, double radius, double a) {
  if (!(a > 0.0)) throw ContractError("lattice_gaussian_tail: decay rate must be positive");
  const int n = geom.n();
  // |xi|_g > R forces |xi|_E > R / sqrt(mu_max), and then some coordinate exceeds that over sqrt(n).
  const double b = a * geom.inv_eig_min();
  const double rho = std::max(radius, 0.0) / std::sqrt(geom.inv_eig_max()) / std::sqrt(static_cast<double>(n));
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double term = tail_1d(geom.spin_offsets()[i], b, rho);
    for (int j = 0; j < n; ++j)
      if (j != i) term *= full_1d(geom.spin_offsets()[j], b);
    total += term;
  }
  return total;
}

std::vector<LatticeMode> lattice_ball(const TorusGeometry& geom, double radius) {
  const int n = geom.n();
  std::vector<int> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    // |xi_i| <= |xi|_g * sqrt(g_ii).
    const double bound = radius * std::sqrt(geom.metric()(i, i)) / kTwoPi;
    const double e = geom.spin_offsets()[i];
    lo[i] = static_cast<int>(std::floor(-bound - e));
    hi[i] = static_cast<int>(std::ceil(bound - e));
  }
  std::vector<LatticeMode> out;
  std::vector<int> k = lo;
  const double r2 = radius * radius;
  while (true) {
    LatticeMode m = make_mode(geom, k);
    if (m.norm_sq <= r2) out.push_back(std::move(m));
    int i = n - 1;
    while (i >= 0 && k[i] == hi[i]) {
      k[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++k[i];
  }
  std::sort(out.begin(), out.end(), [](const LatticeMode& a, const LatticeMode& b) {
    if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
    return a.k < b.k;
  });
  return out;
}

LatticeTruncation truncate_lattice(const TorusGeometry& geom, double shift_radius, double tol, double heat_time,
                                   int poly_degree) {
  if (!(tol > 0.0)) throw ContractError("truncate_lattice: tol must be positive");
  if (!(heat_time > 0.0)) throw ContractError("truncate_lattice: heat time must be positive");
  if (shift_radius < 0.0 || poly_degree < 0) throw ContractError("truncate_lattice: invalid growth parameters");
  const double S = shift_radius;
  const double s = heat_time;
  const double p = poly_degree;

  auto bound_at = [&](double R) {
    if (S == 0.0 && poly_degree == 0) return lattice_gaussian_tail(geom, R, s);
    // For r >= R >= (2 + sqrt 2) S one has (r - S)^2 >= r^2 / 2; split the Gaussian in two halves and
    // bound the polynomial against one of them (monotone once s r (1 + r + S) >= 2p).
    const double envelope = std::pow(1.0 + R + S, p) * std::exp(-s * R * R / 4.0);
    return envelope * lattice_gaussian_tail(geom, R, s / 4.0);
  };
  auto admissible = [&](double R) { return R >= 3.5 * S && s * R * (1.0 + R + S) >= 2.0 * p; };

  double R = std::max({1.0, 3.5 * S});
  while (!admissible(R)) R *= 1.25;
  // The unsplit case can also be satisfied vacuously at radius 0.
  if (S == 0.0 && poly_degree == 0 && bound_at(0.0) <= tol) R = 0.0;
  int guard = 0;
  while (bound_at(R) > tol) {
    R *= 1.1;
    if (++guard > 400) throw ResourceError("truncate_lattice: no radius reaches the requested tail", R, 0.0);
  }
  LatticeTruncation t;
  t.radius = R;
  t.tail_bound = bound_at(R);
  t.modes = lattice_ball(geom, R);  // at R = 0 this keeps xi = 0 when eps = 0
  return t;
}

double theta_trace(const TorusGeometry& geom, double t) {
  if (!(t > 0.0)) throw ContractError("theta_trace: the heat trace diverges for t <= 0");
  // The largest term is bounded below by exp(-t * mu_max * |2 pi (k + eps)|_E^2) at the nearest mode.
  RealVector first(geom.n());
  for (int i = 0; i < geom.n(); ++i) first[i] = kTwoPi * geom.spin_offsets()[i];
  const double lead = std::exp(-t * geom.norm_sq(first));
  const auto tr = truncate_lattice(geom, 0.0, 1e-13 * lead, t, 0);
  double sum = 0.0;
  // Small terms first.
  for (auto it = tr.modes.rbegin(); it != tr.modes.rend(); ++it) sum += std::exp(-t * it->norm_sq);
  return std::ldexp(sum, geom.n() / 2);
}

}  // namespace loopchern
