#include "loopchern/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace loopchern {

namespace {

RealMatrix spd_power(const RealMatrix& m, double p) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
  return es.eigenvectors() * es.eigenvalues().array().pow(p).matrix().asDiagonal() * es.eigenvectors().transpose();
}

double op_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

double op_norm(const RealMatrix& m) { return Eigen::JacobiSVD<RealMatrix>(m).singularValues()(0); }

// exp(X) gamma^c exp(-X) = sum_a (e^{-omega})_{ac} gamma^a for X = 1/4 omega_ab gamma^a gamma^b
// when the gammas square to -1, so the lift of R uses omega = -log R.
SpinorMatrix spin_lift(const RealMatrix& R, const GammaSet& gammas) {
  const int n = gammas.n;
  if (op_norm(RealMatrix(R - RealMatrix::Identity(n, n))) >= 2.0 - 1e-9)
    throw ContractError("spin lift: rotation too far from the identity for the principal logarithm");
  const RealMatrix omega = -RealMatrix(R.log());
  SpinorMatrix X = SpinorMatrix::Zero(gammas.spinor_dim(), gammas.spinor_dim());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) X += 0.25 * omega(a, b) * gammas.gammas[a] * gammas.gammas[b];
  return X.exp();
}

// A^{1/2} = g0^{-1/2} S^{-1/2} g0^{1/2}, S = g0^{-1/2} gt g0^{-1/2}.
RealMatrix sqrt_A(const RealMatrix& g0, const RealMatrix& gt) {
  const RealMatrix h = spd_power(g0, 0.5), hi = spd_power(g0, -0.5);
  return hi * spd_power(hi * gt * hi, -0.5) * h;
}

}  // namespace

RealMatrix MetricFamily::dg(double t) const {
  if (dg_of) return dg_of(t);
  const double h = 1e-5;
  return (g_of(t + h) - g_of(t - h)) / (2.0 * h);
}

MetricFamily constant_family(const RealMatrix& g) {
  require_spd(g, "constant_family");
  const int n = static_cast<int>(g.rows());
  return {[g](double) { return g; }, [n](double) { return RealMatrix(RealMatrix::Zero(n, n)); }, "constant"};
}

MetricFamily linear_family(const RealMatrix& g0, const RealMatrix& g1) {
  require_spd(g0, "linear_family");
  require_spd(g1, "linear_family");
  if (g0.rows() != g1.rows()) throw DimensionError("linear_family: endpoint dimensions differ");
  return {[g0, g1](double t) { return RealMatrix((1.0 - t) * g0 + t * g1); },
          [g0, g1](double) { return RealMatrix(g1 - g0); }, "linear"};
}

MetricFamily log_geodesic_family(const RealMatrix& g0, const RealMatrix& g1) {
  require_spd(g0, "log_geodesic_family");
  require_spd(g1, "log_geodesic_family");
  if (g0.rows() != g1.rows()) throw DimensionError("log_geodesic_family: endpoint dimensions differ");
  const RealMatrix h = spd_power(g0, 0.5), hi = spd_power(g0, -0.5);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(hi * g1 * hi);
  const RealMatrix V = es.eigenvectors();
  const RealVector l = es.eigenvalues().array().log().matrix();
  auto g = [h, V, l](double t) {
    return RealMatrix(h * V * (t * l.array()).exp().matrix().asDiagonal() * V.transpose() * h);
  };
  auto dg = [h, V, l](double t) {
    return RealMatrix(h * V * (l.array() * (t * l.array()).exp()).matrix().asDiagonal() * V.transpose() * h);
  };
  return {g, dg, "log-geodesic"};
}

MetricFamily make_family(const std::string& kind, const RealMatrix& g0, const RealMatrix& g1) {
  if (kind == "linear") return linear_family(g0, g1);
  if (kind == "log-geodesic" || kind == "log_geodesic") return log_geodesic_family(g0, g1);
  throw ContractError("unknown interpolation '" + kind + "' (expected linear or log-geodesic)");
}

double validate_family(const MetricFamily& fam, const std::vector<double>& samples) {
  double worst = 0.0;
  for (double t : samples) {
    require_spd(fam.g(t), "metric family");
    const double h = 1e-5;
    const RealMatrix fd = (fam.g(t + h) - fam.g(t - h)) / (2.0 * h);
    const RealMatrix d = fam.dg(t);
    worst = std::max(worst, (fd - d).norm() / (1.0 + d.norm()));
  }
  return worst;
}

std::vector<double> uniform_samples(int count) {
  if (count < 1) throw ContractError("uniform_samples: need at least one sample");
  std::vector<double> s(count, 0.0);
  for (int i = 1; i < count; ++i) s[i] = static_cast<double>(i) / (count - 1);
  return s;
}

Transport build_transport(const RealMatrix& g0, const RealMatrix& gt, const GammaSet& gammas, const Transport* ref) {
  require_spd(g0, "build_transport");
  require_spd(gt, "build_transport");
  const int n = static_cast<int>(g0.rows());
  if (gt.rows() != n || gammas.n != n) throw DimensionError("build_transport: dimension mismatch");

  Transport tr;
  tr.A = gt.ldlt().solve(g0);
  const RealMatrix root = sqrt_A(g0, gt);
  tr.A_inv_sqrt = root.inverse();
  tr.A_prime_sqrt = root.transpose();
  const Vielbein v0(g0), vt(gt);
  // E_0^T P = O E_t^T.
  tr.rotation = v0.frame().transpose() * tr.A_prime_sqrt * vt.frame().transpose().inverse();
  tr.rho = std::sqrt(v0.det_metric() / vt.det_metric());

  SpinorMatrix beta = ref ? SpinorMatrix(spin_lift(tr.rotation * ref->rotation.transpose(), gammas) * ref->beta)
                          : spin_lift(tr.rotation, gammas);
  if (ref) {
    const double plus = op_norm(SpinorMatrix(beta - ref->beta));
    const double minus = op_norm(SpinorMatrix(beta + ref->beta));
    if (std::min(plus, minus) > std::numbers::sqrt2)
      throw ContractError("build_transport: spin lift discontinuous along the family");
    if (minus < plus) beta = -beta;
  }
  tr.beta = beta;
  return tr;
}

std::vector<Transport> transport_along(const MetricFamily& fam, const GammaSet& gammas,
                                       const std::vector<double>& samples) {
  std::vector<Transport> out;
  const RealMatrix g0 = fam.g(0.0);
  Transport prev = build_transport(g0, g0, gammas);
  double t_prev = 0.0;
  for (double t : samples) {
    // Substeps keep each relative rotation well inside the domain of the logarithm.
    int steps = 1;
    while (steps < 1 << 12) {
      const Transport probe = build_transport(g0, fam.g(t_prev + (t - t_prev) / steps), gammas, nullptr);
      const int n = gammas.n;
      if (op_norm(RealMatrix(probe.rotation * prev.rotation.transpose() - RealMatrix::Identity(n, n))) < 0.5) break;
      steps *= 2;
    }
    for (int s = 1; s <= steps; ++s) prev = build_transport(g0, fam.g(t_prev + (t - t_prev) * s / steps), gammas, &prev);
    t_prev = t;
    out.push_back(prev);
  }
  return out;
}

double intertwining_residual(const Transport& tr, const RealMatrix& g0, const RealMatrix& gt, const GammaSet& gammas) {
  const Quantizer q0(gammas, g0), qt(gammas, gt);
  const SpinorMatrix binv = tr.beta.inverse();
  double worst = 0.0;
  for (int i = 0; i < gammas.n; ++i) {
    const SpinorMatrix lhs = tr.beta * qt.covector(i) * binv;
    const SpinorMatrix rhs = q0.covector(RealVector(tr.A_prime_sqrt.col(i)));
    worst = std::max(worst, op_norm(SpinorMatrix(lhs - rhs)));
  }
  return worst;
}

SpinorMatrix pulled_dirac_mode(const Transport& tr, const TorusGeometry& geom_t, const GammaSet& gammas,
                               const LatticeMode& mode) {
  return tr.beta * dirac_mode(geom_t, gammas, mode) * tr.beta.adjoint();
}

SpinorMatrix pulled_dirac_derivative(const MetricFamily& fam, double t, const GammaSet& gammas, const RealVector& xi) {
  const RealMatrix g0 = fam.g(0.0), gt = fam.g(t), dgt = fam.dg(t);
  const RealMatrix h = spd_power(g0, 0.5), hi = spd_power(g0, -0.5);
  // R = S^{1/2}; R Rdot + Rdot R = Sdot, solved in the eigenbasis of S.
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(hi * gt * hi);
  const RealMatrix V = es.eigenvectors();
  const RealVector r = es.eigenvalues().cwiseSqrt();
  RealMatrix sdot = V.transpose() * (hi * dgt * hi) * V;
  for (int i = 0; i < sdot.rows(); ++i)
    for (int j = 0; j < sdot.cols(); ++j) sdot(i, j) /= r(i) + r(j);
  const RealMatrix rdot = V * sdot * V.transpose();
  const RealMatrix rinv = V * r.cwiseInverse().asDiagonal() * V.transpose();
  const RealMatrix droot = hi * (-rinv * rdot * rinv) * h;  // d/dt A^{1/2}
  // Q_xi(t) = i c_{g0}(A'^{1/2} xi), so Qdot = i c_{g0}((dA^{1/2})^T xi).
  const Quantizer q0(gammas, g0);
  return Complex(0.0, 1.0) * q0.covector(RealVector(droot.transpose() * xi));
}

H1Report h1_check(const MetricFamily& fam, const std::vector<double>& spin_offsets, const GammaSet& gammas,
                  const std::vector<double>& samples) {
  H1Report rep;
  const auto transports = transport_along(fam, gammas, samples);
  std::vector<double> zeros(gammas.n, 0.0);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const TorusGeometry geom(fam.g(samples[s]), spin_offsets);
    H1Sample hs;
    hs.t = samples[s];
    hs.theta = theta_trace(geom, 1.0);
    hs.scalar_bound = theta_trace(TorusGeometry(geom.metric(), zeros), 1.0);
    const LatticeTruncation trunc = truncate_lattice(geom, 0.0, 1e-15 * hs.theta);
    double acc = 0.0;
    for (auto it = trunc.modes.rbegin(); it != trunc.modes.rend(); ++it) {
      const SpinorMatrix q = pulled_dirac_mode(transports[s], geom, gammas, *it);
      acc += SpinorMatrix((-(q * q)).exp()).trace().real();
    }
    hs.trace = acc;
    rep.sup = std::max(rep.sup, hs.trace);
    rep.max_theta_mismatch = std::max(rep.max_theta_mismatch, std::abs(hs.trace - hs.theta) / hs.theta);
    if (hs.trace > hs.scalar_bound * (1.0 + 1e-12)) rep.dominated = false;
    if (std::abs(hs.trace - hs.scalar_bound) > 1e-12 * hs.scalar_bound) rep.equality = false;
    if (!rep.samples.empty())
      rep.max_adjacent_jump = std::max(rep.max_adjacent_jump, std::abs(hs.trace - rep.samples.back().trace));
    rep.samples.push_back(hs);
  }
  return rep;
}

namespace {

// All nonzero integer vectors in [-m, m]^n, normalized; antipodes give the same norms and are skipped.
std::vector<RealVector> direction_grid(int n, int density) {
  std::vector<RealVector> out;
  std::vector<int> v(n, -density);
  while (true) {
    int first = 0;
    while (first < n && v[first] == 0) ++first;
    if (first < n && v[first] > 0) {
      RealVector d(n);
      for (int i = 0; i < n; ++i) d[i] = v[i];
      out.push_back(d.normalized());
    }
    int i = n - 1;
    while (i >= 0 && v[i] == density) v[i--] = -density;
    if (i < 0) break;
    ++v[i];
  }
  return out;
}

SpinorMatrix inv_sqrt_psd(const SpinorMatrix& m) {
  Eigen::SelfAdjointEigenSolver<SpinorMatrix> es(m);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

H2Report h2_check(const MetricFamily& fam, const std::vector<double>& spin_offsets, const GammaSet& gammas,
                  const std::vector<double>& samples, double cutoff, int direction_density) {
  if (cutoff < 4.0) throw ContractError("h2_check: cutoff must be at least 4 (units of 2 pi)");
  const int n = gammas.n;
  if (direction_density <= 0) direction_density = n == 2 ? 40 : (n == 4 ? 5 : 2);
  const auto dirs = direction_grid(n, direction_density);
  const auto transports = transport_along(fam, gammas, samples);
  const int dim = gammas.spinor_dim();
  const SpinorMatrix id = SpinorMatrix::Identity(dim, dim);

  H2Report rep;
  rep.cutoff = cutoff;
  rep.directions = dirs.size();
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const double t = samples[s];
    const TorusGeometry geom(fam.g(t), spin_offsets);
    H2Sample hs;
    hs.t = t;
    const SpinorMatrix tau = pulled_dirac_derivative(fam, t, gammas, RealVector::Zero(n));
    hs.tau_norm = op_norm(tau);
    for (const auto& mode : lattice_ball(geom, 2.0 * std::numbers::pi * cutoff)) {
      const SpinorMatrix q = pulled_dirac_mode(transports[s], geom, gammas, mode);
      const SpinorMatrix qdot = pulled_dirac_derivative(fam, t, gammas, mode.xi);
      const SpinorMatrix r = inv_sqrt_psd(SpinorMatrix(q * q + id));
      const double left = op_norm(SpinorMatrix(qdot * r));
      const double right = op_norm(SpinorMatrix(r * qdot));
      hs.interior_sup = std::max(hs.interior_sup, left);
      hs.sigma_sup = std::max(hs.sigma_sup, op_norm(SpinorMatrix((qdot - tau) * r)));
      hs.max_lr_diff = std::max(hs.max_lr_diff, std::abs(left - right));
      ++hs.modes;
    }
    // Symbol limit: Qdot is linear in xi and (Q^2 + 1)^{-1/2} ~ |xi|^{-1}.
    const Quantizer qt(gammas, geom.metric());
    for (const auto& w : dirs) {
      const SpinorMatrix q = transports[s].beta * dirac_mode(qt, w) * transports[s].beta.adjoint();
      const SpinorMatrix qdot = pulled_dirac_derivative(fam, t, gammas, w) - tau;
      const SpinorMatrix r = inv_sqrt_psd(SpinorMatrix(q * q));
      const double left = op_norm(SpinorMatrix(qdot * r));
      const double right = op_norm(SpinorMatrix(r * qdot));
      hs.symbol_sup = std::max(hs.symbol_sup, left);
      hs.max_lr_diff = std::max(hs.max_lr_diff, std::abs(left - right));
    }
    rep.sup = std::max({rep.sup, hs.interior_sup, hs.symbol_sup});
    rep.max_lr_diff = std::max(rep.max_lr_diff, hs.max_lr_diff);
    rep.samples.push_back(hs);
  }
  return rep;
}

SweepReport metric_independence_sweep(const MetricFamily& fam, const std::vector<double>& spin_offsets,
                                      const GammaSet& gammas, const std::vector<Chain<GaussQ>>& cocycles,
                                      const Chain<Complex>& control, const std::vector<double>& samples, double tol,
                                      const EvaluationOptions& opts) {
  if (samples.empty()) throw ContractError("metric_independence_sweep: no samples");
  std::vector<Chain<Complex>> floats;
  for (std::size_t i = 0; i < cocycles.size(); ++i) {
    const auto d = total_differential(cocycles[i]);
    if (!d.is_zero())
      throw ContractError("metric_independence_sweep: chain " + std::to_string(i) + " is not a cocycle (delta has " +
                          describe(d.terms().front().word, d.n()) + ")");
    floats.push_back(to_float(cocycles[i]));
  }
  SweepReport rep;
  rep.samples = samples;
  rep.tol = tol;
  rep.values.assign(floats.size(), {});
  for (double t : samples) {
    const TorusGeometry geom(fam.g(t), spin_offsets);
    for (std::size_t i = 0; i < floats.size(); ++i) rep.values[i].push_back(evaluate(geom, gammas, floats[i], opts).value);
    rep.control_values.push_back(evaluate(geom, gammas, control, opts).value);
  }
  for (const auto& v : rep.values) {
    double dev = 0.0;
    for (const auto& x : v) dev = std::max(dev, std::abs(x - v.front()));
    rep.deviation.push_back(dev);
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  for (const auto& x : rep.control_values)
    rep.control_deviation = std::max(rep.control_deviation, std::abs(x - rep.control_values.front()));
  const double c0 = std::abs(rep.control_values.front());
  rep.control_relative = c0 > 0.0 ? rep.control_deviation / c0 : (rep.control_deviation > 0.0 ? INFINITY : 0.0);
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

namespace {

int minor_det(const IntMatrix& O, IndexMask rows, IndexMask cols) {
  std::vector<int> r, c;
  for (int i = 0; i < O.rows(); ++i) {
    if (rows >> i & 1) r.push_back(i);
    if (cols >> i & 1) c.push_back(i);
  }
  RealMatrix m(r.size(), c.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) m(i, j) = O(r[i], c[j]);
  return r.empty() ? 1 : static_cast<int>(std::lround(m.determinant()));
}

void require_unimodular(const IntMatrix& O, int n) {
  if (O.rows() != n || O.cols() != n) throw DimensionError("diffeomorphism: O has the wrong size");
  if (std::lround(O.cast<double>().determinant()) != 1)
    throw ContractError("diffeomorphism: O must be an integer matrix with det O = +1");
}

}  // namespace

Chain<Complex> pullback(const Chain<Complex>& chain, const IntMatrix& O) {
  const int n = chain.n();
  require_unimodular(O, n);
  TermBuffer<Complex> out;
  for (const auto& t : chain.terms()) {
    TermBuffer<Complex> acc{{Word{}, t.coeff}};
    for (const auto& e : t.word) {
      // e^{2 pi i <m, O y>} = e^{2 pi i <O^T m, y>};  O^* dx^I = sum_J det O[I, J] dy^J.
      BasisElem base = e;
      for (int j = 0; j < n; ++j) {
        long s = 0;
        for (int i = 0; i < n; ++i) s += static_cast<long>(O(i, j)) * e.mode[i];
        if (s < -127 || s > 127) throw ResourceError("pullback: mode out of range", static_cast<double>(s), 127);
        base.mode[j] = static_cast<std::int8_t>(s);
      }
      std::vector<std::pair<BasisElem, int>> images;
      const int k = mask_size(e.mask);
      for (IndexMask J = 0; J < (IndexMask{1} << n); ++J) {
        if (mask_size(J) != k) continue;
        const int d = minor_det(O, e.mask, J);
        if (d == 0) continue;
        BasisElem img = base;
        img.mask = static_cast<std::uint8_t>(J);
        images.emplace_back(img, d);
      }
      TermBuffer<Complex> next;
      for (const auto& a : acc)
        for (const auto& [img, d] : images) {
          Word w = a.word;
          w.push_back(img);
          next.push_back({w, a.coeff * static_cast<double>(d)});
        }
      acc = std::move(next);
    }
    for (auto& a : acc) out.push_back(std::move(a));
  }
  return Chain<Complex>(n, std::move(out));
}

std::vector<double> pullback_offsets(const std::vector<double>& eps, const IntMatrix& O) {
  const int n = static_cast<int>(eps.size());
  std::vector<double> out(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += O(i, j) * eps[i];
    out[j] = s - std::floor(s);
  }
  return out;
}

DiffeoReport diffeo_invariance_check(const TorusGeometry& geom, const GammaSet& gammas, const IntMatrix& O,
                                     const Chain<Complex>& chain, const EvaluationOptions& opts) {
  require_unimodular(O, geom.n());
  DiffeoReport rep;
  rep.offsets_h = pullback_offsets(geom.spin_offsets(), O);
  rep.offsets_invariant = rep.offsets_h == geom.spin_offsets();
  const RealMatrix Od = O.cast<double>();
  const RealMatrix h = Od.transpose() * geom.metric() * Od;
  const TorusGeometry geom_h(RealMatrix(0.5 * (h + h.transpose())), rep.offsets_h);
  rep.value_g = evaluate(geom, gammas, chain, opts).value;
  rep.value_h = evaluate(geom_h, gammas, pullback(chain, O), opts).value;
  rep.abs_diff = std::abs(rep.value_g - rep.value_h);
  return rep;
}

}  // namespace loopchern
