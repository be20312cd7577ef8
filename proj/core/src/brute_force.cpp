#include "loopchern/brute_force.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Sparse>

namespace loopchern {

namespace {

using SpMat = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Dense = Eigen::MatrixXcd;

struct Space {
  int n = 0;
  int spin = 0;
  std::vector<std::vector<int>> modes;  // integer labels k
  std::map<std::vector<int>, int> index;
  Eigen::VectorXd lambda;               // |xi|_g^2 per row of the full space
  int dim() const { return static_cast<int>(modes.size()) * spin; }
};

Space build_space(const TorusGeometry& geom, int spin_dim, int cutoff) {
  Space sp;
  sp.n = geom.n();
  sp.spin = spin_dim;
  const double bound = cutoff + 0.5;
  std::vector<int> lo(sp.n), hi(sp.n);
  for (int i = 0; i < sp.n; ++i) {
    const double e = geom.spin_offsets()[i];
    lo[i] = static_cast<int>(std::ceil(-bound - e - 1e-12));
    hi[i] = static_cast<int>(std::floor(bound - e + 1e-12));
  }
  std::vector<int> k = lo;
  while (true) {
    sp.index[k] = static_cast<int>(sp.modes.size());
    sp.modes.push_back(k);
    int i = sp.n - 1;
    while (i >= 0 && k[i] == hi[i]) {
      k[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++k[i];
  }
  sp.lambda.resize(sp.dim());
  for (std::size_t m = 0; m < sp.modes.size(); ++m) {
    const double ns = make_mode(geom, sp.modes[m]).norm_sq;
    for (int s = 0; s < spin_dim; ++s) sp.lambda[m * spin_dim + s] = ns;
  }
  return sp;
}

// Operator e^{2 pi i <m,x>} (x) A: fibre at k goes to fibre at k + m (dropped outside the box).
SpMat shift_operator(const Space& sp, const Mode& m, const SpinorMatrix& a) {
  std::vector<Eigen::Triplet<Complex>> trip;
  for (std::size_t j = 0; j < sp.modes.size(); ++j) {
    std::vector<int> target = sp.modes[j];
    for (int i = 0; i < sp.n; ++i) target[i] += m[i];
    auto it = sp.index.find(target);
    if (it == sp.index.end()) continue;
    for (int r = 0; r < sp.spin; ++r)
      for (int c = 0; c < sp.spin; ++c)
        if (a(r, c) != Complex(0.0, 0.0)) trip.emplace_back(it->second * sp.spin + r, static_cast<int>(j) * sp.spin + c, a(r, c));
  }
  SpMat out(sp.dim(), sp.dim());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SpMat dirac_operator(const Space& sp, const TorusGeometry& geom, const Quantizer& q) {
  std::vector<Eigen::Triplet<Complex>> trip;
  for (std::size_t j = 0; j < sp.modes.size(); ++j) {
    const SpinorMatrix d = dirac_mode(q, make_mode(geom, sp.modes[j]).xi);
    for (int r = 0; r < sp.spin; ++r)
      for (int c = 0; c < sp.spin; ++c)
        if (d(r, c) != Complex(0.0, 0.0))
          trip.emplace_back(static_cast<int>(j) * sp.spin + r, static_cast<int>(j) * sp.spin + c, d(r, c));
  }
  SpMat out(sp.dim(), sp.dim());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// Multiplication by c(e) for one basis element.
SpMat clifford_mult(const Space& sp, const Quantizer& q, const BasisElem& e) {
  return shift_operator(sp, e.mode, q.monomial(e.mask));
}

SpMat insertion(const Space& sp, const Quantizer& q, const SpMat& D, const Word& w, int pos, int size) {
  const int n = q.n();
  if (size == 1) {
    const BasisElem& e = w[pos];
    const SpMat c = clifford_mult(sp, q, e);
    if (e.part == Part::dblprime) return SpMat(-c);
    SpMat dc(sp.dim(), sp.dim());
    exterior_d_elem<Complex>(e, n, [&](const BasisElem& x, const Complex& f) {
      dc += SpMat(f * clifford_mult(sp, q, x));
    });
    const double s = mask_size(e.mask) % 2 ? -1.0 : 1.0;
    SpMat comm = SpMat(D * c) - SpMat(s * SpMat(c * D));
    return SpMat(dc - comm);
  }
  const BasisElem& a = w[pos];
  const BasisElem& b = w[pos + 1];
  if (a.part == Part::dblprime || b.part == Part::dblprime) return SpMat(sp.dim(), sp.dim());
  SpMat prod(sp.dim(), sp.dim());
  BasisElem ab;
  const int s = multiply(a, b, ab);
  if (s != 0) prod = SpMat(static_cast<double>(s) * clifford_mult(sp, q, ab));
  SpMat out = SpMat(prod - SpMat(clifford_mult(sp, q, a) * clifford_mult(sp, q, b)));
  return mask_size(a.mask) % 2 ? SpMat(-out) : out;
}

struct Rule {
  std::vector<double> x, w;  // on [0, 1]
};

// Sigmoidal substitution t = u^p / (u^p + (1-u)^p) clusters the nodes at both ends,
// where the heat factors vary fastest; p = 1 is plain Gauss-Legendre.
Rule unit_rule(int points, int p) {
  std::vector<double> gx, gw;
  gauss_legendre(points, gx, gw);
  Rule r;
  for (std::size_t i = 0; i < gx.size(); ++i) {
    const double u = (gx[i] + 1.0) / 2.0, v = 1.0 - u;
    const double up = std::pow(u, p), vp = std::pow(v, p), den = up + vp;
    r.x.push_back(up / den);
    r.w.push_back(gw[i] / 2.0 * p * std::pow(u * v, p - 1) / (den * den));
  }
  return r;
}

struct Integrator {
  const Space& sp;
  const Rule& rule;
  Eigen::VectorXd heat(double s) const { return (-s * sp.lambda.array()).exp().matrix(); }

  // Integral over 0 <= t_1 <= ... <= t_M <= 1 of Str-trace(A H(t_1) X_1 H(t_2 - t_1) ... X_M H(1 - t_M)).
  Complex run(const SpMat& A, const std::vector<SpMat>& X) const {
    const int M = static_cast<int>(X.size());
    Dense T = Dense::Identity(sp.dim(), sp.dim());
    return level(A, X, M, 1.0, T, 1.0);
  }

  // tau = t_{j+1}; T = X_{j+1} H(..) ... ; integrate over t_j in [0, tau].
  Complex level(const SpMat& A, const std::vector<SpMat>& X, int j, double tau, const Dense& T, double jac) const {
    Complex total{0.0, 0.0};
    if (j == 1) {
      // trace(A H(t) X_1 H(tau - t) T) = sum_{(r,c)} h_r(t) X_1(r,c) h_c(tau - t) (T A)(c, r).
      const Dense C = T * A;
      const SpMat& X1 = X[0];
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double t = tau * rule.x[i];
        const Eigen::VectorXd h1 = heat(t), h2 = heat(tau - t);
        Complex s{0.0, 0.0};
        for (int r = 0; r < X1.outerSize(); ++r)
          for (SpMat::InnerIterator it(X1, r); it; ++it) s += h1[r] * it.value() * h2[it.col()] * C(it.col(), r);
        total += (tau * rule.w[i]) * s;
      }
      return total * jac;
    }
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double t = tau * rule.x[i];
      // X_j H(tau - t) T
      const Dense next = X[j - 1] * (heat(tau - t).asDiagonal() * T);
      total += level(A, X, j - 1, t, next, jac * tau * rule.w[i]);
    }
    return total;
  }
};

}  // namespace

void gauss_legendre(int points, std::vector<double>& nodes, std::vector<double>& weights) {
  if (points < 1) throw ContractError("gauss_legendre: need at least one node");
  nodes.assign(points, 0.0);
  weights.assign(points, 0.0);
  for (int i = 0; i < points; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (points == 1) p0 = 1.0, p1 = x;
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= points; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = points * (x * p1 - p0) / (x * x - 1.0);
    nodes[points - 1 - i] = x;
    weights[points - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

BruteForceResult chern_brute_force(const TorusGeometry& geom, const GammaSet& gammas, const Chain<Complex>& chain,
                                   const BruteForceOptions& opts) {
  if (opts.mode_cutoff < 0 || opts.mode_cutoff > 3)
    throw ResourceError("chern_brute_force: mode cutoff must be in 0..3", opts.mode_cutoff, 3);
  if (opts.quad_points < 1 || opts.grading < 1) throw ContractError("chern_brute_force: invalid quadrature");
  if (gammas.n != geom.n() || chain.n() != geom.n()) throw DimensionError("chern_brute_force: dimension mismatch");
  const Quantizer q(gammas, geom.metric());
  const Space sp = build_space(geom, q.spinor_dim(), opts.mode_cutoff);
  const SpMat D = dirac_operator(sp, geom, q);
  const SpMat gamma = shift_operator(sp, Mode{}, gammas.chirality);
  const Rule rule = unit_rule(opts.quad_points, opts.grading);
  const Integrator integ{sp, rule};

  // Cost: sum over compositions of nodes^(M-1) dense-by-sparse products.
  BruteForceResult res;
  res.space_dim = sp.dim();
  const double nodes = static_cast<double>(rule.x.size());
  double cost = 0.0;
  for (const auto& t : chain.terms()) {
    const int N = word_length(t.word);
    cost += std::pow(nodes, std::max(N - 1, 0)) * sp.dim() * sp.dim() * 4.0 + nodes * sp.dim();
  }
  if (cost > opts.budget) throw ResourceError("chern_brute_force: quadrature too expensive", cost, opts.budget);

  Complex total{0.0, 0.0};
  for (const auto& t : chain.terms()) {
    const Word& w = t.word;
    if (w[0].part != Part::prime) continue;
    const SpMat A = SpMat(gamma * clifford_mult(sp, q, w[0]));
    const int N = word_length(w);
    if (N == 0) {
      // Str(c(theta_0') e^{-D^2}) on the truncated space.
      const Eigen::VectorXd h = integ.heat(1.0);
      Complex s{0.0, 0.0};
      for (int r = 0; r < A.outerSize(); ++r)
        for (SpMat::InnerIterator it(A, r); it; ++it)
          if (it.col() == r) s += it.value() * h[r];
      total += t.coeff * s;
      continue;
    }
    // Every decomposition of 1..N into consecutive blocks of size 1 or 2.
    std::vector<std::vector<int>> comps{{}};
    for (int filled = 0; filled < N;) {
      std::vector<std::vector<int>> next;
      for (auto& c : comps) {
        int used = 0;
        for (int b : c) used += b;
        if (used == N) {
          next.push_back(c);
          continue;
        }
        for (int b = 1; b <= 2 && used + b <= N; ++b) {
          auto d = c;
          d.push_back(b);
          next.push_back(d);
        }
      }
      comps = std::move(next);
      filled = N;
      for (auto& c : comps) {
        int used = 0;
        for (int b : c) used += b;
        filled = std::min(filled, used);
      }
    }
    for (const auto& comp : comps) {
      std::vector<SpMat> X;
      int pos = 1;
      for (int b : comp) {
        X.push_back(insertion(sp, q, D, w, pos, b));
        pos += b;
      }
      const double sign = comp.size() % 2 ? -1.0 : 1.0;
      total += t.coeff * sign * integ.run(A, X);
    }
  }
  res.value = total;
  return res;
}

}  // namespace loopchern
