#include "loopchern/current.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "loopchern/simplex.hpp"

namespace loopchern {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void compositions_rec(int remaining, bool max_two, std::vector<int>& cur, std::vector<Composition>& out) {
  if (remaining == 0) {
    out.push_back({cur});
    return;
  }
  const int top = max_two ? std::min(2, remaining) : remaining;
  for (int s = 1; s <= top; ++s) {
    cur.push_back(s);
    compositions_rec(remaining - s, max_two, cur, out);
    cur.pop_back();
  }
}

// Neumaier compensated sum.
struct CompensatedSum {
  Complex sum{0.0, 0.0};
  Complex comp{0.0, 0.0};
  void add(const Complex& x) {
    auto step = [](double& s, double& c, double v) {
      const double t = s + v;
      c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
      s = t;
    };
    double sr = sum.real(), si = sum.imag(), cr = comp.real(), ci = comp.imag();
    step(sr, cr, x.real());
    step(si, ci, x.imag());
    sum = {sr, si};
    comp = {cr, ci};
  }
  Complex value() const { return sum + comp; }
};

RealVector mode_vector(const Mode& m, int n) {
  RealVector v(n);
  for (int k = 0; k < n; ++k) v[k] = kTwoPi * m[k];
  return v;
}

// One (word, composition) pair ready for the lattice sum.
struct PreparedPath {
  Complex coeff;
  int sign = 1;                    // (-1)^M
  SpinorMatrix x0;                 // Gamma c(theta_0')
  std::vector<ModeOperator> ops;   // F(theta_{I_1}), ..., F(theta_{I_M})
  std::vector<RealVector> offset;  // zeta_j - xi, j = 0..M
};

template <int D>
struct Kernel {
  using Mat = Eigen::Matrix<Complex, D, D>;

  struct Op {
    Mat constant;
    Mat commuted;
    Complex sign;
    bool commutator;
  };

  const Quantizer& q;
  std::vector<Mat> cov;  // c(dx^k)

  explicit Kernel(const Quantizer& quant) : q(quant) {
    for (int k = 0; k < q.n(); ++k) cov.push_back(q.covector(k));
  }

  Mat dirac(const RealVector& xi) const {
    Mat m = Mat::Zero();
    for (int k = 0; k < q.n(); ++k) m += xi[k] * cov[k];
    return Complex(0.0, 1.0) * m;
  }

  Complex path_sum(const PreparedPath& p, const std::vector<LatticeMode>& modes) const {
    const int M = static_cast<int>(p.ops.size());
    std::vector<Op> ops;
    for (const auto& o : p.ops)
      ops.push_back({o.constant(), o.has_commutator() ? Mat(o.commuted()) : Mat(Mat::Zero()),
                     Complex(o.super_sign(), 0.0), o.has_commutator()});
    const Mat x0 = p.x0;
    std::vector<RealVector> zeta(M + 1);
    std::vector<Mat> dir(M + 1);
    std::vector<double> expo(M + 1);
    CompensatedSum acc;
    // Small contributions first.
    for (auto it = modes.rbegin(); it != modes.rend(); ++it) {
      for (int j = 0; j <= M; ++j) {
        zeta[j] = it->xi + p.offset[j];
        expo[j] = q.vielbein().inverse_metric().size() ? zeta[j].dot(q.vielbein().inverse_metric() * zeta[j]) : 0.0;
      }
      bool need_dirac = false;
      for (const auto& o : ops) need_dirac |= o.commutator;
      if (need_dirac)
        for (int j = 0; j <= M; ++j) dir[j] = dirac(zeta[j]);
      Mat prod = x0;
      for (int j = 1; j <= M; ++j) {
        const Op& o = ops[j - 1];
        // F_j maps the fibre at zeta_j to the fibre at zeta_{j-1}.
        if (o.commutator) {
          prod = prod * (o.constant - (dir[j - 1] * o.commuted - o.sign * o.commuted * dir[j]));
        } else {
          prod = prod * o.constant;
        }
      }
      acc.add(prod.trace() * simplex_heat_integral(expo));
    }
    return acc.value();
  }
};

template <int D>
Complex sum_paths(const Quantizer& q, const std::vector<PreparedPath>& paths, const std::vector<LatticeMode>& modes) {
  Kernel<D> k(q);
  CompensatedSum total;
  for (const auto& p : paths) total.add(p.coeff * static_cast<double>(p.sign) * k.path_sum(p, modes));
  return total.value();
}

Complex dispatch_paths(const Quantizer& q, const std::vector<PreparedPath>& paths,
                       const std::vector<LatticeMode>& modes) {
  switch (q.spinor_dim()) {
    case 2: return sum_paths<2>(q, paths, modes);
    case 4: return sum_paths<4>(q, paths, modes);
    case 8: return sum_paths<8>(q, paths, modes);
    default: return sum_paths<16>(q, paths, modes);
  }
}

}  // namespace

int Composition::N() const {
  int s = 0;
  for (int b : blocks) s += b;
  return s;
}

std::vector<Composition> enumerate_compositions(int N, bool max_part_two) {
  if (N <= 0) throw ContractError("enumerate_compositions: N must be >= 1");
  if (N > 30) throw ResourceError("enumerate_compositions: N too large", N, 30);
  std::vector<Composition> out;
  std::vector<int> cur;
  compositions_rec(N, max_part_two, cur, out);
  std::stable_sort(out.begin(), out.end(), [](const Composition& a, const Composition& b) { return a.M() < b.M(); });
  return out;
}

RealVector ModeOperator::shift(int n) const { return mode_vector(shift_, n); }

SpinorMatrix ModeOperator::matrix(const Quantizer& q, const RealVector& xi) const {
  if (zero_) return SpinorMatrix::Zero(q.spinor_dim(), q.spinor_dim());
  if (!commutator_) return constant_;
  const RealVector out = xi + shift(q.n());
  return constant_ - (dirac_mode(q, out) * commuted_ - static_cast<double>(sign_) * commuted_ * dirac_mode(q, xi));
}

ModeOperator f_operator(const Quantizer& q, std::span<const BasisElem> block) {
  const int dim = q.spinor_dim();
  const int n = q.n();
  ModeOperator op;
  op.constant_ = SpinorMatrix::Zero(dim, dim);
  op.commuted_ = SpinorMatrix::Zero(dim, dim);
  if (block.size() == 1) {
    const BasisElem& e = block[0];
    op.shift_ = e.mode;
    if (e.part == Part::dblprime) {
      op.constant_ = -q.monomial(e.mask);
    } else {
      exterior_d_elem<Complex>(e, n, [&](const BasisElem& x, const Complex& c) { op.constant_ += c * q.monomial(x.mask); });
      op.commuted_ = q.monomial(e.mask);
      op.sign_ = (mask_size(e.mask) % 2) ? -1 : 1;
      op.commutator_ = true;
    }
  } else if (block.size() == 2) {
    const BasisElem& a = block[0];
    const BasisElem& b = block[1];
    op.shift_ = add_modes(a.mode, b.mode);
    if (a.part == Part::dblprime || b.part == Part::dblprime) {
      op.zero_ = true;
    } else {
      SpinorMatrix m = -(q.monomial(a.mask) * q.monomial(b.mask));
      const int s = wedge_sign(a.mask, b.mask);
      if (s != 0) m += static_cast<double>(s) * q.monomial(a.mask | b.mask);
      op.constant_ = (mask_size(a.mask) % 2 ? -1.0 : 1.0) * m;
    }
  } else {
    throw ContractError("f_operator: blocks must have length 1 or 2 (longer blocks are the zero operator)");
  }
  op.alpha_ = op.constant_.norm();
  op.beta_ = op.commutator_ ? op.commuted_.norm() : 0.0;
  if (op.alpha_ == 0.0 && op.beta_ == 0.0) op.zero_ = true;
  return op;
}

std::vector<std::pair<ModeOperator, Complex>> f_operator(const Quantizer& q,
                                                         const std::vector<EquivariantForm<Complex>>& block) {
  if (block.empty() || block.size() > 2)
    throw ContractError("f_operator: blocks must have length 1 or 2 (longer blocks are the zero operator)");
  std::vector<std::pair<ModeOperator, Complex>> out;
  const auto t0 = block[0].basis_terms();
  if (block.size() == 1) {
    for (const auto& [e, c] : t0) out.push_back({f_operator(q, std::span<const BasisElem>(&e, 1)), c});
    return out;
  }
  const auto t1 = block[1].basis_terms();
  for (const auto& [a, ca] : t0)
    for (const auto& [b, cb] : t1) {
      const BasisElem pair[2] = {a, b};
      out.push_back({f_operator(q, pair), ca * cb});
    }
  return out;
}

Evaluation evaluate(const TorusGeometry& geom, const GammaSet& gammas, const Chain<Complex>& chain,
                    const EvaluationOptions& opts) {
  if (!(opts.tol > 0.0)) throw ContractError("evaluate: tol must be positive");
  if (gammas.n != geom.n() || chain.n() != geom.n())
    throw DimensionError("evaluate: torus, gamma set and chain dimensions differ");
  const int n = geom.n();
  const Quantizer q(gammas, geom.metric());
  const double dim = q.spinor_dim();

  // Degree-zero words are handled apart: a single heat trace.
  Complex zero_length{0.0, 0.0};
  double zero_length_prefactor = 0.0;

  std::vector<PreparedPath> paths;
  double prefactor = 0.0;
  double shift_radius = 0.0;
  int poly_degree = 0;

  std::vector<std::vector<Composition>> comps_by_N;
  for (const auto& t : chain.terms()) {
    const Word& w = t.word;
    if (w[0].part != Part::prime) continue;  // c(theta_0) only sees theta_0'
    const SpinorMatrix x0 = gammas.chirality * q.monomial(w[0].mask);
    const int N = word_length(w);
    if (N == 0) {
      if (w[0].mode_bits() != 0) continue;
      zero_length += t.coeff * x0.trace();
      zero_length_prefactor += std::abs(t.coeff * x0.trace());
      continue;
    }
    if (static_cast<int>(comps_by_N.size()) <= N) comps_by_N.resize(N + 1);
    if (comps_by_N[N].empty()) comps_by_N[N] = enumerate_compositions(N, opts.max_part_two);
    for (const auto& comp : comps_by_N[N]) {
      PreparedPath p;
      p.coeff = t.coeff;
      p.sign = comp.M() % 2 ? -1 : 1;
      p.x0 = x0;
      int pos = 1;
      bool zero = false;
      Mode total = w[0].mode;
      for (int sz : comp.blocks) {
        if (sz > 2) {
          zero = true;
          break;
        }
        auto op = f_operator(q, std::span<const BasisElem>(w.begin() + pos, sz));
        if (op.is_zero()) {
          zero = true;
          break;
        }
        total = add_modes(total, op.mode_shift());
        p.ops.push_back(std::move(op));
        pos += sz;
      }
      if (zero || std::bit_cast<std::uint64_t>(total) != 0) continue;  // nonzero total shift: trace vanishes
      const int M = comp.M();
      p.offset.assign(M + 1, RealVector::Zero(n));
      for (int j = M - 1; j >= 0; --j) p.offset[j] = p.offset[j + 1] + p.ops[j].shift(n);
      double bound = dim * x0.norm() / factorial(M) * std::abs(p.coeff);
      int deg = 0;
      for (const auto& o : p.ops) {
        if (o.has_commutator()) {
          bound *= std::max(o.alpha(), 2.0 * o.beta());
          ++deg;
        } else {
          bound *= o.alpha();
        }
      }
      for (const auto& off : p.offset) shift_radius = std::max(shift_radius, std::sqrt(geom.norm_sq(off)));
      poly_degree = std::max(poly_degree, deg);
      prefactor += bound;
      paths.push_back(std::move(p));
    }
  }

  Evaluation ev;
  const double total_prefactor = prefactor + zero_length_prefactor;
  if (total_prefactor == 0.0) return ev;
  const auto trunc = truncate_lattice(geom, shift_radius, opts.tol / total_prefactor, 1.0, poly_degree);
  ev.radius = trunc.radius;
  ev.modes = trunc.modes.size();
  ev.tail_bound = trunc.tail_bound * total_prefactor;
  ev.trace_terms = static_cast<std::uint64_t>(paths.size()) * trunc.modes.size() + trunc.modes.size();
  if (static_cast<double>(ev.trace_terms) > opts.budget)
    throw ResourceError("evaluate: enumeration exceeds budget", static_cast<double>(ev.trace_terms), opts.budget);

  CompensatedSum total;
  if (zero_length_prefactor > 0.0) {
    double theta = 0.0;
    for (auto it = trunc.modes.rbegin(); it != trunc.modes.rend(); ++it) theta += std::exp(-it->norm_sq);
    total.add(zero_length * theta);
  }
  total.add(dispatch_paths(q, paths, trunc.modes));
  ev.value = total.value();
  return ev;
}

Complex evaluate(const TorusGeometry& geom, const GammaSet& gammas, const Chain<Complex>& chain, double tol) {
  EvaluationOptions o;
  o.tol = tol;
  return evaluate(geom, gammas, chain, o).value;
}

Complex localization_rhs(const Chain<Complex>& chain) {
  return integrate_top(restrict_to_constants(chain));
}

LocalizationRecord localization_check(const TorusGeometry& geom, const GammaSet& gammas,
                                      const Chain<GaussQ>& cocycle, const EvaluationOptions& opts) {
  const auto d = total_differential(cocycle);
  if (!d.is_zero())
    throw ContractError("localization_check: input is not a cocycle; delta has component " +
                        describe(d.terms().front().word, cocycle.n()) + " with coefficient " +
                        d.terms().front().coeff.str());
  const auto fc = to_float(cocycle);
  LocalizationRecord r;
  const auto ev = evaluate(geom, gammas, fc, opts);
  r.lhs = ev.value;
  r.tail_bound = ev.tail_bound;
  r.rhs = localization_rhs(fc);
  r.abs_diff = std::abs(r.lhs - r.rhs);
  return r;
}

}  // namespace loopchern
