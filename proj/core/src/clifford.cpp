#include "loopchern/clifford.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "loopchern/errors.hpp"

namespace loopchern {

namespace {

SpinorMatrix pauli(int which) {
  SpinorMatrix s(2, 2);
  const Complex i(0.0, 1.0);
  switch (which) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -i, i, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

SpinorMatrix kron_chain(const std::vector<SpinorMatrix>& factors) {
  SpinorMatrix out = SpinorMatrix::Identity(1, 1);
  for (const auto& f : factors) {
    SpinorMatrix next = Eigen::kroneckerProduct(out, f).eval();
    out = std::move(next);
  }
  return out;
}

}  // namespace

Complex GammaSet::kappa() const {
  SpinorMatrix prod = SpinorMatrix::Identity(spinor_dim(), spinor_dim());
  for (const auto& g : gammas) prod = prod * g;
  return supertrace(*this, prod);
}

GammaSet build_gammas(int n, int chirality_sign) {
  if (n < 2 || n > kMaxDimension || n % 2 != 0)
    throw DimensionError("build_gammas: dimension must be even with 2 <= n <= 8, got " + std::to_string(n));
  if (chirality_sign != 1 && chirality_sign != -1)
    throw ContractError("build_gammas: chirality sign must be +1 or -1");
  const int half = n / 2;
  const Complex i(0.0, 1.0);
  GammaSet out;
  out.n = n;
  out.chirality_sign = chirality_sign;
  for (int j = 0; j < half; ++j) {
    for (int p : {1, 2}) {
      std::vector<SpinorMatrix> factors;
      for (int l = 0; l < half; ++l) factors.push_back(l < j ? pauli(3) : (l == j ? pauli(p) : pauli(0)));
      out.gammas.push_back(i * kron_chain(factors));
    }
  }
  const int dim = 1 << half;
  SpinorMatrix prod = SpinorMatrix::Identity(dim, dim);
  for (const auto& g : out.gammas) prod = prod * g;
  Complex phase(1.0, 0.0);
  for (int j = 0; j < half; ++j) phase *= i;
  out.chirality = static_cast<double>(chirality_sign) * phase * prod;
  return out;
}

void require_spd(const RealMatrix& g, const char* what) {
  if (g.rows() != g.cols() || g.rows() == 0) throw DimensionError(std::string(what) + ": metric must be square");
  if (!g.isApprox(g.transpose(), 1e-12)) throw DimensionError(std::string(what) + ": metric must be symmetric");
  Eigen::LLT<RealMatrix> llt(g);
  if (llt.info() != Eigen::Success) throw DimensionError(std::string(what) + ": metric is not positive definite");
}

Vielbein::Vielbein(const RealMatrix& g) : g_(g) {
  require_spd(g, "Vielbein");
  g_ = 0.5 * (g + g.transpose());
  g_inv_ = g_.inverse();
  g_inv_ = 0.5 * (g_inv_ + g_inv_.transpose()).eval();
  Eigen::LLT<RealMatrix> llt(g_inv_);
  e_ = llt.matrixL();
  det_ = g_.determinant();
}

namespace {

double frame_minor(const RealMatrix& e, IndexMask rows, IndexMask cols) {
  std::vector<int> r, c;
  for (int i = 0; i < e.rows(); ++i) {
    if (rows >> i & 1) r.push_back(i);
    if (cols >> i & 1) c.push_back(i);
  }
  if (r.empty()) return 1.0;
  RealMatrix m(r.size(), c.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) m(i, j) = e(r[i], c[j]);
  return m.determinant();
}

}  // namespace

Quantizer::Quantizer(GammaSet gammas, const RealMatrix& g) : gammas_(std::move(gammas)), vielbein_(g) {
  const int n = gammas_.n;
  if (vielbein_.dimension() != n)
    throw DimensionError("Quantizer: metric dimension " + std::to_string(vielbein_.dimension()) +
                         " does not match gamma dimension " + std::to_string(n));
  const int dim = gammas_.spinor_dim();
  // Ordered gamma products gamma^A over the orthonormal coframe.
  const IndexMask full = IndexMask{1} << n;
  std::vector<SpinorMatrix> frame_mono(full);
  frame_mono[0] = SpinorMatrix::Identity(dim, dim);
  for (IndexMask mask = 1; mask < full; ++mask) {
    const int top = 31 - std::countl_zero(mask);
    frame_mono[mask] = frame_mono[mask & ~(IndexMask{1} << top)] * gammas_.gammas[top];
  }
  // dx^I = sum_A det E[I, A] e^A, so c(dx^I) is the antisymmetrized product of the c(dx^i).
  monomials_.assign(full, SpinorMatrix());
  for (IndexMask I = 0; I < full; ++I) {
    monomials_[I] = SpinorMatrix::Zero(dim, dim);
    for (IndexMask A = 0; A < full; ++A) {
      if (mask_size(A) != mask_size(I)) continue;
      const double d = frame_minor(vielbein_.frame(), I, A);
      if (d != 0.0) monomials_[I] += d * frame_mono[A];
    }
  }
}

SpinorMatrix Quantizer::covector(const RealVector& xi) const {
  if (xi.size() != n()) throw DimensionError("Quantizer::covector: size mismatch");
  SpinorMatrix out = SpinorMatrix::Zero(spinor_dim(), spinor_dim());
  for (int k = 0; k < n(); ++k) out += xi[k] * covector(k);
  return out;
}

SpinorMatrix Quantizer::quantize(const FormComponents& coeffs) const {
  SpinorMatrix out = SpinorMatrix::Zero(spinor_dim(), spinor_dim());
  for (const auto& [indices, c] : coeffs) {
    if (static_cast<int>(indices.size()) > n())
      throw DimensionError("quantize: form degree exceeds dimension");
    IndexMask mask = 0;
    int sign = 1;
    for (int k : indices) {
      if (k < 0 || k >= n()) throw DimensionError("quantize: index out of range");
      const IndexMask bit = IndexMask{1} << k;
      const int s = wedge_sign(mask, bit);
      if (s == 0) throw ContractError("quantize: repeated index, coefficients are not antisymmetric");
      sign *= s;
      mask |= bit;
    }
    out += (static_cast<double>(sign) * c) * monomial(mask);
  }
  return out;
}

SpinorMatrix Quantizer::quantize_tensor(int degree, std::span<const Complex> tensor) const {
  const int n = this->n();
  if (degree < 0 || degree > n) throw DimensionError("quantize_tensor: degree exceeds dimension");
  std::size_t expected = 1;
  for (int j = 0; j < degree; ++j) expected *= static_cast<std::size_t>(n);
  if (tensor.size() != expected) throw DimensionError("quantize_tensor: tensor has wrong size");
  const double tol = 1e-12 * (1.0 + std::accumulate(tensor.begin(), tensor.end(), 0.0,
                                                     [](double acc, const Complex& z) { return acc + std::abs(z); }));
  SpinorMatrix out = SpinorMatrix::Zero(spinor_dim(), spinor_dim());
  std::vector<int> idx(degree, 0);
  for (std::size_t flat = 0; flat < expected; ++flat) {
    std::size_t rest = flat;
    for (int j = degree - 1; j >= 0; --j) {
      idx[j] = static_cast<int>(rest % n);
      rest /= n;
    }
    // Compare against the entry with the sorted index tuple.
    IndexMask mask = 0;
    int sign = 1;
    bool repeated = false;
    for (int k : idx) {
      const IndexMask bit = IndexMask{1} << k;
      const int s = wedge_sign(mask, bit);
      if (s == 0) {
        repeated = true;
        break;
      }
      sign *= s;
      mask |= bit;
    }
    if (repeated) {
      if (std::abs(tensor[flat]) > tol) throw ContractError("quantize_tensor: tensor is not antisymmetric");
      continue;
    }
    std::size_t sorted_flat = 0;
    for (int k = 0; k < n; ++k)
      if (mask & (IndexMask{1} << k)) sorted_flat = sorted_flat * n + k;
    if (std::abs(tensor[flat] - static_cast<double>(sign) * tensor[sorted_flat]) > tol)
      throw ContractError("quantize_tensor: tensor is not antisymmetric");
    if (flat == sorted_flat) out += tensor[flat] * monomial(mask);
  }
  return out;
}

Complex Quantizer::supertrace(const SpinorMatrix& m) const { return loopchern::supertrace(gammas_, m); }

Complex supertrace(const GammaSet& gammas, const SpinorMatrix& m) {
  if (m.rows() != gammas.spinor_dim() || m.cols() != gammas.spinor_dim())
    throw DimensionError("supertrace: matrix size does not match spinor dimension");
  return (gammas.chirality * m).trace();
}

}  // namespace loopchern
