#pragma once

// Complex Clifford modules for even n with the convention
//   gamma^a gamma^b + gamma^b gamma^a = -2 delta^{ab},
// chirality Gamma = sign * i^{n/2} gamma^1 ... gamma^n, and Clifford
// quantization of constant-coefficient forms through a lower-triangular
// vielbein of a constant metric.

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "loopchern/scalar.hpp"

namespace loopchern {

using SpinorMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Bit i set <=> dx^{i+1} present; indices are increasing by construction.
using IndexMask = std::uint32_t;

inline constexpr int kMaxDimension = 8;

struct GammaSet {
  int n = 0;
  std::vector<SpinorMatrix> gammas;
  SpinorMatrix chirality;
  int chirality_sign = 1;

  int spinor_dim() const { return static_cast<int>(chirality.rows()); }
  /// supertrace(gamma^1 ... gamma^n); the module's normalization constant.
  Complex kappa() const;
};

/// Iterated (Jordan-Wigner) tensor construction; n even, 2 <= n <= 8.
GammaSet build_gammas(int n, int chirality_sign = 1);

/// Frame e with sum_a e_a^k e_a^l = (g^{-1})^{kl}; stored as E(k, a) = e_a^k,
/// the lower Cholesky factor of g^{-1}.
class Vielbein {
 public:
  explicit Vielbein(const RealMatrix& g);

  int dimension() const { return static_cast<int>(g_.rows()); }
  const RealMatrix& metric() const { return g_; }
  const RealMatrix& inverse_metric() const { return g_inv_; }
  const RealMatrix& frame() const { return e_; }
  double det_metric() const { return det_; }

 private:
  RealMatrix g_;
  RealMatrix g_inv_;
  RealMatrix e_;
  double det_ = 0.0;
};

/// Throws DimensionError unless g is square, symmetric and positive definite.
void require_spd(const RealMatrix& g, const char* what);

namespace detail {
inline constexpr std::array<std::uint8_t, 256> kPopcount8 = [] {
  std::array<std::uint8_t, 256> t{};
  for (int i = 0; i < 256; ++i) t[i] = static_cast<std::uint8_t>((i & 1) + (i >> 1 & 1) + (i >> 2 & 1) + (i >> 3 & 1) +
                                                                  (i >> 4 & 1) + (i >> 5 & 1) + (i >> 6 & 1) + (i >> 7 & 1));
  return t;
}();
}  // namespace detail

/// Number of indices in a mask (n <= 8).
inline int mask_size(IndexMask m) { return detail::kPopcount8[m & 0xFF]; }

/// Sign of the permutation sorting the concatenation (a, b) of two index
/// sets, or 0 if they intersect.
inline int wedge_sign(IndexMask a, IndexMask b) {
  if (a & b) return 0;
  // Each element of b passes over the elements of a that are larger than it.
  int swaps = 0;
  for (int k = 0; b >> k; ++k)
    if (b >> k & 1) swaps += detail::kPopcount8[(a >> (k + 1)) & 0xFF];
  return (swaps & 1) ? -1 : 1;
}

/// Sparse antisymmetric coefficients: each entry is an index list (0-based,
/// any order, no repeats) and its coefficient.
using FormComponents = std::vector<std::pair<std::vector<int>, Complex>>;

/// Precomputed Clifford multiplication c_g for one metric.
class Quantizer {
 public:
  Quantizer(GammaSet gammas, const RealMatrix& g);

  const GammaSet& gammas() const { return gammas_; }
  const Vielbein& vielbein() const { return vielbein_; }
  int n() const { return gammas_.n; }
  int spinor_dim() const { return gammas_.spinor_dim(); }

  /// c(dx^{i1} ^ ... ^ dx^{ik}): the antisymmetrized product of the c(dx^i), which is the plain
  /// product whenever g^{-1} is diagonal.
  const SpinorMatrix& monomial(IndexMask mask) const { return monomials_[mask]; }
  /// c(dx^k) = sum_a gamma^a e_a^k.
  const SpinorMatrix& covector(int k) const { return monomials_[IndexMask{1} << k]; }
  SpinorMatrix covector(const RealVector& xi) const;

  SpinorMatrix quantize(const FormComponents& coeffs) const;
  /// Dense degree-k tensor (row-major, n^k entries); must be antisymmetric.
  SpinorMatrix quantize_tensor(int degree, std::span<const Complex> tensor) const;

  Complex supertrace(const SpinorMatrix& m) const;

 private:
  GammaSet gammas_;
  Vielbein vielbein_;
  std::vector<SpinorMatrix> monomials_;
};

Complex supertrace(const GammaSet& gammas, const SpinorMatrix& m);

}  // namespace loopchern
