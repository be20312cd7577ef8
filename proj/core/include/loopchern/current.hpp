#pragma once

// The current J^g on chains over a flat torus:
//
//   J(theta_0, ..., theta_N) = sum_{M=1}^{N} (-1)^M sum_{I in P_{M,N}}
//       int_{simplex} Str( c(theta_0') e^{-t_1 D^2} F(theta_{I_1}) e^{-(t_2-t_1) D^2} ... F(theta_{I_M}) e^{-(1-t_M) D^2} ),
//
// F(theta) = c(d theta') - [D, c(theta')] - c(theta''),
// F(theta_1, theta_2) = (-1)^{|theta_1'|} (c(theta_1' theta_2') - c(theta_1') c(theta_2')),
// F of three or more arguments vanishes. For N = 0 the value is Str(c(theta_0') e^{-D^2}).
// Everything is diagonalized by Fourier modes: a term of mode m shifts xi to xi + 2 pi m.

#include <cstdint>
#include <span>
#include <vector>

#include "loopchern/chain.hpp"
#include "loopchern/chain_json.hpp"
#include "loopchern/torus.hpp"

namespace loopchern {

struct Composition {
  std::vector<int> blocks;  // consecutive block sizes, summing to N
  int M() const { return static_cast<int>(blocks.size()); }
  int N() const;
};

/// All 2^{N-1} ordered interval decompositions of {1..N}, ordered by M and
/// then lexicographically; optionally only those with blocks of size <= 2.
std::vector<Composition> enumerate_compositions(int N, bool max_part_two = false);

/// Insertion operator for one block of basis elements, mapping mode xi to xi + shift.
class ModeOperator {
 public:
  ModeOperator() = default;

  const Mode& mode_shift() const { return shift_; }
  RealVector shift(int n) const;  // 2 pi m
  bool is_zero() const { return zero_; }
  /// Matrix of the operator from the spinor fibre at xi to the one at xi + shift.
  SpinorMatrix matrix(const Quantizer& q, const RealVector& xi) const;
  /// Constant part and commutator data: matrix(xi) = constant - (D_{xi+s} C - sign C D_xi).
  const SpinorMatrix& constant() const { return constant_; }
  const SpinorMatrix& commuted() const { return commuted_; }
  int super_sign() const { return sign_; }
  bool has_commutator() const { return commutator_; }
  /// Certified growth bound ||matrix(xi)|| <= alpha + beta (|xi|_g + |xi + s|_g).
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  friend ModeOperator f_operator(const Quantizer& q, std::span<const BasisElem> block);

 private:
  Mode shift_{};
  SpinorMatrix constant_;
  SpinorMatrix commuted_;
  int sign_ = 1;
  bool commutator_ = false;
  bool zero_ = false;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

/// F for a block of one or two basis elements (coefficient 1, physical coordinates).
ModeOperator f_operator(const Quantizer& q, std::span<const BasisElem> block);

/// F for a block of one or two forms, expanded into Fourier terms; each entry
/// carries the coefficient product of its terms.
std::vector<std::pair<ModeOperator, Complex>> f_operator(const Quantizer& q,
                                                         const std::vector<EquivariantForm<Complex>>& block);

struct EvaluationOptions {
  double tol = 1e-14;           // certified bound on the discarded lattice tail
  double budget = 1e8;          // cap on elementary trace terms
  bool max_part_two = true;     // skip compositions with a block of size >= 3 (they vanish)
};

struct Evaluation {
  Complex value;
  double tail_bound = 0.0;
  double radius = 0.0;
  std::size_t modes = 0;
  std::uint64_t trace_terms = 0;
};

/// Chains are in physical coordinates (use to_float for exact chains).
Evaluation evaluate(const TorusGeometry& geom, const GammaSet& gammas, const Chain<Complex>& chain,
                    const EvaluationOptions& opts = {});
Complex evaluate(const TorusGeometry& geom, const GammaSet& gammas, const Chain<Complex>& chain, double tol);

struct LocalizationRecord {
  Complex lhs;
  Complex rhs;
  double abs_diff = 0.0;
  double tail_bound = 0.0;
};

/// lhs = J(c), rhs = sum_words coeff * integral of restrict_to_constants(word)
/// (the A-hat form is 1 on flat tori). Requires delta(c) = 0 exactly.
LocalizationRecord localization_check(const TorusGeometry& geom, const GammaSet& gammas,
                                      const Chain<GaussQ>& cocycle, const EvaluationOptions& opts = {});

/// Localization right-hand side for a physical-coordinate chain.
Complex localization_rhs(const Chain<Complex>& chain);

}  // namespace loopchern
