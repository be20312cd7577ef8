#pragma once

// Independent oracle for the current: operators are assembled on the truncated
// Fourier x spinor space {xi = 2 pi (k + eps) : |k_i + eps_i| <= cutoff + 1/2}
// and the simplex integrals are done by iterated Gauss-Legendre quadrature.

#include "loopchern/chain.hpp"
#include "loopchern/torus.hpp"

namespace loopchern {

struct BruteForceOptions {
  int mode_cutoff = 3;
  int quad_points = 32;     // Gauss-Legendre nodes per axis
  int grading = 2;          // exponent of the sigmoidal node clustering (1 = none)
  double budget = 2e9;      // cap on elementary operations
};

struct BruteForceResult {
  Complex value;
  int space_dim = 0;
};

BruteForceResult chern_brute_force(const TorusGeometry& geom, const GammaSet& gammas, const Chain<Complex>& chain,
                                   const BruteForceOptions& opts = {});

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int points, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace loopchern
