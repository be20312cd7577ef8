#include <algorithm>
#include <cmath>
#include <random>

#include "loopchern/metric.hpp"

namespace loopchern {

double lemma_ratio(const Eigen::MatrixXcd& S, const Eigen::MatrixXcd& T) {
  const Eigen::Index d1 = S.cols();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> et(T);
  const double lambda = std::max(0.0, -et.eigenvalues().minCoeff());
  const Eigen::MatrixXcd m = S.adjoint() * S + T + Eigen::MatrixXcd::Identity(d1, d1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const Eigen::MatrixXcd r =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::MatrixXcd sr = S * r;
  const double norm = sr.size() ? Eigen::JacobiSVD<Eigen::MatrixXcd>(sr).singularValues()(0) : 0.0;
  return norm / std::sqrt(lambda + 1.0);
}

LemmaReport lemma_bound_test(int max_dim1, int max_dim2, int trials, std::uint64_t seed) {
  if (max_dim1 < 1 || max_dim2 < 1 || max_dim1 > 64 || max_dim2 > 64)
    throw ContractError("lemma_bound_test: dimensions must lie in 1..64");
  if (trials < 0) throw ContractError("lemma_bound_test: negative trial count");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> pick1(1, max_dim1), pick2(1, max_dim2);
  std::uniform_real_distribution<double> scale(0.0, 3.0);

  LemmaReport rep;
  rep.trials = trials;
  rep.min_ratio = trials ? INFINITY : 0.0;
  double sum = 0.0;
  for (int k = 0; k < trials; ++k) {
    const int d1 = pick1(rng), d2 = pick2(rng);
    rep.max_dim = std::max({rep.max_dim, d1, d2});
    const double ss = std::exp(scale(rng)) - 1.0, ts = std::exp(scale(rng)) - 1.0;
    Eigen::MatrixXcd S(d2, d1), T0(d1, d1);
    for (int i = 0; i < d2; ++i)
      for (int j = 0; j < d1; ++j) S(i, j) = ss * Complex(normal(rng), normal(rng));
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) T0(i, j) = ts * Complex(normal(rng), normal(rng));
    T0 = (0.5 * (T0 + T0.adjoint())).eval();
    // Smallest shift making S*S + T positive semidefinite.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S.adjoint() * S + T0);
    const double c = std::max(0.0, -es.eigenvalues().minCoeff());
    const Eigen::MatrixXcd T = T0 + c * Eigen::MatrixXcd::Identity(d1, d1);
    const double r = lemma_ratio(S, T);
    rep.max_ratio = std::max(rep.max_ratio, r);
    rep.min_ratio = std::min(rep.min_ratio, r);
    sum += r;
  }
  rep.mean_ratio = trials ? sum / trials : 0.0;
  return rep;
}

}  // namespace loopchern
