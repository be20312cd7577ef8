#include <gtest/gtest.h>

#include "loopchern/clifford.hpp"
#include "loopchern/errors.hpp"

using namespace loopchern;

namespace {

double dist(const SpinorMatrix& a, const SpinorMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

RealMatrix sheared_metric() {
  RealMatrix g(2, 2);
  g << 2.0, 0.7, 0.7, 1.5;
  return g;
}

}  // namespace

class GammaDims : public ::testing::TestWithParam<int> {};

TEST_P(GammaDims, CliffordRelations) {
  const int n = GetParam();
  const GammaSet gs = build_gammas(n);
  const int d = 1 << (n / 2);
  ASSERT_EQ(gs.spinor_dim(), d);
  const SpinorMatrix I = SpinorMatrix::Identity(d, d);
  for (int a = 0; a < n; ++a) {
    EXPECT_LT(dist(gs.gammas[a].adjoint(), -gs.gammas[a]), 1e-15);
    for (int b = 0; b < n; ++b) {
      const SpinorMatrix ac = gs.gammas[a] * gs.gammas[b] + gs.gammas[b] * gs.gammas[a];
      EXPECT_LT(dist(ac, (a == b ? -2.0 : 0.0) * I), 1e-15);
    }
    EXPECT_LT(dist(gs.chirality * gs.gammas[a], -gs.gammas[a] * gs.chirality), 1e-15);
  }
  EXPECT_LT(dist(gs.chirality * gs.chirality, I), 1e-15);
  EXPECT_LT(dist(gs.chirality.adjoint(), gs.chirality), 1e-15);
}

TEST_P(GammaDims, KappaFromChirality) {
  // With w = g1..gn: Str(w) = tr(Gamma w) = i^{n/2} tr(w^2), and w^2 = (-1)^{n(n-1)/2} (-1)^n.
  const int n = GetParam();
  const GammaSet gs = build_gammas(n);
  const int d = gs.spinor_dim();
  const double sq_sign = ((n * (n - 1) / 2 + n) % 2) ? -1.0 : 1.0;
  const Complex ipow = std::pow(Complex(0, 1), n / 2);
  EXPECT_LT(std::abs(gs.kappa() - Complex(d) * ipow * sq_sign), 1e-12);
  EXPECT_LT(std::abs(build_gammas(n, -1).kappa() + gs.kappa()), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Even, GammaDims, ::testing::Values(2, 4, 6, 8));

TEST(Clifford, KappaOnTheTwoTorus) { EXPECT_LT(std::abs(build_gammas(2).kappa() - Complex(0, -2)), 1e-15); }

TEST(Clifford, OddOrOutOfRangeDimensionsRejected) {
  EXPECT_THROW(build_gammas(3), DimensionError);
  EXPECT_THROW(build_gammas(10), DimensionError);
}

TEST(Clifford, VielbeinIsLowerCholeskyOfInverseMetric) {
  const RealMatrix g = sheared_metric();
  const Vielbein v(g);
  EXPECT_LT((v.frame() * v.frame().transpose() - g.inverse()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(v.frame()(0, 1), 0.0);
  EXPECT_NEAR(v.det_metric(), g.determinant(), 1e-14);
}

TEST(Clifford, CovectorsSatisfyMetricAnticommutator) {
  const RealMatrix g = sheared_metric();
  const Quantizer q(build_gammas(2), g);
  const RealMatrix ginv = g.inverse();
  RealVector xi(2), eta(2);
  xi << 1.3, -0.4;
  eta << 0.2, 2.1;
  const SpinorMatrix a = q.covector(xi), b = q.covector(eta);
  const double ip = xi.dot(ginv * eta);
  EXPECT_LT(dist(a * b + b * a, -2.0 * ip * SpinorMatrix::Identity(2, 2)), 1e-14);
}

TEST(Clifford, TwoFormIsAntisymmetrizedProduct) {
  const Quantizer q(build_gammas(2), sheared_metric());
  const SpinorMatrix c1 = q.covector(0), c2 = q.covector(1);
  EXPECT_LT(dist(q.monomial(0b11), 0.5 * (c1 * c2 - c2 * c1)), 1e-14);
}

TEST(Clifford, FourFormIsAntisymmetrizedProduct) {
  RealMatrix g(4, 4);
  g << 3, 0.5, 0.2, 0.1, 0.5, 2, 0.3, 0, 0.2, 0.3, 1.5, 0.4, 0.1, 0, 0.4, 1;
  const Quantizer q(build_gammas(4), g);
  // Sum over permutations of c(dx^{p1}) c(dx^{p2}) c(dx^{p3}) with sign, for the indices {0, 2, 3}.
  std::array<int, 3> p{0, 2, 3};
  SpinorMatrix sum = SpinorMatrix::Zero(4, 4);
  int count = 0;
  do {
    int inv = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) inv += p[i] > p[j];
    sum += (inv % 2 ? -1.0 : 1.0) * q.covector(p[0]) * q.covector(p[1]) * q.covector(p[2]);
    ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  EXPECT_LT(dist(q.monomial(0b1101), sum / double(count)), 1e-13);
}

TEST(Clifford, QuantizeMatchesMonomials) {
  const Quantizer q(build_gammas(2), sheared_metric());
  const SpinorMatrix m = q.quantize({{{1, 0}, Complex(2.0)}, {{0}, Complex(0, 1)}});
  EXPECT_LT(dist(m, -2.0 * q.monomial(0b11) + Complex(0, 1) * q.covector(0)), 1e-14);
  const std::array<Complex, 4> t{0.0, 1.0, -1.0, 0.0};
  // Components on sorted tuples: t_{12} = 1 is dx1 ^ dx2.
  EXPECT_LT(dist(q.quantize_tensor(2, t), q.monomial(0b11)), 1e-14);
}

TEST(Clifford, SupertraceOfIdentityVanishes) {
  for (int n : {2, 4}) {
    const GammaSet gs = build_gammas(n);
    EXPECT_LT(std::abs(supertrace(gs, SpinorMatrix::Identity(gs.spinor_dim(), gs.spinor_dim()))), 1e-15);
  }
}

TEST(Clifford, WedgeSignCountsTranspositions) {
  EXPECT_EQ(wedge_sign(0b01, 0b10), 1);
  EXPECT_EQ(wedge_sign(0b10, 0b01), -1);
  EXPECT_EQ(wedge_sign(0b110, 0b001), 1);
  EXPECT_EQ(wedge_sign(0b011, 0b010), 0);
}

TEST(Clifford, NonPositiveMetricRejected) {
  RealMatrix g(2, 2);
  g << 1, 2, 2, 1;
  EXPECT_THROW(require_spd(g, "test"), DimensionError);
  EXPECT_THROW(Quantizer(build_gammas(2), g), DimensionError);
}
