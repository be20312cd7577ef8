#include <random>

#include <gtest/gtest.h>

#include "loopchern/forms.hpp"

using namespace loopchern;

namespace {

using FormQ = TrigPolyForm<GaussQ>;

// Random angular-coordinate form of fixed degree on T^n.
FormQ random_form(std::mt19937_64& rng, int n, int degree, int terms = 3) {
  std::uniform_int_distribution<int> mode(-2, 2), coeff(-3, 3), idx(0, n - 1);
  FormQ f(n);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> m(n), indices;
    for (int& x : m) x = mode(rng);
    while (static_cast<int>(indices.size()) < degree) {
      const int k = idx(rng);
      if (std::find(indices.begin(), indices.end(), k) == indices.end()) indices.push_back(k);
    }
    f += FormQ::monomial(n, m, indices, GaussQ(GaussInt(coeff(rng), coeff(rng))));
  }
  return f;
}

EquivariantForm<GaussQ> random_equivariant(std::mt19937_64& rng, int n, int degree) {
  // theta' has degree `degree`, theta'' has form degree `degree + 1`.
  FormQ p = degree >= 0 && degree <= n ? random_form(rng, n, degree) : FormQ(n);
  FormQ q = degree + 1 <= n ? random_form(rng, n, degree + 1) : FormQ(n);
  return {p, q};
}

}  // namespace

TEST(Forms, MonomialReordersIndicesWithSign) {
  const auto a = TrigPolyForm<Complex>::monomial(2, {0, 0}, {1, 0}, 1.0);
  const auto b = TrigPolyForm<Complex>::monomial(2, {0, 0}, {0, 1}, -1.0);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(TrigPolyForm<Complex>::monomial(2, {0, 0}, {1, 1}, 1.0).empty());
}

TEST(Forms, DerivativeOfPlaneWaveInPhysicalCoordinates) {
  // d e^{2 pi i (x1 - 2 x2)} = 2 pi i e^{..} dx1 - 4 pi i e^{..} dx2
  const auto f = TrigPolyForm<Complex>::monomial(2, {1, -2}, {}, 1.0);
  const auto df = exterior_d(f);
  const double tp = 2.0 * std::numbers::pi;
  const auto expected = TrigPolyForm<Complex>::monomial(2, {1, -2}, {0}, Complex(0, tp)) +
                        TrigPolyForm<Complex>::monomial(2, {1, -2}, {1}, Complex(0, -2 * tp));
  ASSERT_EQ(df.terms().size(), 2u);
  for (const auto& [k, c] : expected.terms()) EXPECT_NEAR(std::abs(df.terms().at(k) - c), 0.0, 1e-14);
}

TEST(Forms, ExteriorDerivativeSquaresToZero) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + 2 * (trial % 2);
    const auto f = random_form(rng, n, trial % n);
    EXPECT_TRUE(exterior_d(exterior_d(f)).empty());
  }
}

TEST(Forms, GradedLeibnizRule) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4, p = trial % 3, q = (trial / 3) % 2;
    const auto a = random_form(rng, n, p), b = random_form(rng, n, q);
    const auto lhs = exterior_d(wedge(a, b));
    const auto rhs = wedge(exterior_d(a), b) + wedge(a, exterior_d(b)).scaled(GaussQ(p % 2 ? -1 : 1));
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Forms, WedgeIsGradedCommutative) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = trial % 3, q = (trial / 3) % 3;
    const auto a = random_form(rng, 4, p), b = random_form(rng, 4, q);
    EXPECT_EQ(wedge(a, b), wedge(b, a).scaled(GaussQ((p * q) % 2 ? -1 : 1)));
  }
}

TEST(Forms, DgaDifferentialSquaresToZero) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const auto th = random_equivariant(rng, 2, trial % 3 - 1 < 0 ? 0 : trial % 3);
    const auto dd = dga_differential(dga_differential(th));
    EXPECT_TRUE(dd.prime.empty() && dd.dblprime.empty());
  }
}

TEST(Forms, DgaDifferentialIsADerivation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int p = trial % 3, q = (trial / 3) % 2;
    const auto a = random_equivariant(rng, 4, p), b = random_equivariant(rng, 4, q);
    const auto lhs = dga_differential(multiply(a, b));
    auto r1 = multiply(dga_differential(a), b), r2 = multiply(a, dga_differential(b));
    if (p % 2) {
      r2.prime = -r2.prime;
      r2.dblprime = -r2.dblprime;
    }
    EXPECT_EQ(lhs.prime, r1.prime + r2.prime);
    EXPECT_EQ(lhs.dblprime, r1.dblprime + r2.dblprime);
  }
}

TEST(Forms, VarthetaSquaresToZeroInProducts) {
  // (vartheta a'')(vartheta b'') = 0
  EquivariantForm<GaussQ> a(FormQ(2), FormQ::monomial(2, {0, 0}, {0}, GaussQ(1)));
  EXPECT_TRUE(multiply(a, a).prime.empty());
  EXPECT_TRUE(multiply(a, a).dblprime.empty());
}

TEST(Forms, IntegrateTopPicksConstantVolumeCoefficient) {
  const auto f = TrigPolyForm<Complex>::monomial(2, {0, 0}, {1, 0}, 3.0) +
                 TrigPolyForm<Complex>::monomial(2, {1, 0}, {0, 1}, 5.0) +
                 TrigPolyForm<Complex>::monomial(2, {0, 0}, {0}, 7.0);
  EXPECT_EQ(integrate_top(f), Complex(-3.0));
}

TEST(Forms, ExactIntegerModesStayInRange) {
  Mode a{};
  a[0] = 120;
  Mode b{};
  b[0] = 20;
  EXPECT_THROW(add_modes(a, b), OverflowError);
}
