#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "loopchern/errors.hpp"
#include "loopchern/simplex.hpp"

using namespace loopchern;

namespace {

double S(std::vector<double> a) { return simplex_heat_integral(a); }

// Divided differences of exp(-x) at well-separated nodes, by the textbook recursion in long double.
long double divided_difference(const std::vector<long double>& x) {
  std::vector<long double> f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) f[i] = std::exp(-x[i]);
  for (std::size_t k = 1; k < x.size(); ++k)
    for (std::size_t i = x.size() - 1; i >= k; --i) f[i] = (f[i] - f[i - 1]) / (x[i] - x[i - k]);
  return f.back();
}

}  // namespace

TEST(Simplex, ZeroExponentsGiveSimplexVolume) {
  EXPECT_DOUBLE_EQ(S({0.0}), 1.0);
  EXPECT_NEAR(S({0, 0}), 1.0, 1e-15);
  EXPECT_NEAR(S({0, 0, 0}), 0.5, 1e-15);
  EXPECT_NEAR(S({0, 0, 0, 0}), 1.0 / 6.0, 1e-15);
}

TEST(Simplex, ClosedFormsForOneAndTwoSteps) {
  EXPECT_NEAR(S({3.0}), std::exp(-3.0), 1e-16);
  EXPECT_NEAR(S({1.0, 4.0}), (std::exp(-1.0) - std::exp(-4.0)) / 3.0, 1e-15);
  // Coincident: the derivative, and half the second derivative.
  EXPECT_NEAR(S({2.5, 2.5}), std::exp(-2.5), 1e-15);
  EXPECT_NEAR(S({2.5, 2.5, 2.5}), std::exp(-2.5) / 2.0, 1e-15);
}

TEST(Simplex, MatchesDividedDifferencesOnSeparatedNodes) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int M = 1 + trial % 3;
    std::vector<double> a(M + 1);
    std::vector<long double> x(M + 1);
    // Distinct nodes at least 1/2 apart, in shuffled order.
    double v = std::round(u(rng));
    for (int i = 0; i <= M; ++i) {
      a[i] = v;
      v += 0.5 + std::round(u(rng)) / 4.0;
    }
    std::shuffle(a.begin(), a.end(), rng);
    for (int i = 0; i <= M; ++i) x[i] = a[i];
    const long double dd = divided_difference(x) * (M % 2 ? -1.0L : 1.0L);
    EXPECT_NEAR(S(a) / static_cast<double>(dd), 1.0, 1e-11);
  }
}

TEST(Simplex, SymmetricInExponents) {
  EXPECT_NEAR(S({0.3, 5.0, 1.7}), S({5.0, 1.7, 0.3}), 1e-16);
}

TEST(Simplex, ContinuousAcrossNearCoincidence) {
  const double a = 7.25;
  for (double h : {1e-3, 1e-6, 1e-9, 1e-12}) {
    // e^{-a} (1 - e^{-h}) / h, and e^{-a} (e^{-h} - 1 + h) / h^2 as a series.
    const double two = -std::expm1(-h) / h;
    const double three = 0.5 - h / 6.0 + h * h / 24.0 - h * h * h / 120.0 + h * h * h * h / 720.0;
    EXPECT_NEAR(S({a, a + h}) / (std::exp(-a) * two), 1.0, 1e-13);
    EXPECT_NEAR(S({a, a + h, a}) / (std::exp(-a) * three), 1.0, 1e-13);
  }
}

TEST(Simplex, NegativeExponentRejected) { EXPECT_THROW(S({-1.0, 0.0}), ContractError); }
