#include <cmath>

#include <gtest/gtest.h>

#include "loopchern/errors.hpp"
#include "loopchern/metric.hpp"

using namespace loopchern;

namespace {

RealMatrix diag2(double a, double b) {
  RealMatrix g = RealMatrix::Zero(2, 2);
  g(0, 0) = a;
  g(1, 1) = b;
  return g;
}

RealMatrix sheared() {
  RealMatrix g(2, 2);
  g << 1.3, 0.4, 0.4, 0.8;
  return g;
}

double maxabs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

BasisElem elem(std::vector<int> mode, std::uint8_t mask, Part part = Part::prime) {
  mode.resize(kMaxDimension, 0);
  BasisElem e;
  e.mode = make_mode_array(mode);
  e.mask = mask;
  e.part = part;
  return e;
}

}  // namespace

TEST(Metric, FamiliesInterpolateEndpoints) {
  const RealMatrix g0 = RealMatrix::Identity(2, 2), g1 = diag2(4, 1);
  const auto geo = log_geodesic_family(g0, g1);
  EXPECT_LT((geo.g(0.0) - g0).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((geo.g(1.0) - g1).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((geo.g(0.5) - diag2(2, 1)).cwiseAbs().maxCoeff(), 1e-13);  // geometric mean
  const auto lin = linear_family(g0, g1);
  EXPECT_LT((lin.g(0.5) - diag2(2.5, 1)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(validate_family(geo, uniform_samples(11)), 1e-8);
  EXPECT_LT(validate_family(make_family("linear", sheared(), g1), uniform_samples(5)), 1e-8);
  EXPECT_THROW(make_family("spline", g0, g1), ContractError);
}

TEST(Metric, UniformSamples) {
  const auto s = uniform_samples(11);
  ASSERT_EQ(s.size(), 11u);
  EXPECT_EQ(s.front(), 0.0);
  EXPECT_EQ(s.back(), 1.0);
  EXPECT_NEAR(s[3], 0.3, 1e-15);
}

TEST(Metric, TransportIsAnIsometricSpinLift) {
  const RealMatrix g0 = sheared(), gt = diag2(4, 1);
  const GammaSet gs = build_gammas(2);
  const Transport tr = build_transport(g0, gt, gs);
  EXPECT_LT((tr.A - gt.inverse() * g0).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((tr.rotation.transpose() * tr.rotation - RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_NEAR(tr.rotation.determinant(), 1.0, 1e-13);
  EXPECT_LT(maxabs(tr.beta.adjoint() * tr.beta - SpinorMatrix::Identity(2, 2)), 1e-13);
  EXPECT_NEAR(tr.rho, std::sqrt(g0.determinant() / gt.determinant()), 1e-14);
  EXPECT_LT(intertwining_residual(tr, g0, gt, gs), 1e-13);
  // A'^{1/2} maps the g_t-norm of covectors to the g_0-norm.
  RealVector xi(2);
  xi << 0.7, -1.9;
  const RealVector p = tr.A_prime_sqrt * xi;
  EXPECT_NEAR(p.dot(g0.inverse() * p), xi.dot(gt.inverse() * xi), 1e-12);
}

TEST(Metric, TransportAlongFamilyIsContinuous) {
  const auto fam = log_geodesic_family(RealMatrix::Identity(2, 2), diag2(4, 1));
  const GammaSet gs = build_gammas(2);
  const auto trs = transport_along(fam, gs, uniform_samples(21));
  ASSERT_EQ(trs.size(), 21u);
  EXPECT_LT(maxabs(trs.front().beta - SpinorMatrix::Identity(2, 2)), 1e-14);
  for (std::size_t i = 1; i < trs.size(); ++i) EXPECT_LT(maxabs(trs[i].beta - trs[i - 1].beta), 0.2);
}

TEST(Metric, PulledDiracIsUnitarilyEquivalent) {
  const auto fam = linear_family(sheared(), diag2(4, 1));
  const GammaSet gs = build_gammas(2);
  const double t = 0.6;
  const TorusGeometry geom_t(fam.g(t), {0.5, 0.0});
  const Transport tr = build_transport(fam.g(0), fam.g(t), gs);
  const auto mode = make_mode(geom_t, {1, -2});
  const SpinorMatrix Q = pulled_dirac_mode(tr, geom_t, gs, mode);
  EXPECT_LT(maxabs(Q * Q - mode.norm_sq * SpinorMatrix::Identity(2, 2)), 1e-11);
  EXPECT_LT(maxabs(Q - tr.beta * dirac_mode(geom_t, gs, mode) * tr.beta.adjoint()), 1e-12);
}

TEST(Metric, PulledDiracDerivativeMatchesFiniteDifference) {
  const auto fam = log_geodesic_family(sheared(), diag2(4, 1));
  const GammaSet gs = build_gammas(2);
  const std::vector<double> eps{0.5, 0.5};
  RealVector xi(2);
  xi << 2.0 * M_PI * 1.5, 2.0 * M_PI * -0.5;
  for (double t : {0.2, 0.5, 0.8}) {
    const double h = 1e-5;
    const Transport mid = build_transport(fam.g(0), fam.g(t), gs);
    auto Q = [&](double s) {
      const Transport tr = build_transport(fam.g(0), fam.g(s), gs, &mid);
      const TorusGeometry geom(fam.g(s), eps);
      LatticeMode m;
      m.xi = xi;
      m.norm_sq = geom.norm_sq(xi);
      return SpinorMatrix(pulled_dirac_mode(tr, geom, gs, m));
    };
    const SpinorMatrix fd = (Q(t + h) - Q(t - h)) / (2.0 * h);
    EXPECT_LT(maxabs(pulled_dirac_derivative(fam, t, gs, xi) - fd), 1e-7 * (1.0 + maxabs(fd))) << "t=" << t;
  }
}

TEST(Metric, LemmaRatioScalarCase) {
  // |s| / sqrt(s^2 + tau + 1) / sqrt(max(0, -tau) + 1) with s = 3, tau = -4.
  Eigen::MatrixXcd S(1, 1), T(1, 1);
  S(0, 0) = 3.0;
  T(0, 0) = -4.0;
  EXPECT_NEAR(lemma_ratio(S, T), 3.0 / std::sqrt(30.0), 1e-15);
  T(0, 0) = 0.0;
  EXPECT_NEAR(lemma_ratio(S, T), 3.0 / std::sqrt(10.0), 1e-15);
}

TEST(Metric, LemmaBoundAndDeterminism) {
  const auto a = lemma_bound_test(8, 8, 100, 99), b = lemma_bound_test(8, 8, 100, 99);
  EXPECT_LE(a.max_ratio, 1.0 + 1e-12);
  EXPECT_GT(a.max_ratio, 0.5);
  EXPECT_EQ(a.max_ratio, b.max_ratio);
  EXPECT_EQ(a.mean_ratio, b.mean_ratio);
  EXPECT_LE(a.max_dim, 8);
  EXPECT_EQ(lemma_bound_test(4, 4, 0, 1).trials, 0);
}

TEST(Metric, H1TraceIsTheSpinorThetaSum) {
  const auto fam = log_geodesic_family(RealMatrix::Identity(2, 2), diag2(4, 1));
  const GammaSet gs = build_gammas(2);
  for (double e : {0.0, 0.5}) {
    const auto rep = h1_check(fam, {e, e}, gs, uniform_samples(5));
    for (const auto& s : rep.samples) {
      double direct = 0.0;
      const TorusGeometry geom(fam.g(s.t), {e, e});
      for (int a = -30; a <= 30; ++a)
        for (int b = -30; b <= 30; ++b) direct += std::exp(-make_mode(geom, {a, b}).norm_sq);
      EXPECT_NEAR(s.trace / (2.0 * direct), 1.0, 1e-12);
      EXPECT_NEAR(s.theta / (2.0 * direct), 1.0, 1e-12);
    }
    EXPECT_TRUE(rep.dominated);
    EXPECT_EQ(rep.equality, e == 0.0);
  }
}

TEST(Metric, H2VanishesOnAConstantFamily) {
  const auto rep = h2_check(constant_family(sheared()), {0.5, 0.5}, build_gammas(2), uniform_samples(3), 4.0);
  EXPECT_LT(rep.sup, 1e-12);
  EXPECT_LT(rep.max_lr_diff, 1e-12);
}

TEST(Metric, H2SymbolLimitOnTheDefaultFamily) {
  // Qdot = i c(dA^{1/2}^T xi) with A^{1/2} = diag(2^{-t}, 1): |Qdot| / |xi| -> log 2 along dx^1.
  const auto fam = log_geodesic_family(RealMatrix::Identity(2, 2), diag2(4, 1));
  const auto rep = h2_check(fam, {0.5, 0.5}, build_gammas(2), uniform_samples(3), 4.0);
  EXPECT_NEAR(rep.sup, std::log(2.0), 1e-6);
}

TEST(Metric, PullbackRoundTrip) {
  IntMatrix O(2, 2), Oinv(2, 2);
  O << 1, 2, 0, 1;
  Oinv << 1, -2, 0, 1;
  const auto c = Chain<Complex>::from_word(2, Word{elem({1, -1}, 0b01), elem({-1, 1}, 0b10, Part::dblprime)},
                                           Complex(0.5, 2.0));
  const auto back = pullback(pullback(c, O), Oinv);
  ASSERT_EQ(back.size(), c.size());
  EXPECT_EQ(back.terms()[0].word, c.terms()[0].word);
  EXPECT_LT(std::abs(back.terms()[0].coeff - c.terms()[0].coeff), 1e-14);
  const auto off = pullback_offsets({0.5, 0.0}, O);
  EXPECT_EQ(off, (std::vector<double>{0.5, 0.0}));  // O^T eps = (1/2, 1) = (1/2, 0) mod 1
}

TEST(Metric, DiffeomorphismInvarianceOnAShear) {
  IntMatrix O(2, 2);
  O << 1, 0, 1, 1;
  const TorusGeometry geom(sheared(), {0.5, 0.5});
  const auto c = Chain<Complex>::from_word(2, Word{elem({0, 1}, 0b01), elem({0, -1}, 0b10, Part::dblprime)});
  const auto rep = diffeo_invariance_check(geom, build_gammas(2), O, c);
  EXPECT_LT(rep.abs_diff, 1e-12 * std::max(1.0, std::abs(rep.value_g)));
  EXPECT_GT(std::abs(rep.value_g), 1e-10);
  IntMatrix bad(2, 2);
  bad << 2, 0, 0, 1;
  EXPECT_THROW(diffeo_invariance_check(geom, build_gammas(2), bad, c), ContractError);
}

TEST(Metric, SweepRejectsNonCocycles) {
  const auto fam = log_geodesic_family(RealMatrix::Identity(2, 2), diag2(4, 1));
  const auto not_closed = Chain<GaussQ>::from_word(2, Word{elem({1, 0}, 0)});
  const auto control = Chain<Complex>::from_word(2, Word{elem({0, 0}, 0b11)});
  EXPECT_THROW(metric_independence_sweep(fam, {0.5, 0.5}, build_gammas(2), {not_closed}, control, uniform_samples(3), 1e-7),
               ContractError);
}
