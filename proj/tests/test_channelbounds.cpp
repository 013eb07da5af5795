#include <gtest/gtest.h>

#include <cmath>

#include "sptq/channelbounds.hpp"
#include "sptq/models.hpp"
#include "sptq/randmat.hpp"

using namespace sptq;

namespace {

cmat matpow(const cmat& M, int n) {
  cmat P = cmat::Identity(M.rows(), M.cols());
  for (int i = 0; i < n; ++i) P = P * M;
  return P;
}

}  // namespace

TEST(MinimalPolynomial, JordanBlockSize) {
  cmat M = cmat::Zero(4, 4);
  M(0, 0) = M(1, 1) = 0.5;
  M(0, 1) = 1;
  M(2, 2) = 0.2;
  M(3, 3) = 0.2;
  MinimalPolynomial m = minimal_polynomial(M);
  EXPECT_EQ(m.degree, 3);
  EXPECT_LT(m.residual, 1e-10);
  EXPECT_NEAR(spectral_radius(m), 0.5, 1e-12);
}

TEST(MinimalPolynomial, DiagonalizableRandom) {
  for (int i = 0; i < 10; ++i) {
    Stream rng(505, 1, i);
    cmat M = 0.2 * random_complex(rng, 5, 5);
    MinimalPolynomial m = minimal_polynomial(M);
    EXPECT_EQ(m.degree, 5);
    EXPECT_LT(m.residual, 1e-8);
  }
}

TEST(Blaschke, UnimodularOnUnitCircle) {
  MinimalPolynomial m;
  m.roots = {cd(0.3, 0.1), cd(-0.5, 0)};
  m.sizes = {2, 1};
  m.degree = 3;
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(std::abs(blaschke(std::polar(1.0, 0.37 * i), m)), 1, 1e-13);
}

TEST(Blaschke, InverseSupAboveOneInside) {
  MinimalPolynomial m;
  m.roots = {cd(0.3, 0.1)};
  m.sizes = {1};
  m.degree = 1;
  // |(z - a)/(1 - conj(a) z)| on |z| = r is minimised along the direction of a
  const double r = 0.6, a = std::abs(m.roots[0]);
  double expect = (1 - a * r) / (r - a);
  EXPECT_NEAR(inverse_blaschke_sup(m, r), expect, 1e-9);
}

TEST(ConvergenceBound, DominatesPowerNorm) {
  for (int i = 0; i < 15; ++i) {
    Stream rng(505, 2, i);
    cmat S = random_complex(rng, 4, 4);
    cmat M = S * (0.4 * rng.uniform(0.3, 1.0) * cmat::Identity(4, 4) + 0.1 * random_complex(rng, 4, 4)) * S.inverse();
    MinimalPolynomial m = minimal_polynomial(M);
    double mu = spectral_radius(m);
    if (mu >= 0.9) continue;
    BiorthEig e = general_eig(M);
    double C = spectral_norm(e.right) * spectral_norm(e.right.inverse());
    for (int l = int(std::ceil((1 + mu) / (1 - mu))) + 1; l < 40; l += 5) {
      double nrm = spectral_norm(matpow(M, l));
      EXPECT_LE(nrm, convergence_bound(l, m, C, BoundMode::WorstCase) * (1 + 1e-12));
    }
  }
}

TEST(ConvergenceBound, ValidityRange) {
  MinimalPolynomial m;
  m.roots = {cd(0.8, 0)};
  m.sizes = {1};
  m.degree = 1;
  try {
    convergence_bound(3, m, 1, BoundMode::WorstCase);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ValidityViolated);
  }
  EXPECT_NO_THROW(convergence_bound(10, m, 1, BoundMode::WorstCase));
}

TEST(Thm2, CoefficientFormula) {
  const int D = 2;
  const double mu = 0.3, D2 = 4;
  double c = 4 * std::exp(2.0) * D2 * (D2 + 1) * std::pow(mu, -3.0) * std::pow(1.3, 4.5) * std::pow(0.7, 1.5);
  EXPECT_NEAR(thm2_coefficient(D, mu), c, 1e-12 * c);
}

TEST(Thm2, ShiftInTimeMatchesVelocity) {
  BoundInputs in;
  in.D = 2;
  in.DU = 2;
  in.mu = 0.3;
  in.k0 = 1;
  in.l = 30;
  in.t = 0;
  double b0 = thm2_bound(in);
  in.t = 1;
  double b1 = thm2_bound(in);
  // one step: l - 2 k0 t shrinks by 2, and the exponential grows by mu^{-v}
  double v = 2 - std::log(2.0) / std::log(0.3);
  double expect = b0 * std::pow(28.0 / 30.0, 3) * std::exp(std::log(0.3) * -v);
  EXPECT_NEAR(b1, expect, 1e-10 * expect);
}

TEST(Thm2, ValidityViolated) {
  BoundInputs in;
  in.D = 2;
  in.mu = 0.5;
  in.l = 2;
  try {
    thm2_bound(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ValidityViolated);
  }
}

TEST(Thm2, NilpotentCase) {
  BoundInputs in;
  in.D = 2;
  in.mu = 0;
  in.l = 4;
  EXPECT_EQ(thm2_bound(in), 0);
  in.l = 3;
  EXPECT_THROW(thm2_bound(in), Error);
}

TEST(FiniteBound, RejectsBadGeometry) {
  BoundInputs in;
  in.D = 2;
  in.mu = 0.3;
  in.l = 10;
  in.L = 10;
  EXPECT_THROW(finite_thm_bound(in), Error);
}

TEST(ChannelDistance, DifferenceOfPowersAgreesWhereResolved) {
  TransferChannel ch = transfer_analysis(z2z2_mps(0.3, 0.2));
  for (int l = 0; l <= 6; ++l) {
    double direct = spectral_norm(matpow(ch.T, l) - ch.Tinf);
    EXPECT_NEAR(channel_distance(ch, l), direct, 1e-13);
  }
  EXPECT_THROW(channel_distance(ch, -1), Error);
}

TEST(ChannelDistance, PauliChannelIsMuToTheL) {
  TransferChannel ch = transfer_analysis(z2z2_mps(0.49, 0.49));
  for (int l = 1; l <= 12; ++l) EXPECT_NEAR(channel_distance(ch, l) / std::pow(0.02, l), 1, 1e-9);
}

TEST(ChannelDistance, BoundedByThm2) {
  for (auto [p, q] : {std::pair{0.3, 0.2}, std::pair{0.1, 0.45}}) {
    TransferChannel ch = transfer_analysis(z2z2_mps(p, q));
    BoundInputs in;
    in.D = 2;
    in.mu = ch.mu;
    for (int l = 4; l < 30; l += 3) {
      in.l = l;
      double b;
      try {
        b = thm2_bound(in);
      } catch (const Error&) {
        continue;
      }
      EXPECT_LE(std::sqrt(2.0 * in.D) * channel_distance(ch, l), b);
    }
  }
}

TEST(SupPowerNorm, AtLeastOne) {
  TransferChannel ch = transfer_analysis(z2z2_mps(0.3, 0.2));
  EXPECT_GE(sup_power_norm(ch.T, ch.Tinf), 1 - 1e-12);
}
