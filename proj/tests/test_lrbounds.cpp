#include <gtest/gtest.h>

#include <cmath>

#include "sptq/lrbounds.hpp"
#include "sptq/models.hpp"

using namespace sptq;

TEST(GroupVelocity, SshMaximum) {
  VelocityReport r = group_velocities(ssh(1, 0.5));
  EXPECT_NEAR(r.v_max, 0.5, 1e-6);
  EXPECT_NEAR(r.v_mr, 1.0, 1e-6);
}

TEST(GroupVelocity, MatchesDispersionDerivative) {
  // eps(k) = +-sqrt(J1^2 + J2^2 + 2 J1 J2 cos k)
  const double J1 = 0.8, J2 = 0.3;
  VelocityReport r = group_velocities(ssh(J1, J2), 256);
  for (size_t i = 0; i < r.k.size(); i += 17) {
    double k = r.k[i];
    double e = std::sqrt(J1 * J1 + J2 * J2 + 2 * J1 * J2 * std::cos(k));
    double v = J1 * J2 * std::sin(k) / e;
    double hi = std::max(r.vg[i][0], r.vg[i][1]), lo = std::min(r.vg[i][0], r.vg[i][1]);
    EXPECT_NEAR(hi, std::abs(v), 1e-6);
    EXPECT_NEAR(lo, -std::abs(v), 1e-6);
  }
}

TEST(GroupVelocity, PhsShiftsMaximumNotRelative) {
  VelocityReport a = group_velocities(ssh(1, 0.5)), b = group_velocities(ssh(1, 0.5, 0.5));
  EXPECT_NEAR(a.v_mr, b.v_mr, 1e-6);
  EXPECT_GT(std::abs(a.v_max - b.v_max), 0.1);
}

TEST(LRConstants, NumericMatchesOperatorNormClosedForm) {
  LRConstants c = lr_constants(ssh(0.5, 1), ssh(1, 0.5), 0.6);
  double co = ssh_analytic_C(0.5, 1, 1, 0.5, 0.6, CVariant::OperatorNorm, 1e-10);
  EXPECT_NEAR(c.C, co, 1e-7 * co);
  EXPECT_TRUE(c.strip_valid);
}

TEST(LRConstants, PrintedClosedFormValue) {
  EXPECT_NEAR(ssh_analytic_C(0.5, 1, 1, 0.5, 0.6, CVariant::Printed), 12.225, 0.01);
}

TEST(LRConstants, PrintedDominatesOperatorNorm) {
  for (double kap : {0.1, 0.3, 0.5, 0.65}) {
    double p = ssh_analytic_C(0.5, 1, 1, 0.5, kap, CVariant::Printed);
    double o = ssh_analytic_C(0.5, 1, 1, 0.5, kap, CVariant::OperatorNorm);
    EXPECT_GE(p, o);
  }
}

TEST(LRConstants, SmallKappaFiniteAndContinuous) {
  double prev = ssh_analytic_C(0.5, 1, 1, 0.5, 1e-3, CVariant::Printed);
  EXPECT_TRUE(std::isfinite(prev));
  for (double kap : {2e-3, 4e-3, 8e-3}) {
    double c = ssh_analytic_C(0.5, 1, 1, 0.5, kap, CVariant::Printed);
    EXPECT_NEAR(c, prev, 0.05 * prev);
    prev = c;
  }
}

TEST(LRConstants, StripExceeded) {
  try {
    ssh_analytic_C(0.5, 1, 1, 0.5, 0.8, CVariant::Printed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::StripExceeded);
  }
  EXPECT_THROW(lr_constants(ssh(0.5, 1), ssh(1, 0.5), 0.8), Error);
}

TEST(LRConstants, ContinuationStripWithinLog2) {
  double s = continuation_strip(ssh(0.5, 1), ssh(1, 0.5), 1.0);
  EXPECT_GE(s, 0.6);
  EXPECT_LT(s, std::log(2.0));
}

TEST(Velocity, MonotoneInKappa) {
  std::vector<double> g;
  for (int i = 1; i <= 16; ++i) g.push_back(0.6 * i / 16);
  MonotonicityScan s = velocity_monotonicity_scan(ssh(1, 0.5), g);
  EXPECT_TRUE(s.monotone);
  EXPECT_GE(s.v.front(), 1.0 - 1e-6);  // bounded below by v_mr
}

TEST(GapBound, ClosedForm) {
  LRConstants c;
  c.C = 2;
  c.kappa = 0.5;
  c.v = 1.5;
  EXPECT_DOUBLE_EQ(gap_bound(c, 10, 2), 2 * std::exp(-0.5 * (10 - 3)));
}

TEST(FiniteSize, BracketVanishesAtHalfChain) {
  LRConstants c;
  c.C = 1;
  c.kappa = 0.4;
  c.v = 1;
  FiniteSizeBounds b = finite_size_bounds(c, 10, 20, 3);
  EXPECT_EQ(b.finite_gap_bound, 0);
  EXPECT_GT(b.segment_correction, 0);
  EXPECT_THROW(finite_size_bounds(c, 10, 10, 0), Error);
}

TEST(FiniteSize, CorrectionDecaysWithRingLength) {
  LRConstants c;
  c.C = 1;
  c.kappa = 0.4;
  c.v = 1;
  double prev = INFINITY;
  for (int L : {30, 40, 60, 90}) {
    double s = finite_size_bounds(c, 10, L, 2).segment_correction;
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(Majorization, KernelPositive) {
  for (double k : {0.0, 0.5, 2.0}) EXPECT_GT(majorization_kernel(k, 0.5, 0.2, 20), 0);
}

TEST(DiscreteHarmonic, MonotoneMarch) {
  std::vector<double> boundary;
  for (int j = 0; j < 33; ++j) boundary.push_back(std::exp(-0.1 * std::abs(j - 16)));
  HarmonicCheck h = discrete_harmonic_check(boundary, 10);
  EXPECT_TRUE(h.monotone);
  EXPECT_LT(h.residual, 1e-10);
}
