#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sptq/models.hpp"

using namespace sptq;

TEST(SshF, IsModulusRatio) {
  for (double k : {0.0, 0.7, 2.5})
    for (double kap : {0.1, 0.4}) {
      cd num = 0.5 + 1.0 * std::exp(cd(kap, k));
      cd den = 0.5 + 1.0 * std::exp(cd(-kap, k));
      EXPECT_NEAR(ssh_F(k, kap, 0.5, 1), std::abs(num) / std::abs(den), 1e-14);
      EXPECT_NEAR(ssh_F(k, kap, 0.5, 1) * ssh_F(k, -kap, 0.5, 1), 1, 1e-14);
    }
}

TEST(SshC, GrowsWithKappaLikeContinuedProjectorNorm) {
  // k-average of max ||P(k +- i kappa)||
  BlochModel m0 = ssh(0.5, 1);
  const double kap = 0.3;
  const int n = 400;
  double s = 0;
  for (int i = 0; i < n; ++i) {
    double k = 2 * M_PI * i / n;
    double a = spectral_norm(bloch_projector(m0, cd(k, kap))), b = spectral_norm(bloch_projector(m0, cd(k, -kap)));
    s += std::max(a, b);
  }
  s /= n;
  double c = ssh_analytic_C(0.5, 1, 1, 0.5, kap, CVariant::OperatorNorm, 1e-12);
  double s2 = 0;
  const double kap2 = 0.5;
  for (int i = 0; i < n; ++i) {
    double k = 2 * M_PI * i / n;
    s2 += std::max(spectral_norm(bloch_projector(m0, cd(k, kap2))), spectral_norm(bloch_projector(m0, cd(k, -kap2))));
  }
  s2 /= n;
  double c2 = ssh_analytic_C(0.5, 1, 1, 0.5, kap2, CVariant::OperatorNorm, 1e-12);
  EXPECT_GT(s, 1);
  EXPECT_GT(c2, c);
  EXPECT_GT(s2, s);
}

TEST(Flatband, NumericMatchesClosedForm) {
  for (int N = 1; N <= 5; ++N)
    for (double t : {0.3, 1.1, 2.0, 4.4}) {
      FlatbandES f = flatband_es(N, t);
      ASSERT_EQ(f.numeric.size(), f.analytic.size());
      for (int i = 0; i < N; ++i) EXPECT_NEAR(f.numeric[i], f.analytic[i], 1e-12);
    }
}

TEST(Flatband, RecursionRootsMatchClosedForm) {
  for (int N = 1; N <= 5; ++N)
    for (double t : {0.3, 2.0}) {
      auto a = flatband_roots(N, t), b = flatband_closed_form(N, t);
      for (int i = 0; i < N; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
    }
}

TEST(Flatband, LargeNMatchesRoots) {
  for (int N : {8, 13}) {
    FlatbandES f = flatband_es(N, 0.9);
    for (int i = 0; i < N; ++i) EXPECT_NEAR(f.numeric[i], f.analytic[i], 1e-11);
  }
}

TEST(Flatband, SymmetricAboutHalf) {
  for (int N = 2; N <= 9; ++N) {
    auto v = flatband_roots(N, 1.3);
    for (int i = 0; i < N; ++i) EXPECT_NEAR(v[i] + v[N - 1 - i], 1, 1e-12);
  }
}

TEST(Flatband, PeriodInTimeIsPi) {
  auto a = flatband_roots(6, 0.4), b = flatband_roots(6, 0.4 + M_PI);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(Quench, TableShapeAndGrid) {
  QuenchSpec s;
  s.l = 4;
  s.Nk = 64;
  s.times = {0, 1, 2};
  s.kappa = 0.3;
  QuenchResult r = quench_ssh_experiment(s);
  EXPECT_EQ(r.table.columns.size(), 1u + 8 + 1 + 1);
  EXPECT_EQ(r.table.rows.size(), 3u);
  s.Nk = 16;
  EXPECT_THROW(quench_ssh_experiment(s), Error);
}

TEST(Quench, TopologicalGapVanishesInitially) {
  QuenchSpec s;
  // edge modes split like 2^-l
  s.l = 40;
  s.Nk = 512;
  s.times = {0};
  QuenchResult r = quench_ssh_experiment(s);
  EXPECT_LT(r.table.rows[0].back(), 1e-10);
}

TEST(Cocycle, IdentityAndSubgroupInvariance) {
  for (int d = 0; d < 3; ++d) {
    CocycleModel m = make_cocycle_model(6, 1, 2, 7, d);
    EXPECT_LT(cocycle_identity_residual(m), 1e-12);
    EXPECT_LT(subgroup_residual(m), 1e-15);
  }
  EXPECT_THROW(make_cocycle_model(6, 1, 4, 7, 0), Error);
  EXPECT_THROW(make_cocycle_model(6, 6, 2, 7, 0), Error);
}

TEST(Cocycle, SpectrumNormalizedAndInitiallyDegenerate) {
  for (int nu : {1, 2, 3}) {
    CocycleModel m = make_cocycle_model(6, nu, 2, 7, 0);
    auto z = cocycle_es(m, 0);
    EXPECT_NEAR(std::accumulate(z.begin(), z.end(), 0.0), 1, 1e-12);
    EXPECT_EQ(top_degeneracy(z, initial_degeneracy(6, nu)).top, initial_degeneracy(6, nu));
    for (double t : {0.5, 3.0}) {
      auto zt = cocycle_es(m, t);
      EXPECT_NEAR(std::accumulate(zt.begin(), zt.end(), 0.0), 1, 1e-12);
    }
  }
}

TEST(Cocycle, InitialDegeneracy) {
  EXPECT_EQ(initial_degeneracy(6, 1), 6);
  EXPECT_EQ(initial_degeneracy(6, 2), 3);
  EXPECT_EQ(initial_degeneracy(6, 3), 2);
  EXPECT_EQ(initial_degeneracy(6, 0), 1);
}

TEST(Cocycle, ExperimentRows) {
  CocycleModel m = make_cocycle_model(4, 1, 2, 3, 0);
  Table t = cocycle_experiment(m, {0, 1});
  EXPECT_EQ(t.columns.size(), 3u + 16);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], 4);
}

TEST(Disorder, CleanLimitIndependentOfRealization) {
  DisorderSpec s;
  s.f = 0;
  s.fq = 0;
  s.l = 4;
  s.realizations = 3;
  s.times = {0, 2};
  DisorderResult r = disordered_ssh_experiment(s);
  // gap_se column vanishes when every realization is identical
  for (auto& row : r.table.rows) EXPECT_NEAR(row[3], 0, 1e-12);
}

TEST(Disorder, DeterministicAcrossThreads) {
  DisorderSpec s;
  s.l = 4;
  s.realizations = 6;
  s.times = {0, 1.5};
  DisorderResult a = disordered_ssh_experiment(s);
  s.threads = 3;
  DisorderResult b = disordered_ssh_experiment(s);
  EXPECT_EQ(a.table.rows, b.table.rows);
}

TEST(Disorder, RealizationsDiffer) {
  auto a = disordered_ssh(5, 1, 0.5, 0.6, 1, 0), b = disordered_ssh(5, 1, 0.5, 0.6, 1, 1);
  EXPECT_GT(max_abs(a.H - b.H), 1e-3);
  EXPECT_LT(max_abs(a.H - a.H.adjoint()), 1e-15);
}

TEST(MBL, NoInteractionKeepsEntropy) {
  MBLSpec s;
  s.L = 4;
  s.cut = 2;
  s.J0 = 0;
  s.realizations = 2;
  s.times = {0, 1, 10};
  Table t = mbl_experiment(s);
  for (auto& row : t.rows) EXPECT_NEAR(row[1], t.rows[0][1], 1e-10);
}

TEST(MBL, InitialEntropyNearTwoBonds) {
  MBLSpec s;
  s.L = 4;
  s.cut = 2;
  s.realizations = 1;
  s.times = {0};
  Table t = mbl_experiment(s);
  // near the fixed point each cut carries ln 2
  EXPECT_NEAR(t.rows[0][1], std::log(4.0), 0.05);
}

TEST(MBL, SizeBudget) {
  MBLSpec s;
  s.L = 9;
  s.times = {0};
  try {
    mbl_experiment(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SizeOverflow);
  }
}
