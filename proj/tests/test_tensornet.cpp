#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sptq/channelbounds.hpp"
#include "sptq/models.hpp"
#include "sptq/precise.hpp"
#include "sptq/randmat.hpp"
#include "sptq/tensornet.hpp"

using namespace sptq;

namespace {

cvec vec(const cmat& X) { return Eigen::Map<const cvec>(X.data(), X.size()); }

cmat kron(const cmat& a, const cmat& b) {
  cmat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

std::vector<cmat> random_tensors(Stream& rng, int d, int D) {
  std::vector<cmat> A;
  for (int j = 0; j < d; ++j) A.push_back(random_complex(rng, D, D));
  return A;
}

std::vector<double> sorted_desc(const rvec& v) {
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end(), std::greater<double>());
  return s;
}

}  // namespace

TEST(Transfer, ActsAsChannelOnColumnMajorVec) {
  Stream rng(303, 1, 0);
  auto A = random_tensors(rng, 3, 4);
  cmat X = random_complex(rng, 4, 4);
  cmat Y = cmat::Zero(4, 4);
  for (auto& a : A) Y += a * X * a.adjoint();
  EXPECT_LT((transfer_matrix(A) * vec(X) - vec(Y)).norm(), 1e-12);
}

TEST(Transfer, RealignOfOuterProduct) {
  Stream rng(303, 1, 1);
  cmat X = random_complex(rng, 3, 3), Y = random_complex(rng, 3, 3);
  cmat T = vec(X) * vec(Y).transpose();
  EXPECT_LT(max_abs(realign(T, 3) - kron(X.transpose(), Y.transpose())), 1e-13);
}

TEST(Transfer, RealignIsInvolution) {
  Stream rng(303, 1, 2);
  cmat T = random_complex(rng, 9, 9);
  EXPECT_LT(max_abs(realign(realign(T, 3), 3) - T), 1e-15);
}

TEST(Transfer, SwapFactors) {
  Stream rng(303, 1, 3);
  cmat X = random_complex(rng, 2, 2), Y = random_complex(rng, 2, 2);
  EXPECT_LT(max_abs(swap_factors(kron(X, Y), 2) - kron(Y, X)), 1e-15);
}

TEST(Z2Z2, CanonicalAndUnital) {
  UniformMPS m = z2z2_mps(0.3, 0.2);
  EXPECT_LT(unital_residual(m.A), 1e-14);
  EXPECT_EQ(m.d, 4);
  EXPECT_EQ(m.D, 2);
}

TEST(Z2Z2, MuIsLargestPauliEigenvalue) {
  // Pauli channel eigenvalues on sx, sy, sz: (1-2q), (1-2p)(1-2q), (1-2p) up to labels
  for (auto [p, q] : {std::pair{0.49, 0.49}, std::pair{0.3, 0.2}, std::pair{0.1, 0.45}, std::pair{0.5, 0.5}}) {
    double a = std::abs(1 - 2 * p), b = std::abs(1 - 2 * q);
    double mu = std::max({a, b, a * b});
    EXPECT_NEAR(transfer_analysis(z2z2_mps(p, q)).mu, mu, 1e-12);
  }
}

TEST(Z2Z2, SymmetricUnderOnSiteRepresentation) {
  cvec psi = mps_dense_ring(z2z2_mps(0.3, 0.2).A, 4);
  for (auto [m, n] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}}) {
    cmat R = z2z2_rep(m, n);
    cmat RL = kron(kron(R, R), kron(R, R));
    EXPECT_LT((RL * psi - psi).norm(), 1e-12 * psi.norm());
  }
}

TEST(Z2Z2, FixedPointSpectrumExactlyFourfold) {
  UniformMPS m = z2z2_mps(0.5, 0.5);
  for (int l = 1; l <= 6; ++l) {
    SpectrumReport r = es_segment(m, l);
    ASSERT_GE(r.values.size(), 4u);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.values[i], 0.25, 1e-14);
    for (size_t i = 4; i < r.values.size(); ++i) EXPECT_LT(r.values[i], 1e-14);
  }
}

TEST(Z2Z2, ClusterWidthWithinChannelBound) {
  UniformMPS m = z2z2_mps(0.49, 0.49);
  TransferChannel ch = transfer_analysis(m);
  for (int l = 2; l <= 12; ++l)
    EXPECT_LE(mb_gap(es_segment(m, l), 2), std::sqrt(2.0 * m.D) * channel_distance(ch, l));
}

TEST(Z2Z2, ProjectiveClassIsNontrivial) {
  ProjectiveRep pr = projective_rep(z2z2_mps(0.3, 0.2), {z2z2_rep(1, 0), z2z2_rep(0, 1)}, 2);
  EXPECT_EQ(pr.nu, 1);
  EXPECT_NEAR(std::abs(pr.commutator + 1.0), 0, 1e-10);
  EXPECT_LT(pr.unitarity_residual, 1e-8);
}

TEST(SegmentES, GramMatchesDenseRing) {
  for (auto [p, q] : {std::pair{0.49, 0.49}, std::pair{0.3, 0.2}}) {
    UniformMPS m = z2z2_mps(p, q);
    cvec psi = mps_dense_ring(m.A, 7);
    psi.normalize();
    // first 3 sites against the remaining 4
    std::vector<double> dense = sorted_desc(herm_eig(reduced_density(psi, 64, 256)).values);
    SpectrumReport g = es_finite_ring(m, 3, 7);
    for (size_t i = 0; i < dense.size(); ++i) EXPECT_NEAR(i < g.values.size() ? g.values[i] : 0.0, dense[i], 1e-10);
  }
}

TEST(SegmentES, RandomInjectiveMpsGramMatchesDense) {
  for (int s = 0; s < 4; ++s) {
    Stream rng(303, 2, s);
    UniformMPS m = canonicalize(make_mps(random_tensors(rng, 2, 3)));
    cvec psi = mps_dense_ring(m.A, 10);
    psi.normalize();
    std::vector<double> dense = sorted_desc(herm_eig(reduced_density(psi, 16, 64)).values);
    SpectrumReport g = es_finite_ring(m, 4, 10);
    for (size_t i = 0; i < dense.size(); ++i) EXPECT_NEAR(i < g.values.size() ? g.values[i] : 0.0, dense[i], 1e-9);
  }
}

TEST(SegmentES, LongRingApproachesInfiniteChain) {
  UniformMPS m = z2z2_mps(0.49, 0.49);
  SpectrumReport a = es_segment(m, 3), b = es_finite_ring(m, 3, 30);
  for (size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-13);
}

TEST(SegmentES, LongSegmentTendsToInfiniteLimit) {
  UniformMPS m = z2z2_mps(0.3, 0.2);
  SpectrumReport inf = es_infinite(m);
  SpectrumReport seg = es_segment(m, 60);
  ASSERT_EQ(inf.values.size(), 4u);
  for (size_t i = 0; i < inf.values.size(); ++i) EXPECT_NEAR(seg.values[i], inf.values[i], 1e-12);
  for (size_t i = inf.values.size(); i < seg.values.size(); ++i) EXPECT_LT(seg.values[i], 1e-12);
}

TEST(SegmentES, InfiniteLimitIsProductOfBoundarySpectra) {
  // Lambda = 1/2 for the unital z2z2 chain: two cuts give four values of 1/4
  for (double x : es_infinite(z2z2_mps(0.3, 0.2)).values) EXPECT_NEAR(x, 0.25, 1e-14);
}

TEST(Canonicalize, PreservesState) {
  Stream rng(303, 3, 0);
  UniformMPS raw = make_mps(random_tensors(rng, 2, 3));
  UniformMPS c = canonicalize(raw);
  EXPECT_LT(unital_residual(c.A), 1e-10);
  cvec a = mps_dense_ring(raw.A, 6), b = mps_dense_ring(c.A, 6);
  a.normalize();
  b.normalize();
  EXPECT_NEAR(std::abs(a.dot(b)), 1.0, 1e-10);
}

TEST(PreciseGap, AgreesWithDoubleWhereResolved) {
  UniformMPS m = z2z2_mps(0.3, 0.2);
  for (int l : {2, 4, 6}) {
    double g = mb_gap(es_segment(m, l), 2);
    PreciseGap p = precise_segment_gap(m.A, l, 2);
    EXPECT_NEAR(p.gap, g, 1e-12 + 1e-8 * g);
  }
}

TEST(PreciseGap, DecaysLikeMuPowerBelowDoubleFloor) {
  UniformMPS m = z2z2_mps(0.49, 0.49);
  double prev = precise_segment_gap(m.A, 10, 2).gap;
  for (int l = 11; l <= 16; ++l) {
    double g = precise_segment_gap(m.A, l, 2).gap;
    EXPECT_NEAR(g / prev, 0.02, 1e-3);
    prev = g;
  }
}
