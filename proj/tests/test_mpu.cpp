#include <gtest/gtest.h>

#include <cmath>

#include "sptq/models.hpp"
#include "sptq/mpu.hpp"
#include "sptq/randmat.hpp"

using namespace sptq;

namespace {

cmat kron(const cmat& a, const cmat& b) {
  cmat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

MPUTensor random_bilayer(std::uint64_t s) {
  Stream rng(404, 1, s);
  return bilayer_mpu(random_unitary(rng, 4), random_unitary(rng, 4), 2, 2);
}

}  // namespace

TEST(Bilayer, ValidatesAsUnitary) {
  for (int s = 0; s < 4; ++s) {
    MPUTensor U = random_bilayer(s);
    MPUValidation v = validate(U, {2, 3});
    EXPECT_TRUE(U.validated);
    EXPECT_NEAR(v.leading, 1, 1e-10);
    EXPECT_LT(v.nilpotency, 1e-10);
    for (double r : v.dense_residual) EXPECT_LT(r, 1e-10);
  }
}

TEST(Bilayer, DenseMatchesExplicitCircuit) {
  // ring of 3 sites, each site = (left qubit, right qubit)
  Stream rng(404, 2, 0);
  cmat u = random_unitary(rng, 4), v = random_unitary(rng, 4);
  MPUTensor U = bilayer_mpu(u, v, 2, 2);
  const int n = 64;
  cmat layer_u = kron(kron(u, u), u);
  // v on (right qubit of j, left qubit of j+1): qubit order 0..5, bonds (1,2), (3,4), (5,0)
  auto gate = [&](int a, int b) {
    cmat G = cmat::Zero(n, n);
    for (int s = 0; s < n; ++s)
      for (int o = 0; o < 4; ++o) {
        int ia = (s >> (5 - a)) & 1, ib = (s >> (5 - b)) & 1;
        int oa = o >> 1, ob = o & 1;
        int t = s;
        t = (t & ~(1 << (5 - a))) | (oa << (5 - a));
        t = (t & ~(1 << (5 - b))) | (ob << (5 - b));
        G(t, s) += v(o, ia * 2 + ib);
      }
    return G;
  };
  cmat full = gate(1, 2) * gate(3, 4) * gate(5, 0) * layer_u;
  cmat dense = dense_mpu(U, 3);
  // equal up to the order of the commuting v's
  EXPECT_LT(max_abs(dense - full), 1e-12);
}

TEST(Block, BlockedMpuStillValidates) {
  for (int s = 0; s < 3; ++s) {
    MPUTensor U = random_bilayer(s);
    validate(U, {2});
    MPUTensor B = block(U, 2);
    EXPECT_NO_THROW(validate(B, {2}));
    EXPECT_LT(max_abs(dense_mpu(B, 2) - dense_mpu(U, 4)), 1e-11);
  }
}

TEST(Block, BudgetEnforced) {
  MPUTensor U = random_bilayer(0);
  try {
    block(U, 6, 1 << 20);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SizeOverflow);
  }
}

TEST(Validate, RejectsNonUnitaryTensor) {
  Stream rng(404, 3, 0);
  std::vector<cmat> U;
  for (int i = 0; i < 4; ++i) U.push_back(random_complex(rng, 2, 2));
  MPUTensor m = make_mpu(2, U);
  try {
    validate(m, {2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotUnitary);
  }
  EXPECT_FALSE(m.validated);
}

TEST(Simpleness, BilayerIsSimpleAtOne) {
  for (int s = 0; s < 4; ++s) {
    MPUTensor U = random_bilayer(s);
    validate(U, {2});
    Simpleness sm = simpleness_k0(U, 3);
    EXPECT_EQ(sm.k0, 1);
    EXPECT_LE(sm.k0, U.DU * U.DU * U.DU * U.DU);
  }
}

TEST(Simpleness, ProductUnitaryTrivially) {
  Stream rng(404, 4, 0);
  MPUTensor U = bilayer_mpu(random_unitary(rng, 4), cmat::Identity(4, 4), 2, 2);
  EXPECT_EQ(U.DU, 1);
  EXPECT_EQ(simpleness_k0(U, 2).k0, 1);
}

TEST(Apply, TransferSpectrumInvariant) {
  UniformMPS m = z2z2_mps(0.3, 0.2);
  TransferChannel before = transfer_analysis(m);
  for (int s = 0; s < 3; ++s) {
    MPUTensor U = random_bilayer(s);
    validate(U, {2});
    TransferChannel after = transfer_analysis(apply(U, m));
    EXPECT_TRUE(transfer_spectrum_match(before.spectrum, after.spectrum).ok);
    EXPECT_NEAR(after.mu, before.mu, 1e-9);
  }
}

TEST(Apply, DenseStateIsCircuitTimesState) {
  UniformMPS m = z2z2_mps(0.3, 0.2);
  MPUTensor U = random_bilayer(5);
  validate(U, {2});
  cvec psi = mps_dense_ring(m.A, 3);
  cvec direct = dense_mpu(U, 3) * psi;
  cvec viaTensors = mps_dense_ring(apply_tensors(U, m.A), 3);
  EXPECT_LT((direct - viaTensors).norm(), 1e-11 * direct.norm());
}

TEST(Support, OperatorSpreadsAtMostTwoK0PlusOne) {
  for (int s = 0; s < 3; ++s) {
    Stream rng(404, 5, s);
    cmat v = cmat::Zero(4, 4);
    for (int i = 0; i < 4; ++i) v(i, i) = std::polar(1.0, rng.uniform(0, 2 * M_PI));
    MPUTensor W = commuting_bilayer_mpu(random_unitary(rng, 2), v);
    validate(W, {3});
    int k0 = simpleness_k0(W, 2).k0;
    SupportCheck sc = operator_support(W, random_hermitian(rng, 2), k0);
    EXPECT_LE(sc.support, 2 * k0 + 1);
    EXPECT_LT(sc.residual, 1e-9);
  }
}

TEST(Support, NoncommutingBondGatesRejected) {
  Stream rng(404, 6, 0);
  EXPECT_THROW(commuting_bilayer_mpu(random_unitary(rng, 2), random_unitary(rng, 4)), Error);
}

TEST(Symmetry, DiagonalMpuCommutesWithZ2Z2) {
  MPUTensor U = diagonal_mpu(random_diagonal_gates(3));
  for (auto [m, n] : {std::pair{1, 0}, std::pair{0, 1}}) EXPECT_LT(symmetry_residual(U, z2z2_rep(m, n), 3), 1e-12);
}

TEST(Symmetry, DiagonalPowerIsRepeatedApplication) {
  DiagonalGates g = random_diagonal_gates(4);
  cmat U1 = dense_mpu(diagonal_mpu(g, 1), 3);
  cmat U3 = dense_mpu(diagonal_mpu(g, 3), 3);
  EXPECT_LT(max_abs(U1 * U1 * U1 - U3), 1e-12);
}

TEST(ReducedDensity, StabilityUnderUnitaryPerturbation) {
  for (int i = 0; i < 40; ++i) {
    Stream rng(404, 7, i);
    const int n = 8;
    cmat U = random_unitary(rng, n);
    cmat Up = U * expm_herm(random_hermitian(rng, n), rng.uniform(0, 0.2));
    cvec psi = random_complex(rng, n, 1).col(0);
    psi.normalize();
    StabilityCheck sc = reduced_density_stability_check(U, Up, psi, 2);
    EXPECT_TRUE(sc.holds);
    EXPECT_LE(sc.lhs, sc.rhs + 1e-10);
  }
}

TEST(ReducedDensity, TraceOneAndHermitian) {
  Stream rng(404, 8, 0);
  cvec psi = random_complex(rng, 12, 1).col(0);
  psi.normalize();
  cmat r = reduced_density(psi, 3, 4);
  EXPECT_NEAR(r.trace().real(), 1, 1e-14);
  EXPECT_LT(max_abs(r - r.adjoint()), 1e-15);
}

TEST(SpectrumMatch, DetectsChange) {
  cvec a(3), b(3);
  a << 1, 0.5, 0.2;
  b << 1, 0.5, 0.25;
  EXPECT_FALSE(transfer_spectrum_match(a, b).ok);
  EXPECT_TRUE(transfer_spectrum_match(a, a).ok);
}
