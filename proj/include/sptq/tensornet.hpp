#pragma once

#include <vector>

#include "sptq/numerics.hpp"

namespace sptq {

struct UniformMPS {
  int d = 0;
  int D = 0;
  std::vector<cmat> A;
  bool canonical = false;
};

struct TransferChannel {
  cmat T;          // sum_j conj(A_j) (x) A_j, acting on column-major vec(X) as X -> sum A X A^dagger
  cvec spectrum;   // descending by magnitude
  double mu = 0;   // spectral radius of T - T_inf
  cmat Lambda;     // left fixed point, trace 1
  cmat Tinf;       // vec(1) vec(Lambda^T)^T
};

struct ProjectiveRep {
  int r = 0;
  std::vector<cmat> V;  // unitarized virtual operators, one per generator
  cd commutator = 1;    // V_a V_b V_a^-1 V_b^-1 for the two generators
  int nu = 0;
  double unitarity_residual = 0;
};

UniformMPS make_mps(std::vector<cmat> A);
cmat transfer_matrix(const std::vector<cmat>& A);
cmat mixed_transfer(const std::vector<cmat>& bra, const std::vector<cmat>& ket);
double unital_residual(const std::vector<cmat>& A);

// Index permutation T[(aD+b),(cD+e)] -> T[(aD+c),(bD+e)].
cmat realign(const cmat& T, int D);
// S X S with S swapping the two tensor factors of C^D (x) C^D.
cmat swap_factors(const cmat& X, int D);

// Restrict to the support of the right fixed point when it is rank
// deficient instead of failing (used after MPU application).
UniformMPS canonicalize(const UniformMPS& mps, bool restrict_support = false);
TransferChannel transfer_analysis(const UniformMPS& mps);

struct SegmentGram {
  cmat Wsqrt;  // environment square root
  cmat Minf;   // infinite-length part
  cmat MP;     // perturbation from (T - T_inf)^l
  double shift = 0;
};
SegmentGram segment_gram(const UniformMPS& mps, int l);

SpectrumReport es_infinite(const UniformMPS& mps);
SpectrumReport es_segment(const UniformMPS& mps, int l);
SpectrumReport es_finite_ring(const UniformMPS& mps, int l, int L);
double mb_gap(const SpectrumReport& r, int rr);

ProjectiveRep projective_rep(const UniformMPS& mps, const std::vector<cmat>& generators, int r);

// Dense amplitudes Tr[A_{j1}...A_{jL}] with j1 the most significant digit.
cvec mps_dense_ring(const std::vector<cmat>& A, int L);

}  // namespace sptq
