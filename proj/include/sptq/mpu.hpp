#pragma once

#include <string>
#include <vector>

#include "sptq/tensornet.hpp"

namespace sptq {

struct MPUTensor {
  int d = 0;
  int DU = 0;
  std::vector<cmat> U;  // U[j * d + jp], row index j is the output leg
  cmat rho;             // fixed point of E_U, trace 1
  bool validated = false;
  const cmat& at(int j, int jp) const { return U[size_t(j) * d + jp]; }
};

struct MPUValidation {
  double leading = 0;      // leading eigenvalue of E_U
  double nilpotency = 0;   // ||(E_U - P)^{DU^2}||
  std::vector<int> lengths;
  std::vector<double> dense_residual;
};

struct Simpleness {
  int k0 = 0;
  std::vector<double> residual;  // per k, outputs contracted
  std::vector<double> mirrored;  // per k, inputs contracted
};

struct SupportCheck {
  int L = 0;
  int support = 0;          // smallest centred window outside which the operator is the identity
  double residual = 0;      // residual on the 2 k0 + 1 window
};

MPUTensor make_mpu(int d, std::vector<cmat> U);
// (1/d) sum_{jj'} conj(U_jj') (x) U_jj'
cmat mpu_channel(const MPUTensor& mpu);
MPUValidation validate(MPUTensor& mpu, const std::vector<int>& dense_lengths);

MPUTensor block(const MPUTensor& mpu, int k, long long budget = 1LL << 24);
double simpleness_residual(const MPUTensor& mpu, bool mirrored);
Simpleness simpleness_k0(const MPUTensor& mpu, int k_max, double tol = 1e-10, long long budget = 1LL << 24);

std::vector<cmat> apply_tensors(const MPUTensor& mpu, const std::vector<cmat>& A);
UniformMPS apply(const MPUTensor& mpu, const UniformMPS& mps);

// Dense operator of the MPU on a ring of L sites (site 0 most significant).
cmat dense_mpu(const MPUTensor& mpu, int L);

// Sites split as C^dL (x) C^dR; u acts on a site, v on (right part of j) (x) (left part of j+1).
MPUTensor bilayer_mpu(const cmat& u, const cmat& v, int dL, int dR);
// v acts on two full sites; copies of v on overlapping bonds must commute.
MPUTensor commuting_bilayer_mpu(const cmat& u, const cmat& v);

struct SpectrumMatch {
  double max_dev = 0;    // over nonzero eigenvalues of the input
  double max_extra = 0;  // largest unmatched eigenvalue of the output
  bool ok = false;
};
SpectrumMatch transfer_spectrum_match(const cvec& before, const cvec& after, double tol = 1e-9);

SupportCheck operator_support(const MPUTensor& mpu, const cmat& O, int k0, double tol = 1e-9);
// [rho_g^{(x)L}, U] for a dense on-site generator
double symmetry_residual(const MPUTensor& mpu, const cmat& rho_g, int L);

cmat reduced_density(const cvec& psi, long long dimA, long long dimB);
struct StabilityCheck {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};
StabilityCheck reduced_density_stability_check(const cmat& U, const cmat& Up, const cvec& psi0, long long dim_cut);

}  // namespace sptq
