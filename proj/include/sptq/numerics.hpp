#pragma once

#include <functional>
#include <vector>

#include "sptq/types.hpp"

namespace sptq {

struct HermEig {
  rvec values;   // ascending
  cmat vectors;  // columns
};

struct BiorthEig {
  cvec values;
  cmat right;  // columns, unit norm
  cmat left;   // columns u^L with <u^L_a|u^R_b> = delta_ab
  bool defective = false;
};

struct Svd {
  rvec s;  // descending
  cmat U;
  cmat V;
};

struct WeylShift {
  double max_shift = 0;
  double norm_diff = 0;
};

double max_abs(const cmat& A);
double spectral_norm(const cmat& A);

HermEig herm_eig(const cmat& A, double herm_tol = 1e-10);
BiorthEig general_eig(const cmat& A, double rank_tol = 1e-8);
Svd svd(const cmat& A);
double pfaffian(const rmat& R);
WeylShift weyl_shift(const cmat& O, const cmat& Op);

// e^{-iHt} for Hermitian H.
cmat expm_herm(const cmat& H, double t);
cmat expm_herm(const HermEig& eig, double t);
// Principal square root of a Hermitian positive semidefinite matrix.
cmat sqrtm_psd(const cmat& A);

// Agglomerative clustering of a descending list by absolute gap.
std::vector<Cluster> cluster_values(const std::vector<double>& desc, double tol);

struct Quadrature {
  std::vector<double> x;
  std::vector<double> w;
};
// Gauss-Legendre rule on [-1, 1].
const Quadrature& gauss_legendre(int n);

// Runs f(i) for i in [0, n) on up to `threads` workers. Results must be
// written to per-index slots by the caller.
void parallel_for(int n, int threads, const std::function<void(int)>& f);
int default_threads();
void set_default_threads(int n);

}  // namespace sptq
