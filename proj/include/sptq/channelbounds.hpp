#pragma once

#include <vector>

#include "sptq/tensornet.hpp"

namespace sptq {

struct MinimalPolynomial {
  std::vector<cd> roots;
  std::vector<int> sizes;
  int degree = 0;
  double residual = 0;  // ||m(M)||
};

struct BoundInputs {
  int D = 0;
  int DU = 1;
  double mu = 0;
  int k0 = 1;
  int l = 0;
  int t = 0;
  int L = 0;        // 0 means infinite
  double trEL = 1;  // Tr E^L of the initial channel
};

enum class BoundMode { Sharp, WorstCase };

MinimalPolynomial minimal_polynomial(const cmat& M, double cluster_tol = 1e-8);
cd blaschke(cd z, const MinimalPolynomial& m);
double spectral_radius(const MinimalPolynomial& m);
// Largest |1/B| on the circle |z| = radius; 720-point scan and golden refinement.
double inverse_blaschke_sup(const MinimalPolynomial& m, double radius);
double convergence_bound(int l, const MinimalPolynomial& m, double C, BoundMode mode);

double thm2_coefficient(int D, double mu);
double thm2_bound(const BoundInputs& in);
double finite_coefficient(double alpha, int D, double mu);
double finite_b(double alpha, int x, const BoundInputs& in);
double finite_thm_bound(const BoundInputs& in);

double channel_distance(const cmat& T, const cmat& Tinf, int l);
double channel_distance(const TransferChannel& E, int l);
// sup_{n >= 1} ||T^n||, scanned until T^n has converged to T_inf.
double sup_power_norm(const cmat& T, const cmat& Tinf, int n_max = 100000);

}  // namespace sptq
