#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sptq/channelbounds.hpp"
#include "sptq/freefermion.hpp"
#include "sptq/lrbounds.hpp"
#include "sptq/mpu.hpp"
#include "sptq/tensornet.hpp"

namespace sptq {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// ---- free fermions ----

// -(J1 + J2 cos k) sigma_x - J2 sin k sigma_y, plus 2 J sin k when phs_J != 0.
BlochModel ssh(double J1, double J2, double phs_J = 0);

enum class CVariant { Printed, OperatorNorm };
// Closed-form SSH prefactor. Printed uses (F(k,kappa) + F(k,-kappa))/2 for
// the projector norm; OperatorNorm uses the exact norm of the rank-one projector.
double ssh_analytic_C(double J1, double J2, double J1p, double J2p, double kappa, CVariant variant,
                      double tol = 1e-6);
double ssh_F(double k, double kappa, double J1, double J2);

struct FlatbandES {
  std::vector<double> numeric;   // ascending
  std::vector<double> analytic;  // ascending
};
cmat flatband_segment(int N, double t);
FlatbandES flatband_es(int N, double t);
// Roots of f_N from the three-term recursion, by Sturm bisection.
std::vector<double> flatband_roots(int N, double t);
// Closed forms for N <= 5.
std::vector<double> flatband_closed_form(int N, double t);

struct QuenchSpec {
  double J1 = 0.5, J2 = 1.0, J1p = 1.0, J2p = 0.5;
  double phs = 0, phs_p = 0;
  int l = 40;
  int L = 0;  // 0: infinite chain on a k-grid
  int Nk = 2048;
  std::vector<double> times;
  double kappa = 0;  // > 0 adds the Lieb-Robinson bound column
  int threads = 1;
};
struct QuenchResult {
  Table table;
  double t_star = -1;  // first sampled t with gap > 1e-3
  LRConstants consts;
};
QuenchResult quench_ssh_experiment(const QuenchSpec& s);

struct DisorderSpec {
  double J = 0.5, Jp = 1.0, f = 0.0;     // initial
  double Jq = 1.0, Jpq = 0.5, fq = 0.6;  // after the quench
  std::uint64_t seed = 1;
  int l = 10;
  int realizations = 200;
  std::vector<double> times;
  int threads = 1;
};
// Periodic ring of L = 2l + 1 cells.
RealSpaceHamiltonian disordered_ssh(int L, double J, double Jp, double f, std::uint64_t seed, std::uint64_t realization);
struct DisorderResult {
  Table table;
  int skipped = 0;
};
DisorderResult disordered_ssh_experiment(const DisorderSpec& s);

// ---- interacting ----

UniformMPS z2z2_mps(double p, double q);
// Z^m (x) Z^n on the two qubits of a site.
cmat z2z2_rep(int m, int n);

struct MBLSpec {
  int L = 6;
  double p = 0.49, q = 0.49;
  double J0 = 3, kappa = 3;
  std::uint64_t seed = 1;
  std::vector<double> times;
  int realizations = 100;
  int cut = 3;
  int threads = 1;
};
Table mbl_experiment(const MBLSpec& s);

struct CocycleModel {
  int N = 6;
  int nu = 1;
  int n = 2;  // subgroup Z_n x Z_n embedded as {(p a, p b)}, p = N / n
  std::vector<double> h;  // |G| x |G|, row-major over group indices g = a N + b
};
cd cocycle_omega(const CocycleModel& m, int g, int h);
double cocycle_identity_residual(const CocycleModel& m);
CocycleModel make_cocycle_model(int N, int nu, int n, std::uint64_t seed, std::uint64_t draw);
// Invariance of h under the embedded subgroup.
double subgroup_residual(const CocycleModel& m);
cmat cocycle_m(const CocycleModel& m, double t);
std::vector<double> cocycle_es(const CocycleModel& m, double t);
struct Degeneracy {
  int top = 0;       // multiplicity of the top cluster
  int clusters = 0;  // clusters among the top r values
};
Degeneracy top_degeneracy(const std::vector<double>& es, int r, double tol = 1e-8);
int initial_degeneracy(int N, int nu);
Table cocycle_experiment(const CocycleModel& m, const std::vector<double>& times);
// Fixed-point MPS of the cocycle model and the regular representation generators.
UniformMPS cocycle_mps(const CocycleModel& m);
std::vector<cmat> cocycle_generators(int N);

// Symmetric MPU from diagonal gates for the Z2 x Z2 chain: u on a site,
// v on (second qubit of j, first qubit of j+1).
struct DiagonalGates {
  cvec u;  // 4 phases
  cvec v;  // 4 phases
};
DiagonalGates random_diagonal_gates(std::uint64_t seed);
MPUTensor diagonal_mpu(const DiagonalGates& g, int power = 1);

struct MPSQuenchSpec {
  double p = 0.49, q = 0.49;
  std::uint64_t seed = 1;
  std::vector<int> steps{0, 1, 2, 3};
  int l_min = 10, l_max = 24;
};
struct MPSQuenchResult {
  Table table;
  int k0 = 0;
  int DU = 0;
  double mu = 0;
};
MPSQuenchResult mps_quench_experiment(const MPSQuenchSpec& s);

}  // namespace sptq
