#pragma once

#include <limits>
#include <map>
#include <vector>

#include "sptq/numerics.hpp"

namespace sptq {

// Translation-invariant hopping model, H(k) = sum_n e^{ikn} H_n.
struct BlochModel {
  int d = 0;
  std::map<int, cmat> H;
  // Half-width of the analyticity strip; infinite for finite-range models.
  double strip = std::numeric_limits<double>::infinity();
};

// Fills H_{-n} = H_n^dagger where missing and checks consistency.
BlochModel make_bloch(int d, std::map<int, cmat> comps,
                      double strip = std::numeric_limits<double>::infinity());
cmat bloch_at(const BlochModel& m, cd k);

struct RealSpaceHamiltonian {
  int L = 0;
  int d = 0;
  cmat H;
  bool periodic = true;
};

// Block (j, j') = H_{j'-j}.
RealSpaceHamiltonian real_space(const BlochModel& m, int L, bool periodic);

struct FermiProjector {
  int L = 0;
  int d = 0;
  cmat P;
  int occupied = 0;
};

// k-resolved projector on the grid k_i = 2 pi i / Nk.
struct KProjector {
  int d = 0;
  std::vector<double> k;
  std::vector<cmat> P;
  int occupied = 0;
};

struct ContourOptions {
  double gap_tol = 1e-8;
  int n_start = 32;
  int n_max = 2048;
  double tol = 1e-13;
};

cmat bloch_projector(const BlochModel& m, cd k, const ContourOptions& opt = {});
FermiProjector fermi_projector(const RealSpaceHamiltonian& H, double gap_tol = 1e-8);
KProjector k_projector(const BlochModel& m, int Nk, double gap_tol = 1e-8);

FermiProjector evolve_projector(const FermiProjector& P0, const RealSpaceHamiltonian& H, double t);
FermiProjector evolve_projector(const FermiProjector& P0, const HermEig& H, double t);
KProjector evolve_projector(const KProjector& P0, const BlochModel& H, double t);

// Blocks <j|P|j'> = B_{j-j'} assembled into the (l d) x (l d) segment matrix.
cmat toeplitz_segment(const KProjector& P, int l);
// <j|P|0> for offsets m in [-M, M], by the same quadrature.
std::vector<cmat> kspace_blocks(const KProjector& P, int M);

SpectrumReport sp_es(const FermiProjector& P, int l);
SpectrumReport sp_es(const KProjector& P, int l);
SpectrumReport sp_report(std::vector<double> xi);
double sp_gap(const SpectrumReport& r);
double sp_entropy(const SpectrumReport& r);

SpectrumReport mb_es_from_sp(const SpectrumReport& r, int mode_cap);

// Cell basis W with C = W W^T K; for sublattice-odd two-band models W = diag(1, i).
cmat ssh_cell_basis();
// Real skew R with W^dagger (1 - 2P) W = iR over the whole chain.
rmat majorana_r(const FermiProjector& P, const cmat& cell_basis);
int z2_index(const FermiProjector& P, const cmat& cell_basis);

struct HalfChain {
  rmat Rd;
  rmat Ro;
  double anticommutator = 0;
  double square_residual = 0;
  bool pairwise_degenerate = false;
  double max_pair_width = 0;
  bool ro_invertible = false;
  double antiunitary_residual = 0;  // ||A^2 + 1|| when R_o is invertible
  double commute_residual = 0;      // ||A (i R_d) - (i R_d) A||
  double sp_gap = 0;
};
HalfChain halfchain_structure(const FermiProjector& P, const cmat& cell_basis);

double finite_size_identity_residual(const BlochModel& m, int L, int n_max);

bool symmetry_dynamical_stability(bool unitary, bool symmetric);

}  // namespace sptq
