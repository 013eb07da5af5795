#pragma once

#include <utility>
#include <vector>

#include "sptq/freefermion.hpp"

namespace sptq {

struct LRConstants {
  double kappa = 0;
  double v = 0;
  double C = 0;
  bool strip_valid = false;
  int Nk = 0;           // final quadrature grid
  double C_change = 0;  // |C(Nk) - C(Nk/2)|
};

struct VelocityReport {
  double v_max = 0;
  double v_mr = 0;
  double k_at_vmax = 0;
  std::vector<double> k;
  std::vector<std::vector<double>> vg;  // vg[i][alpha], bands sorted by energy
};

// Largest kappa on a uniform scan of (0, kappa_max] for which the initial
// projector continues and H(k + i kappa) stays diagonalizable.
double continuation_strip(const BlochModel& model0, const BlochModel& model, double kappa_max,
                          int n_kappa = 64, int n_k = 256);

LRConstants lr_constants(const BlochModel& model0, const BlochModel& model, double kappa,
                         double rel_tol = 1e-9, int threads = 1);
// v only; cheaper than lr_constants.
double lr_velocity(const BlochModel& model, double kappa, int n_k = 512);

VelocityReport group_velocities(const BlochModel& model, int n_k = 1024);

double gap_bound(const LRConstants& c, int l, double t);

struct FiniteSizeBounds {
  double segment_correction = 0;
  double finite_gap_bound = 0;
};
FiniteSizeBounds finite_size_bounds(const LRConstants& c, int l, int L, double t);

struct MonotonicityScan {
  bool monotone = true;
  std::vector<double> kappa;
  std::vector<double> v;
};
MonotonicityScan velocity_monotonicity_scan(const BlochModel& model, const std::vector<double>& kappa_grid);

double majorization_kernel(double k, double kappa1, double kappa2, int image_terms);

struct HarmonicCheck {
  bool monotone = true;
  double residual = 0;
  std::vector<double> row_max;
  std::vector<std::vector<double>> f;  // f[j'][j], j' = 0..rows-1
};
HarmonicCheck discrete_harmonic_check(const std::vector<double>& boundary, int rows);

}  // namespace sptq
