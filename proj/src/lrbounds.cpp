#include "sptq/lrbounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace sptq {

namespace {

// Golden-section maximization of f on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b, double* arg = nullptr) {
  const double g = 0.5 * (std::sqrt(5.0) - 1);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  if (arg) *arg = f1 > f2 ? x1 : x2;
  return std::max(f1, f2);
}

double im_spread(const BlochModel& m, double k, double kappa) {
  Eigen::ComplexEigenSolver<cmat> es(bloch_at(m, cd(k, kappa)), false);
  auto im = es.eigenvalues().imag();
  return im.maxCoeff() - im.minCoeff();
}

}  // namespace

double lr_velocity(const BlochModel& model, double kappa, int n_k) {
  if (kappa <= 0) throw Error(Errc::InvalidArgument, "kappa must be positive");
  std::vector<double> s(n_k);
  for (int i = 0; i < n_k; ++i) s[i] = im_spread(model, -M_PI + 2 * M_PI * i / n_k, kappa);
  double best = -1;
  int ib = 0;
  for (int i = 0; i < n_k; ++i)
    if (s[i] > best) best = s[i], ib = i;
  double h = 2 * M_PI / n_k;
  double k0 = -M_PI + h * ib;
  double refined = golden_max([&](double k) { return im_spread(model, k, kappa); }, k0 - h, k0 + h);
  return std::max(best, refined) / kappa;
}

double continuation_strip(const BlochModel& model0, const BlochModel& model, double kappa_max,
                          int n_kappa, int n_k) {
  double last = 0;
  for (int i = 1; i <= n_kappa; ++i) {
    double kappa = kappa_max * i / n_kappa;
    bool ok = true;
    try {
      for (int j = 0; j < n_k && ok; ++j) {
        double k = -M_PI + 2 * M_PI * j / n_k;
        bloch_projector(model0, cd(k, kappa));
        if (general_eig(bloch_at(model, cd(k, kappa))).defective) ok = false;
      }
    } catch (const Error& e) {
      if (e.code() == Errc::GapClosure && i == 1) throw Error(Errc::NoValidStrip, e.what());
      ok = false;
    }
    if (!ok) break;
    last = kappa;
  }
  if (last <= 0) throw Error(Errc::NoValidStrip, "smallest scanned kappa already fails");
  return last;
}

namespace {

struct CIntegrand {
  double value = 0;
  double spread = 0;
  bool defective = false;
};

CIntegrand c_integrand(const BlochModel& m0, const BlochModel& m, double k, double kappa) {
  CIntegrand out;
  BiorthEig e = general_eig(bloch_at(m, cd(k, kappa)));
  if (e.defective) {
    out.defective = true;
    return out;
  }
  double s = 0;
  for (int a = 0; a < e.values.size(); ++a) s += e.right.col(a).norm() * e.left.col(a).norm();
  cmat P0 = bloch_projector(m0, cd(k, kappa));
  out.value = s * s * spectral_norm(P0);
  auto im = e.values.imag();
  out.spread = im.maxCoeff() - im.minCoeff();
  return out;
}

bool c_quadrature(const BlochModel& m0, const BlochModel& m, double kappa, int Nk, int threads,
                  double& C) {
  std::vector<CIntegrand> vals(Nk);
  parallel_for(Nk, threads, [&](int i) {
    vals[i] = c_integrand(m0, m, -M_PI + 2 * M_PI * i / Nk, kappa);
  });
  double acc = 0;
  for (auto& v : vals) {
    if (v.defective) return false;
    acc += v.value;
  }
  C = acc / Nk;
  return true;
}

}  // namespace

LRConstants lr_constants(const BlochModel& model0, const BlochModel& model, double kappa,
                         double rel_tol, int threads) {
  if (kappa <= 0) throw Error(Errc::InvalidArgument, "kappa must be positive");
  LRConstants out;
  double kap = kappa;
  for (int attempt = 0; attempt < 2; ++attempt) {
    int Nk = 64;
    double prev = 0, C = 0;
    bool ok = c_quadrature(model0, model, kap, Nk, threads, prev);
    while (ok) {
      Nk *= 2;
      ok = c_quadrature(model0, model, kap, Nk, threads, C);
      if (!ok) break;
      if (std::abs(C - prev) <= rel_tol * C || Nk >= 1 << 15) break;
      prev = C;
    }
    if (ok) {
      out.kappa = kap;
      out.C = C;
      out.Nk = Nk;
      out.C_change = std::abs(C - prev);
      out.v = lr_velocity(model, kap);
      out.strip_valid = true;
      return out;
    }
    kap += 1e-6;
  }
  throw Error(Errc::DefectivePoint, "H(k + i kappa) defective at a quadrature node");
}

namespace {

rvec sorted_bands(const BlochModel& m, double k) { return herm_eig(bloch_at(m, k)).values; }

rvec band_velocity(const BlochModel& m, double k) {
  const double h = 1e-3;
  rvec a = sorted_bands(m, k - 2 * h), b = sorted_bands(m, k - h), c = sorted_bands(m, k + h),
       e = sorted_bands(m, k + 2 * h);
  return (a - 8 * b + 8 * c - e) / (12 * h);
}

}  // namespace

VelocityReport group_velocities(const BlochModel& model, int n_k) {
  VelocityReport r;
  const double h = 2 * M_PI / n_k;
  for (int i = 0; i < n_k; ++i) {
    double k = -M_PI + h * i;
    rvec e = sorted_bands(model, k);
    for (int a = 0; a + 1 < e.size(); ++a)
      if (e(a + 1) - e(a) < 1e-6) throw Error(Errc::BandTrackingFailure, "near-degenerate bands at k = " + std::to_string(k));
    rvec v = band_velocity(model, k);
    r.k.push_back(k);
    r.vg.emplace_back(v.data(), v.data() + v.size());
  }
  auto absmax = [&](double k) { return band_velocity(model, k).cwiseAbs().maxCoeff(); };
  auto relmax = [&](double k) {
    rvec v = band_velocity(model, k);
    return v.maxCoeff() - v.minCoeff();
  };
  int ia = 0, ir = 0;
  double ba = -1, br = -1;
  for (int i = 0; i < n_k; ++i) {
    const auto& v = r.vg[i];
    double a = 0, lo = v[0], hi = v[0];
    for (double x : v) a = std::max(a, std::abs(x)), lo = std::min(lo, x), hi = std::max(hi, x);
    if (a > ba) ba = a, ia = i;
    if (hi - lo > br) br = hi - lo, ir = i;
  }
  double arg = r.k[ia];
  r.v_max = std::max(ba, golden_max(absmax, r.k[ia] - h, r.k[ia] + h, &arg));
  r.k_at_vmax = arg;
  r.v_mr = std::max(br, golden_max(relmax, r.k[ir] - h, r.k[ir] + h));
  return r;
}

double gap_bound(const LRConstants& c, int l, double t) { return c.C * std::exp(-c.kappa * (l - c.v * t)); }

FiniteSizeBounds finite_size_bounds(const LRConstants& c, int l, int L, double t) {
  if (l < 1 || L <= l) throw Error(Errc::InvalidGeometry, "need 1 <= l < L");
  const double k = c.kappa;
  FiniteSizeBounds b;
  b.segment_correction =
      2 * c.C * std::exp(k * c.v * t) * std::sinh(k * l) / (std::expm1(k * L) * std::sinh(k));
  long long lcm = std::lcm<long long>(L, 2LL * l);
  double bracket = 1 / std::expm1(k * L) + 1 / std::expm1(2 * k * l) - 2 / std::expm1(k * double(lcm));
  if (L == 2 * l) bracket = 0;
  b.finite_gap_bound = 4 * c.C * std::sinh(k * l) / std::sinh(k) * std::exp(k * c.v * t) * bracket;
  return b;
}

MonotonicityScan velocity_monotonicity_scan(const BlochModel& model, const std::vector<double>& kappa_grid) {
  MonotonicityScan s;
  for (double kap : kappa_grid) {
    for (int j = 0; j < 256; ++j) {
      double k = -M_PI + 2 * M_PI * j / 256;
      if (general_eig(bloch_at(model, cd(k, kap))).defective)
        throw Error(Errc::DefectivePoint, "defective point in velocity scan");
    }
    s.kappa.push_back(kap);
    s.v.push_back(lr_velocity(model, kap));
  }
  for (size_t i = 1; i < s.v.size(); ++i)
    if (s.v[i] < s.v[i - 1] - 1e-9) s.monotone = false;
  return s;
}

double majorization_kernel(double k, double kappa1, double kappa2, int image_terms) {
  if (!(kappa1 > 0) || kappa2 < 0 || kappa2 >= kappa1)
    throw Error(Errc::InvalidArgument, "need kappa1 > kappa2 >= 0");
  auto Y = [&](double x) {
    double c = std::cosh(M_PI * x / kappa1);
    if (kappa2 == 0) return M_PI / (2 * kappa1 * (c + 1));
    double a = M_PI * kappa2 / kappa1;
    return std::sin(a) / (2 * kappa2 * (c + std::cos(a)));
  };
  double s = 0;
  for (int n = -image_terms; n <= image_terms; ++n) s += Y(k + 2 * M_PI * n);
  return s;
}

HarmonicCheck discrete_harmonic_check(const std::vector<double>& boundary, int rows) {
  if (rows < 3) throw Error(Errc::InvalidArgument, "rows must be >= 3");
  const int L = boundary.size();
  if (L < 3) throw Error(Errc::InvalidArgument, "boundary needs at least 3 points");
  HarmonicCheck hc;
  hc.f.assign(rows, std::vector<double>(L, 0.0));
  hc.f[1] = boundary;
  for (int r = 1; r + 1 < rows; ++r)
    for (int j = 0; j < L; ++j)
      hc.f[r + 1][j] = 4 * hc.f[r][j] - hc.f[r][(j + L - 1) % L] - hc.f[r][(j + 1) % L] - hc.f[r - 1][j];
  double scale = 1;
  for (auto& row : hc.f)
    for (double x : row) scale = std::max(scale, std::abs(x));
  for (int r = 1; r + 1 < rows; ++r)
    for (int j = 0; j < L; ++j) {
      double lap = hc.f[r + 1][j] + hc.f[r - 1][j] + hc.f[r][(j + L - 1) % L] + hc.f[r][(j + 1) % L] - 4 * hc.f[r][j];
      hc.residual = std::max(hc.residual, std::abs(lap) / scale);
    }
  if (hc.residual >= 1e-10) throw Error(Errc::NoConvergence, "discrete Laplace residual too large");
  for (auto& row : hc.f) hc.row_max.push_back(*std::max_element(row.begin(), row.end()));
  const double slack = 1e-12 * scale;
  for (int r = 1; r + 1 < rows; ++r) {
    double d1 = hc.row_max[r + 1] - hc.row_max[r], d0 = hc.row_max[r] - hc.row_max[r - 1];
    if (d1 < d0 - slack) hc.monotone = false;
    if (hc.row_max[r + 1] / (r + 1) < hc.row_max[r] / r - slack) hc.monotone = false;
  }
  return hc;
}

}  // namespace sptq
