#include "sptq/freefermion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sptq {

BlochModel make_bloch(int d, std::map<int, cmat> comps, double strip) {
  BlochModel m;
  m.d = d;
  m.strip = strip;
  for (auto& [n, h] : comps)
    if (h.rows() != d || h.cols() != d) throw Error(Errc::DimensionMismatch, "Fourier component has wrong size");
  for (auto& [n, h] : std::map<int, cmat>(comps)) {
    auto it = comps.find(-n);
    if (it == comps.end()) {
      comps[-n] = h.adjoint();
    } else if (max_abs(it->second - h.adjoint()) > 1e-12 * std::max(1.0, max_abs(h))) {
      throw Error(Errc::NotHermitian, "H_{-n} != H_n^dagger for n = " + std::to_string(n));
    }
  }
  if (!comps.count(0)) comps[0] = cmat::Zero(d, d);
  m.H = std::move(comps);
  return m;
}

cmat bloch_at(const BlochModel& m, cd k) {
  if (std::abs(k.imag()) > m.strip)
    throw Error(Errc::StripExceeded, "Im k beyond the convergence strip");
  cmat out = cmat::Zero(m.d, m.d);
  for (auto& [n, h] : m.H) out += std::exp(cd(0, 1) * k * double(n)) * h;
  return out;
}

RealSpaceHamiltonian real_space(const BlochModel& m, int L, bool periodic) {
  if (L < 1) throw Error(Errc::InvalidGeometry, "L must be positive");
  RealSpaceHamiltonian r;
  r.L = L;
  r.d = m.d;
  r.periodic = periodic;
  const int d = m.d;
  r.H = cmat::Zero(L * d, L * d);
  for (int j = 0; j < L; ++j)
    for (auto& [n, h] : m.H) {
      int jp = j + n;
      if (periodic) {
        jp = ((jp % L) + L) % L;
      } else if (jp < 0 || jp >= L) {
        continue;
      }
      r.H.block(j * d, jp * d, d, d) += h;
    }
  r.H = 0.5 * (r.H + r.H.adjoint()).eval();
  return r;
}

namespace {

cmat contour_integral(const cmat& H, double xl, double xr, double h, int n) {
  const int d = H.rows();
  const Quadrature& q = gauss_legendre(n);
  cmat acc = cmat::Zero(d, d);
  const cd corners[4] = {cd(xl, -h), cd(xr, -h), cd(xr, h), cd(xl, h)};
  cmat I = cmat::Identity(d, d);
  for (int s = 0; s < 4; ++s) {
    cd a = corners[s], b = corners[(s + 1) % 4];
    cd half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
      cd z = mid + half * q.x[i];
      cmat Rz = (z * I - H).partialPivLu().inverse();
      if (!Rz.allFinite() || Rz.norm() > 1e12)
        throw Error(Errc::ContourSingular, "resolvent norm exceeds 1e12 on the contour");
      acc += (q.w[i] * half) * Rz;
    }
  }
  return acc / cd(0, 2 * M_PI);
}

}  // namespace

cmat bloch_projector(const BlochModel& m, cd k, const ContourOptions& opt) {
  HermEig real_spec = herm_eig(bloch_at(m, cd(k.real(), 0)));
  double emin = real_spec.values.cwiseAbs().minCoeff();
  if (emin < opt.gap_tol) throw Error(Errc::GapClosure, "gap closes at Re k = " + std::to_string(k.real()));
  cmat H = bloch_at(m, k);
  Eigen::ComplexEigenSolver<cmat> es(H, false);
  double re_min = es.eigenvalues().real().minCoeff();
  double im_max = es.eigenvalues().imag().cwiseAbs().maxCoeff();
  double bw = real_spec.values.maxCoeff() - real_spec.values.minCoeff();
  double xl = std::min(re_min, real_spec.values.minCoeff()) - 1.0;
  double xr = -opt.gap_tol / 2;
  double h = std::max(bw, 2 * im_max + 1.0);
  int n = opt.n_start;
  cmat P = contour_integral(H, xl, xr, h, n);
  while (n < opt.n_max) {
    n *= 2;
    cmat P2 = contour_integral(H, xl, xr, h, n);
    double diff = max_abs(P2 - P);
    P = P2;
    if (diff < opt.tol * std::max(1.0, max_abs(P))) return P;
  }
  throw Error(Errc::ContourSingular, "contour quadrature did not converge (eigenvalue near the contour)");
}

FermiProjector fermi_projector(const RealSpaceHamiltonian& H, double gap_tol) {
  HermEig e = herm_eig(H.H);
  double gmin = e.values.cwiseAbs().minCoeff();
  if (gmin < gap_tol) throw Error(Errc::GapClosure, "zero-energy gap below tolerance");
  FermiProjector P;
  P.L = H.L;
  P.d = H.d;
  int occ = 0;
  while (occ < e.values.size() && e.values(occ) < 0) ++occ;
  P.occupied = occ;
  cmat V = e.vectors.leftCols(occ);
  P.P = V * V.adjoint();
  return P;
}

KProjector k_projector(const BlochModel& m, int Nk, double gap_tol) {
  KProjector out;
  out.d = m.d;
  out.k.resize(Nk);
  out.P.resize(Nk);
  for (int i = 0; i < Nk; ++i) {
    double k = 2 * M_PI * i / Nk;
    out.k[i] = k;
    HermEig e = herm_eig(bloch_at(m, k));
    if (e.values.cwiseAbs().minCoeff() < gap_tol) throw Error(Errc::GapClosure, "gap closes on the k-grid");
    int occ = 0;
    while (occ < m.d && e.values(occ) < 0) ++occ;
    if (i == 0) out.occupied = occ;
    cmat V = e.vectors.leftCols(occ);
    out.P[i] = V * V.adjoint();
  }
  return out;
}

FermiProjector evolve_projector(const FermiProjector& P0, const HermEig& H, double t) {
  if (H.vectors.rows() != P0.P.rows()) throw Error(Errc::DimensionMismatch, "projector and Hamiltonian sizes differ");
  cmat U = expm_herm(H, t);
  FermiProjector P = P0;
  P.P = U * P0.P * U.adjoint();
  return P;
}

FermiProjector evolve_projector(const FermiProjector& P0, const RealSpaceHamiltonian& H, double t) {
  if (H.H.rows() != P0.P.rows()) throw Error(Errc::DimensionMismatch, "projector and Hamiltonian sizes differ");
  return evolve_projector(P0, herm_eig(H.H), t);
}

KProjector evolve_projector(const KProjector& P0, const BlochModel& m, double t) {
  if (m.d != P0.d) throw Error(Errc::DimensionMismatch, "band counts differ");
  KProjector P = P0;
  for (size_t i = 0; i < P0.k.size(); ++i) {
    cmat U = expm_herm(bloch_at(m, P0.k[i]), t);
    P.P[i] = U * P0.P[i] * U.adjoint();
  }
  return P;
}

std::vector<cmat> kspace_blocks(const KProjector& P, int M) {
  const int Nk = P.k.size();
  std::vector<cmat> B(2 * M + 1, cmat::Zero(P.d, P.d));
  for (int m = -M; m <= M; ++m) {
    cmat acc = cmat::Zero(P.d, P.d);
    for (int i = 0; i < Nk; ++i) acc += std::exp(cd(0, P.k[i] * m)) * P.P[i];
    B[m + M] = acc / double(Nk);
  }
  return B;
}

cmat toeplitz_segment(const KProjector& P, int l) {
  const int Nk = P.k.size();
  if (Nk < 8 * l) throw Error(Errc::GridTooCoarse, "need N_k >= 8 l");
  const int d = P.d;
  std::vector<cmat> B = kspace_blocks(P, l - 1);
  cmat S(l * d, l * d);
  for (int j = 0; j < l; ++j)
    for (int jp = 0; jp < l; ++jp) S.block(j * d, jp * d, d, d) = B[j - jp + l - 1];
  return 0.5 * (S + S.adjoint());
}

SpectrumReport sp_report(std::vector<double> xi) {
  double excursion = 0;
  for (double& x : xi) {
    excursion = std::max({excursion, -x, x - 1});
    x = std::clamp(x, 0.0, 1.0);
  }
  if (excursion > 1e-8) warn("single-particle ES left [0,1] by " + std::to_string(excursion));
  std::sort(xi.begin(), xi.end(), std::greater<double>());
  SpectrumReport r;
  r.values = std::move(xi);
  r.clusters = cluster_values(r.values, 1e-8);
  if (!r.values.empty()) r.gap = sp_gap(r);
  return r;
}

SpectrumReport sp_es(const FermiProjector& P, int l) {
  if (l < 1 || l >= P.L) throw Error(Errc::InvalidGeometry, "need 1 <= l < L");
  const int n = l * P.d;
  HermEig e = herm_eig(P.P.topLeftCorner(n, n));
  return sp_report(std::vector<double>(e.values.data(), e.values.data() + n));
}

SpectrumReport sp_es(const KProjector& P, int l) {
  if (l < 1) throw Error(Errc::InvalidGeometry, "need l >= 1");
  HermEig e = herm_eig(toeplitz_segment(P, l));
  return sp_report(std::vector<double>(e.values.data(), e.values.data() + e.values.size()));
}

double sp_gap(const SpectrumReport& r) {
  if (r.values.empty()) throw Error(Errc::EmptySpectrum, "no single-particle values");
  double g = std::numeric_limits<double>::infinity();
  for (double x : r.values) g = std::min(g, std::abs(x - 0.5));
  return 2 * g;
}

double sp_entropy(const SpectrumReport& r) {
  double s = 0;
  for (double x : r.values) {
    if (x > 0 && x < 1) s -= x * std::log(x) + (1 - x) * std::log(1 - x);
  }
  return s;
}

SpectrumReport mb_es_from_sp(const SpectrumReport& r, int mode_cap) {
  if (mode_cap > 20) throw Error(Errc::CapTooLarge, "2^mode_cap exceeds 2^20");
  std::vector<double> xi = r.values;
  std::sort(xi.begin(), xi.end(), [](double a, double b) {
    return std::min(a, 1 - a) > std::min(b, 1 - b);
  });
  const int nm = std::min<int>(mode_cap, xi.size());
  double frozen = 1;
  for (size_t i = nm; i < xi.size(); ++i) frozen *= std::max(xi[i], 1 - xi[i]);
  std::vector<double> vals(size_t(1) << nm);
  for (size_t s = 0; s < vals.size(); ++s) {
    double p = frozen;
    for (int i = 0; i < nm; ++i) p *= (s >> i & 1) ? xi[i] : 1 - xi[i];
    vals[s] = p;
  }
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  SpectrumReport out;
  out.values = std::move(vals);
  out.clusters = cluster_values(out.values, 1e-12);
  return out;
}

cmat ssh_cell_basis() {
  cmat W = cmat::Zero(2, 2);
  W(0, 0) = 1;
  W(1, 1) = cd(0, 1);
  return W;
}

rmat majorana_r(const FermiProjector& P, const cmat& cell_basis) {
  const int d = cell_basis.rows();
  if (P.d != d) throw Error(Errc::DimensionMismatch, "cell basis does not match band count");
  const int n = P.P.rows();
  cmat W = cmat::Zero(n, n);
  for (int j = 0; j < P.L; ++j) W.block(j * d, j * d, d, d) = cell_basis;
  cmat F = cmat::Identity(n, n) - 2.0 * P.P;
  cmat R = cd(0, -1) * (W.adjoint() * F * W);
  double im = R.imag().cwiseAbs().maxCoeff();
  if (im > 1e-8) throw Error(Errc::NotParticleHole, "imaginary part " + std::to_string(im) + " left in R");
  rmat Rr = R.real();
  return 0.5 * (Rr - Rr.transpose());
}

int z2_index(const FermiProjector& P, const cmat& cell_basis) {
  rmat R = majorana_r(P, cell_basis);
  double pf = pfaffian(R);
  int s = pf > 0 ? 1 : -1;
  // calibration: the fully dimerized intra-cell state maps to +1
  if ((R.rows() / 2) % 2) s = -s;
  return s;
}

HalfChain halfchain_structure(const FermiProjector& P, const cmat& cell_basis) {
  if (P.L % 2) throw Error(Errc::NotSymmetricBipartition, "L must be even");
  rmat R = majorana_r(P, cell_basis);
  const int n = R.rows() / 2;
  HalfChain hc;
  hc.Rd = R.topLeftCorner(n, n);
  hc.Ro = R.topRightCorner(n, n);
  double mis = std::max((R.bottomRightCorner(n, n) - hc.Rd).cwiseAbs().maxCoeff(),
                        (R.bottomLeftCorner(n, n) - hc.Ro).cwiseAbs().maxCoeff());
  if (mis > 1e-8) throw Error(Errc::NotSymmetricBipartition, "half-chain blocks are not translation related");
  hc.anticommutator = (hc.Rd * hc.Ro + hc.Ro * hc.Rd).norm();
  hc.square_residual = (hc.Rd * hc.Rd + hc.Ro * hc.Ro + rmat::Identity(n, n)).norm();

  cmat iRd = cd(0, 1) * hc.Rd.cast<cd>();
  HermEig e = herm_eig(iRd);
  hc.sp_gap = e.values.cwiseAbs().minCoeff();
  std::vector<double> interior;
  for (int i = 0; i < n; ++i)
    if (std::abs(e.values(i)) < 1 - 1e-9) interior.push_back(e.values(i));
  hc.pairwise_degenerate = interior.size() % 2 == 0;
  for (size_t i = 0; i + 1 < interior.size(); i += 2) {
    double w = std::abs(interior[i + 1] - interior[i]);
    hc.max_pair_width = std::max(hc.max_pair_width, w);
  }
  if (hc.max_pair_width > 1e-9) hc.pairwise_degenerate = false;

  Eigen::SelfAdjointEigenSolver<rmat> so(-(hc.Ro * hc.Ro));
  double smin = so.eigenvalues().minCoeff();
  hc.ro_invertible = smin > 1e-10;
  if (hc.ro_invertible) {
    rmat isq = so.eigenvectors() * so.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
               so.eigenvectors().transpose();
    rmat M = isq * hc.Ro;
    hc.antiunitary_residual = (M * M + rmat::Identity(n, n)).norm();
    // A = M K; A (i R_d) A^{-1} = M conj(i R_d) M^{-1}
    cmat A = M.cast<cd>();
    cmat lhs = A * iRd.conjugate();
    cmat rhs = iRd * A;
    hc.commute_residual = (lhs - rhs).norm();
  }
  return hc;
}

double finite_size_identity_residual(const BlochModel& m, int L, int n_max) {
  if (L < 4) throw Error(Errc::InvalidGeometry, "need L >= 4");
  FermiProjector PL = fermi_projector(real_space(m, L, true));
  const int M = (n_max + 1) * L + L;
  int Nk = 1024;
  while (Nk < 16 * M) Nk *= 2;
  KProjector Pk = k_projector(m, Nk);
  std::vector<cmat> B = kspace_blocks(Pk, M);
  const int d = m.d;
  double res = 0;
  for (int j = 0; j < L; ++j)
    for (int jp = 0; jp < L; ++jp) {
      cmat acc = PL.P.block(j * d, jp * d, d, d);
      for (int n = -n_max; n <= n_max; ++n) acc -= B[j - (jp + n * L) + M];
      res = std::max(res, spectral_norm(acc));
    }
  return res;
}

bool symmetry_dynamical_stability(bool unitary, bool symmetric) { return unitary == symmetric; }

}  // namespace sptq
