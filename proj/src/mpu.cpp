#include "sptq/mpu.hpp"

#include <algorithm>
#include <cmath>

namespace sptq {

namespace {

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

cmat kron(const cmat& a, const cmat& b) {
  cmat c(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return c;
}

struct FixedPoints {
  cvec r, l;  // (l|r) = 1
};

FixedPoints channel_fixed_points(const cmat& E) {
  Eigen::ComplexEigenSolver<cmat> er(E), el(cmat(E.adjoint()));
  auto top = [](const cvec& ev) {
    int b = 0;
    for (int i = 1; i < ev.size(); ++i)
      if (std::abs(ev(i)) > std::abs(ev(b))) b = i;
    return b;
  };
  FixedPoints fp;
  fp.r = er.eigenvectors().col(top(er.eigenvalues()));
  fp.l = el.eigenvectors().col(top(el.eigenvalues()));
  // the eigensolver only resolves the leading vectors to ~sqrt(eps) next to
  // the nilpotent block; E^(2^k) with 2^k >= dim is the projector itself
  cmat P = E;
  for (long long p = 1; p < E.rows(); p *= 2) {
    P = P * P;
    double n = P.norm();
    if (n > 0) P /= n;
  }
  cvec r = P * fp.r, l = P.adjoint() * fp.l;
  if (r.norm() > 1e-3 * fp.r.norm() && l.norm() > 1e-3 * fp.l.norm()) {
    fp.r = r / r.norm();
    fp.l = l / l.norm();
  }
  cd ov = fp.l.dot(fp.r);
  if (std::abs(ov) < 1e-12) throw Error(Errc::NotUnitary, "fixed points are orthogonal");
  fp.l /= std::conj(ov);
  return fp;
}

// Operator-Schmidt decomposition v = sum_s a_s (x) b_s with a_s on the first factor.
void operator_schmidt(const cmat& v, int d1, int d2, std::vector<cmat>& a, std::vector<cmat>& b) {
  // R[(i1 j1), (i2 j2)] = v[(i1 i2), (j1 j2)]
  cmat R(d1 * d1, d2 * d2);
  for (int i1 = 0; i1 < d1; ++i1)
    for (int j1 = 0; j1 < d1; ++j1)
      for (int i2 = 0; i2 < d2; ++i2)
        for (int j2 = 0; j2 < d2; ++j2) R(i1 * d1 + j1, i2 * d2 + j2) = v(i1 * d2 + i2, j1 * d2 + j2);
  Svd s = svd(R);
  a.clear();
  b.clear();
  for (int k = 0; k < s.s.size(); ++k) {
    if (s.s(k) <= 1e-12 * s.s(0)) break;
    cmat A(d1, d1), B(d2, d2);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j) A(i, j) = s.U(i * d1 + j, k) * std::sqrt(s.s(k));
    cvec bv = s.V.col(k).conjugate();
    for (int i = 0; i < d2; ++i)
      for (int j = 0; j < d2; ++j) B(i, j) = bv(i * d2 + j) * std::sqrt(s.s(k));
    a.push_back(A);
    b.push_back(B);
  }
}

MPUTensor assemble(const cmat& u, const std::vector<cmat>& Bleft, const std::vector<cmat>& Aright) {
  const int d = u.rows();
  const int DU = Aright.size();
  std::vector<cmat> U(size_t(d) * d, cmat::Zero(DU, DU));
  for (int s = 0; s < DU; ++s)
    for (int sp = 0; sp < DU; ++sp) {
      cmat G = Bleft[s] * Aright[sp] * u;
      for (int j = 0; j < d; ++j)
        for (int jp = 0; jp < d; ++jp) U[size_t(j) * d + jp](s, sp) = G(j, jp);
    }
  return make_mpu(d, std::move(U));
}

double residual_for(const std::vector<cmat>& Ts, const FixedPoints& fp) {
  // ||G_X^{1/2} Q G_Y^{1/2}||_F = ||R_X Q R_Y^dagger||_F with G_X = R_X^dagger R_X
  // from a QR of the stacked T's; square roots of G would floor it at ~1e-8
  const int n = Ts[0].rows();
  const long long m = (long long)Ts.size() * n;
  cmat AX(m, n), AY(m, n);
  for (size_t a = 0; a < Ts.size(); ++a) {
    AX.middleRows(a * n, n) = Ts[a];
    AY.middleRows(a * n, n) = Ts[a].adjoint();
  }
  auto rfac = [n](const cmat& A) {
    Eigen::HouseholderQR<cmat> qr(A);
    const int k = std::min<long long>(A.rows(), n);
    return cmat(qr.matrixQR().topRows(k).triangularView<Eigen::Upper>());
  };
  cmat Q = cmat::Identity(n, n) - fp.r * fp.l.adjoint();
  cmat X = rfac(AX) * Q * rfac(AY).adjoint();
  double norm = AX.norm() * AY.norm();
  return norm > 0 ? X.norm() / norm : 0.0;
}

}  // namespace

MPUTensor make_mpu(int d, std::vector<cmat> U) {
  if (d < 1 || U.size() != size_t(d) * d) throw Error(Errc::DimensionMismatch, "MPU needs d^2 tensors");
  MPUTensor m;
  m.d = d;
  m.DU = U[0].rows();
  for (auto& x : U)
    if (x.rows() != m.DU || x.cols() != m.DU) throw Error(Errc::DimensionMismatch, "MPU tensors must be DU x DU");
  m.U = std::move(U);
  return m;
}

cmat mpu_channel(const MPUTensor& mpu) {
  cmat E = mixed_transfer(mpu.U, mpu.U);
  return E / double(mpu.d);
}

MPUValidation validate(MPUTensor& mpu, const std::vector<int>& dense_lengths) {
  MPUValidation v;
  cmat E = mpu_channel(mpu);
  FixedPoints fp = channel_fixed_points(E);
  cd lead = fp.l.dot(E * fp.r);
  v.leading = std::abs(lead);
  if (std::abs(lead - 1.0) > 1e-8)
    throw Error(Errc::NotUnitary, "channel test: leading eigenvalue " + std::to_string(v.leading));
  cmat N = E - fp.r * fp.l.adjoint();
  cmat P = cmat::Identity(N.rows(), N.cols());
  for (int i = 0; i < mpu.DU * mpu.DU; ++i) P = P * N;
  v.nilpotency = spectral_norm(P);
  if (v.nilpotency > 1e-8) throw Error(Errc::NotUnitary, "channel test: subleading spectrum not zero");
  const int D = mpu.DU;
  cmat rho = Eigen::Map<const cmat>(fp.r.data(), D, D);
  rho /= rho.trace();
  mpu.rho = 0.5 * (rho + rho.adjoint());
  for (int L : dense_lengths) {
    if (ipow(mpu.d, L) > 4096) throw Error(Errc::SizeOverflow, "dense check limited to d^L <= 4096");
    cmat UL = dense_mpu(mpu, L);
    double res = max_abs(UL.adjoint() * UL - cmat::Identity(UL.rows(), UL.cols()));
    v.lengths.push_back(L);
    v.dense_residual.push_back(res);
    if (res > 1e-10) throw Error(Errc::NotUnitary, "dense test failed at L=" + std::to_string(L));
  }
  mpu.validated = true;
  return v;
}

MPUTensor block(const MPUTensor& mpu, int k, long long budget) {
  if (k < 1) throw Error(Errc::InvalidArgument, "block size k >= 1");
  const long long dk = ipow(mpu.d, k);
  if (dk * dk * mpu.DU * mpu.DU > budget) throw Error(Errc::SizeOverflow, "blocked tensor exceeds budget");
  MPUTensor cur = mpu;
  for (int step = 1; step < k; ++step) {
    const int dc = cur.d, d = mpu.d, dn = dc * d;
    std::vector<cmat> U(size_t(dn) * dn);
    for (int j1 = 0; j1 < dc; ++j1)
      for (int j2 = 0; j2 < d; ++j2)
        for (int p1 = 0; p1 < dc; ++p1)
          for (int p2 = 0; p2 < d; ++p2) U[size_t(j1 * d + j2) * dn + (p1 * d + p2)] = cur.at(j1, p1) * mpu.at(j2, p2);
    cur = make_mpu(dn, std::move(U));
  }
  cur.validated = false;
  cur.rho = mpu.rho;
  return cur;
}

double simpleness_residual(const MPUTensor& mpu, bool mirrored) {
  const int d = mpu.d;
  cmat E = mpu_channel(mpu);
  FixedPoints fp = channel_fixed_points(E);
  std::vector<cmat> Ts;
  Ts.reserve(size_t(d) * d);
  for (int a1 = 0; a1 < d; ++a1)
    for (int a2 = 0; a2 < d; ++a2) {
      cmat T = cmat::Zero(mpu.DU * mpu.DU, mpu.DU * mpu.DU);
      for (int m = 0; m < d; ++m) {
        const cmat& X = mirrored ? mpu.at(a1, m) : mpu.at(m, a1);
        const cmat& Y = mirrored ? mpu.at(a2, m) : mpu.at(m, a2);
        T += kron(X.conjugate(), Y);
      }
      Ts.push_back(std::move(T));
    }
  return residual_for(Ts, fp);
}

Simpleness simpleness_k0(const MPUTensor& mpu, int k_max, double tol, long long budget) {
  Simpleness s;
  for (int k = 1; k <= k_max; ++k) {
    MPUTensor b = block(mpu, k, budget);
    double r1 = simpleness_residual(b, false);
    double r2 = simpleness_residual(b, true);
    s.residual.push_back(r1);
    s.mirrored.push_back(r2);
    if (r1 < tol && r2 < tol) {
      s.k0 = k;
      return s;
    }
  }
  throw Error(Errc::NotSimpleWithin, "not simple within k_max=" + std::to_string(k_max));
}

std::vector<cmat> apply_tensors(const MPUTensor& mpu, const std::vector<cmat>& A) {
  if (int(A.size()) != mpu.d) throw Error(Errc::DimensionMismatch, "MPU and MPS physical dimensions differ");
  const int D = A[0].rows();
  std::vector<cmat> out(mpu.d, cmat::Zero(mpu.DU * D, mpu.DU * D));
  for (int j = 0; j < mpu.d; ++j)
    for (int jp = 0; jp < mpu.d; ++jp) out[j] += kron(mpu.at(j, jp), A[jp]);
  return out;
}

UniformMPS apply(const MPUTensor& mpu, const UniformMPS& mps) {
  UniformMPS raw = make_mps(apply_tensors(mpu, mps.A));
  return canonicalize(raw, true);
}

cmat dense_mpu(const MPUTensor& mpu, int L) {
  const int d = mpu.d, D = mpu.DU;
  const long long n = ipow(d, L);
  if (n > (1LL << 14)) throw Error(Errc::SizeOverflow, "dense MPU too large");
  cmat UL(n, n);
  std::vector<cmat> level, next;
  for (long long col = 0; col < n; ++col) {
    std::vector<int> jp(L);
    long long c = col;
    for (int s = L - 1; s >= 0; --s) {
      jp[s] = c % d;
      c /= d;
    }
    level.assign(1, cmat::Identity(D, D));
    for (int s = 0; s < L; ++s) {
      next.clear();
      next.reserve(level.size() * d);
      for (auto& m : level)
        for (int j = 0; j < d; ++j) next.push_back(m * mpu.at(j, jp[s]));
      level.swap(next);
    }
    for (long long row = 0; row < n; ++row) UL(row, col) = level[row].trace();
  }
  return UL;
}

MPUTensor bilayer_mpu(const cmat& u, const cmat& v, int dL, int dR) {
  const int d = dL * dR;
  if (u.rows() != d || v.rows() != dR * dL) throw Error(Errc::DimensionMismatch, "gate dimensions");
  std::vector<cmat> a, b;
  operator_schmidt(v, dR, dL, a, b);
  std::vector<cmat> Bleft, Aright;
  for (auto& x : b) Bleft.push_back(kron(x, cmat::Identity(dR, dR)));
  for (auto& x : a) Aright.push_back(kron(cmat::Identity(dL, dL), x));
  return assemble(u, Bleft, Aright);
}

MPUTensor commuting_bilayer_mpu(const cmat& u, const cmat& v) {
  const int d = u.rows();
  if (v.rows() != d * d) throw Error(Errc::DimensionMismatch, "gate dimensions");
  cmat I = cmat::Identity(d, d);
  cmat v12 = kron(v, I), v23 = kron(I, v);
  if (max_abs(v12 * v23 - v23 * v12) > 1e-12) throw Error(Errc::InvalidArgument, "overlapping gates do not commute");
  std::vector<cmat> a, b;
  operator_schmidt(v, d, d, a, b);
  return assemble(u, b, a);
}

SpectrumMatch transfer_spectrum_match(const cvec& before, const cvec& after, double tol) {
  SpectrumMatch m;
  std::vector<bool> used(after.size(), false);
  for (int i = 0; i < before.size(); ++i) {
    if (std::abs(before(i)) < 1e-6) continue;
    int best = -1;
    double dist = 1e300;
    for (int j = 0; j < after.size(); ++j)
      if (!used[j] && std::abs(after(j) - before(i)) < dist) {
        dist = std::abs(after(j) - before(i));
        best = j;
      }
    if (best < 0) return m;
    used[best] = true;
    m.max_dev = std::max(m.max_dev, dist);
  }
  for (int j = 0; j < after.size(); ++j)
    if (!used[j]) m.max_extra = std::max(m.max_extra, std::abs(after(j)));
  // Zero eigenvalues inside Jordan blocks are only resolved to eps^(1/size).
  m.ok = m.max_dev <= tol && m.max_extra < 1e-3;
  return m;
}

SupportCheck operator_support(const MPUTensor& mpu, const cmat& O, int k0, double tol) {
  const int d = mpu.d;
  SupportCheck sc;
  sc.L = 4 * k0 + 3;
  const int L = sc.L;
  const long long n = ipow(d, L);
  if (n > 4096) throw Error(Errc::SizeOverflow, "support check needs d^(4k0+3) <= 4096");
  cmat UL = dense_mpu(mpu, L);
  const int c = L / 2;
  cmat Ofull = kron(kron(cmat::Identity(ipow(d, c), ipow(d, c)), O), cmat::Identity(ipow(d, L - c - 1), ipow(d, L - c - 1)));
  cmat Op = UL * Ofull * UL.adjoint();
  auto residual = [&](int radius) {
    // window [c - radius, c + radius]
    const int lo = c - radius, w = 2 * radius + 1;
    const long long nw = ipow(d, w), nout = n / nw;
    auto split = [&](long long idx, long long& in, long long& out) {
      in = 0;
      out = 0;
      for (int s = 0; s < L; ++s) {
        long long dig = (idx / ipow(d, L - 1 - s)) % d;
        if (s >= lo && s < lo + w)
          in = in * d + dig;
        else
          out = out * d + dig;
      }
    };
    std::vector<long long> win(n), wout(n);
    for (long long i = 0; i < n; ++i) split(i, win[i], wout[i]);
    cmat red = cmat::Zero(nw, nw);
    for (long long i = 0; i < n; ++i)
      for (long long j = 0; j < n; ++j)
        if (wout[i] == wout[j]) red(win[i], win[j]) += Op(i, j);
    red /= double(nout);
    double r = 0;
    for (long long i = 0; i < n; ++i)
      for (long long j = 0; j < n; ++j) {
        cd expect = wout[i] == wout[j] ? red(win[i], win[j]) : cd(0);
        r = std::max(r, std::abs(Op(i, j) - expect));
      }
    return r;
  };
  sc.support = L;
  for (int radius = 0; 2 * radius + 1 <= L; ++radius)
    if (residual(radius) < tol) {
      sc.support = 2 * radius + 1;
      break;
    }
  sc.residual = residual(k0);
  return sc;
}

double symmetry_residual(const MPUTensor& mpu, const cmat& rho_g, int L) {
  cmat UL = dense_mpu(mpu, L);
  cmat R = rho_g;
  for (int s = 1; s < L; ++s) R = kron(R, rho_g);
  return max_abs(R * UL - UL * R);
}

cmat reduced_density(const cvec& psi, long long dimA, long long dimB) {
  if (psi.size() != dimA * dimB) throw Error(Errc::DimensionMismatch, "state size");
  // row-major split: index = a * dimB + b
  cmat M(dimA, dimB);
  for (long long a = 0; a < dimA; ++a)
    for (long long b = 0; b < dimB; ++b) M(a, b) = psi(a * dimB + b);
  return M * M.adjoint();
}

StabilityCheck reduced_density_stability_check(const cmat& U, const cmat& Up, const cvec& psi0, long long dim_cut) {
  const long long n = psi0.size();
  if (U.rows() != n || Up.rows() != n || n % dim_cut) throw Error(Errc::DimensionMismatch, "dense sizes");
  cmat r1 = reduced_density(U * psi0, dim_cut, n / dim_cut);
  cmat r2 = reduced_density(Up * psi0, dim_cut, n / dim_cut);
  StabilityCheck s;
  s.lhs = spectral_norm(r1 - r2);
  s.rhs = spectral_norm(U - Up);
  s.holds = s.lhs <= s.rhs + 1e-10;
  return s;
}

}  // namespace sptq
