#include "sptq/tensornet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sptq {

namespace {

cvec vec(const cmat& X) { return Eigen::Map<const cvec>(X.data(), X.size()); }

cmat unvec(const cvec& v, int D) { return Eigen::Map<const cmat>(v.data(), D, D); }

cmat power(const cmat& X, int n) {
  cmat R = cmat::Identity(X.rows(), X.cols());
  cmat B = X;
  while (n > 0) {
    if (n & 1) R = R * B;
    n >>= 1;
    if (n) B = B * B;
  }
  return R;
}

// Leading eigenpair by magnitude together with the second largest magnitude.
struct Leading {
  cd value;
  cvec vector;
  double second = 0;
};

Leading leading_eig(const cmat& T) {
  Eigen::ComplexEigenSolver<cmat> es(T);
  if (es.info() != Eigen::Success) throw Error(Errc::ConvergenceFailure, "transfer eigensolver stalled");
  const int n = T.rows();
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best))) best = i;
  Leading L;
  L.value = es.eigenvalues()(best);
  L.vector = es.eigenvectors().col(best);
  for (int i = 0; i < n; ++i)
    if (i != best) L.second = std::max(L.second, std::abs(es.eigenvalues()(i)));
  return L;
}

cmat positive_fixed_point(const cvec& v, int D) {
  cmat X = unvec(v, D);
  cd tr = X.trace();
  if (std::abs(tr) < 1e-300) throw Error(Errc::NonInjective, "fixed point has zero trace");
  X /= tr;
  return 0.5 * (X + X.adjoint());
}

}  // namespace

UniformMPS make_mps(std::vector<cmat> A) {
  if (A.empty()) throw Error(Errc::InvalidArgument, "MPS needs at least one tensor");
  UniformMPS m;
  m.d = A.size();
  m.D = A[0].rows();
  for (auto& a : A)
    if (a.rows() != m.D || a.cols() != m.D) throw Error(Errc::DimensionMismatch, "MPS tensors must be D x D");
  m.A = std::move(A);
  m.canonical = unital_residual(m.A) < 1e-10;
  return m;
}

cmat transfer_matrix(const std::vector<cmat>& A) { return mixed_transfer(A, A); }

cmat mixed_transfer(const std::vector<cmat>& bra, const std::vector<cmat>& ket) {
  const int D1 = bra[0].rows(), D2 = ket[0].rows();
  cmat T = cmat::Zero(D1 * D2, D1 * D2);
  for (size_t j = 0; j < bra.size(); ++j) {
    const cmat Ab = bra[j].conjugate();
    const cmat& Ak = ket[j];
    for (int a = 0; a < D1; ++a)
      for (int c = 0; c < D1; ++c) {
        cd x = Ab(a, c);
        if (x == cd(0)) continue;
        T.block(a * D2, c * D2, D2, D2) += x * Ak;
      }
  }
  return T;
}

double unital_residual(const std::vector<cmat>& A) {
  const int D = A[0].rows();
  cmat S = cmat::Zero(D, D);
  for (auto& a : A) S += a * a.adjoint();
  return max_abs(S - cmat::Identity(D, D));
}

cmat realign(const cmat& T, int D) {
  cmat R(D * D, D * D);
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c)
        for (int e = 0; e < D; ++e) R(a * D + b, c * D + e) = T(a * D + c, b * D + e);
  return R;
}

cmat swap_factors(const cmat& X, int D) {
  cmat R(D * D, D * D);
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c)
        for (int e = 0; e < D; ++e) R(a * D + b, c * D + e) = X(b * D + a, e * D + c);
  return R;
}

UniformMPS canonicalize(const UniformMPS& mps, bool restrict_support) {
  const int D = mps.D;
  cmat T = transfer_matrix(mps.A);
  Leading lead = leading_eig(T);
  double lam = std::abs(lead.value);
  if (lam <= 0) throw Error(Errc::NonInjective, "transfer channel is nilpotent");
  if (lead.second > lam * (1 - 1e-8)) throw Error(Errc::NonInjective, "leading transfer eigenvalue is degenerate");
  std::vector<cmat> A = mps.A;
  for (auto& a : A) a /= std::sqrt(lam);
  cmat R = positive_fixed_point(lead.vector, D);
  HermEig e = herm_eig(R, 1e-8);
  double top = e.values.maxCoeff();
  int rank = 0;
  for (int i = 0; i < D; ++i)
    if (e.values(i) > 1e-10 * top) ++rank;
  if (e.values.minCoeff() < -1e-8 * top) throw Error(Errc::NonInjective, "fixed point is not positive");
  if (rank < D) {
    if (!restrict_support) throw Error(Errc::NonInjective, "fixed point is singular");
    cmat P = e.vectors.rightCols(rank);
    for (auto& a : A) a = (P.adjoint() * a * P).eval();
    UniformMPS sub = make_mps(A);
    return canonicalize(sub, false);
  }
  rvec s = e.values.cwiseSqrt();
  cmat Rh = e.vectors * s.asDiagonal() * e.vectors.adjoint();
  cmat Rih = e.vectors * s.cwiseInverse().asDiagonal() * e.vectors.adjoint();
  for (auto& a : A) a = (Rih * a * Rh).eval();
  UniformMPS out = make_mps(A);
  if (unital_residual(out.A) > 1e-10) throw Error(Errc::NonInjective, "canonical gauge not reached");
  out.canonical = true;
  return out;
}

TransferChannel transfer_analysis(const UniformMPS& in) {
  UniformMPS mps = in.canonical ? in : canonicalize(in);
  const int D = mps.D;
  TransferChannel ch;
  ch.T = transfer_matrix(mps.A);
  Eigen::ComplexEigenSolver<cmat> es(ch.T);
  cvec ev = es.eigenvalues();
  std::vector<int> order(ev.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(ev(a)) > std::abs(ev(b)); });
  ch.spectrum.resize(ev.size());
  for (int i = 0; i < ev.size(); ++i) ch.spectrum(i) = ev(order[i]);
  if (ev.size() > 1 && std::abs(ch.spectrum(1)) > 1 - 1e-8)
    throw Error(Errc::NonInjective, "leading transfer eigenvalue is degenerate");
  Leading left = leading_eig(ch.T.adjoint());
  cmat Lam = positive_fixed_point(left.vector, D);
  HermEig le = herm_eig(Lam, 1e-8);
  double neg = -le.values.minCoeff();
  if (neg > 1e-12) warn("clipping negative Lambda eigenvalue " + std::to_string(-neg));
  rvec lv = le.values.cwiseMax(0.0);
  lv /= lv.sum();
  ch.Lambda = le.vectors * lv.asDiagonal() * le.vectors.adjoint();
  ch.Tinf = vec(cmat::Identity(D, D)) * vec(ch.Lambda.transpose()).transpose();
  Eigen::ComplexEigenSolver<cmat> rs(ch.T - ch.Tinf, false);
  ch.mu = rs.eigenvalues().cwiseAbs().maxCoeff();
  return ch;
}

namespace {

// Canonical MPS in the gauge where Lambda is diagonal, with equal
// eigenvalues merged so that the infinite-length Gram part is exact.
struct DiagGauge {
  std::vector<cmat> A;
  rvec lambda;
};

DiagGauge diagonal_gauge(const UniformMPS& in) {
  UniformMPS mps = in.canonical ? in : canonicalize(in);
  TransferChannel ch = transfer_analysis(mps);
  HermEig e = herm_eig(ch.Lambda, 1e-8);
  DiagGauge g;
  g.lambda = e.values;
  const int D = mps.D;
  for (int i = 0; i < D;) {
    int j = i + 1;
    while (j < D && g.lambda(j) - g.lambda(j - 1) <= 1e-12 * g.lambda(D - 1)) ++j;
    double m = g.lambda.segment(i, j - i).mean();
    g.lambda.segment(i, j - i).setConstant(m);
    i = j;
  }
  g.lambda /= g.lambda.sum();
  for (auto& a : mps.A) g.A.push_back(e.vectors.adjoint() * a * e.vectors);
  return g;
}

cmat diag_sqrt_or_full(const cmat& W) {
  cmat off = W;
  off.diagonal().setZero();
  if (max_abs(off) < 1e-15 * std::max(1.0, max_abs(W))) {
    cmat R = cmat::Zero(W.rows(), W.cols());
    for (int i = 0; i < W.rows(); ++i) R(i, i) = std::sqrt(std::max(0.0, W(i, i).real()));
    return R;
  }
  return sqrtm_psd(0.5 * (W + W.adjoint()));
}

SpectrumReport report_from_shifted(const cmat& X, double shift) {
  HermEig e = herm_eig(0.5 * (X + X.adjoint()), 1e-8);
  const int n = e.values.size();
  double top = shift + e.values(n - 1);
  SpectrumReport r;
  r.shift = shift;
  for (int i = n - 1; i >= 0; --i) {
    double v = shift + e.values(i);
    if (v <= 1e-12 * top) continue;
    r.values.push_back(v);
    r.rel.push_back(e.values(i));
  }
  r.clusters = cluster_values(r.values, 1e-12);
  return r;
}

}  // namespace

SegmentGram segment_gram(const UniformMPS& mps, int l) {
  if (l < 1) throw Error(Errc::InvalidGeometry, "need l >= 1");
  DiagGauge g = diagonal_gauge(mps);
  const int D = g.A[0].rows();
  cmat T = transfer_matrix(g.A);
  cmat Lam = g.lambda.cast<cd>().asDiagonal();
  cmat Tinf = vec(cmat::Identity(D, D)) * vec(Lam.transpose()).transpose();
  cmat Nl = power(T - Tinf, l);
  cmat Ginf = realign(Tinf, D);
  cmat GP = realign(Nl, D);
  cmat W = swap_factors(realign(Tinf, D), D).conjugate();
  SegmentGram sg;
  sg.Wsqrt = diag_sqrt_or_full(W);
  sg.Minf = sg.Wsqrt * Ginf * sg.Wsqrt;
  sg.MP = sg.Wsqrt * GP * sg.Wsqrt;
  sg.shift = sg.Minf.diagonal().real().maxCoeff();
  return sg;
}

SpectrumReport es_infinite(const UniformMPS& mps) {
  DiagGauge g = diagonal_gauge(mps);
  std::vector<double> v;
  for (int a = 0; a < g.lambda.size(); ++a)
    for (int b = 0; b < g.lambda.size(); ++b) v.push_back(g.lambda(a) * g.lambda(b));
  std::sort(v.begin(), v.end(), std::greater<double>());
  SpectrumReport r;
  double top = v.front();
  for (double x : v)
    if (x > 1e-12 * top) r.values.push_back(x);
  r.clusters = cluster_values(r.values, 1e-12);
  return r;
}

SpectrumReport es_segment(const UniformMPS& mps, int l) {
  SegmentGram sg = segment_gram(mps, l);
  cmat X = sg.Minf - sg.shift * cmat::Identity(sg.Minf.rows(), sg.Minf.cols());
  X += sg.MP;
  return report_from_shifted(X, sg.shift);
}

SpectrumReport es_finite_ring(const UniformMPS& in, int l, int L) {
  if (l < 1 || l >= L) throw Error(Errc::InvalidGeometry, "need 1 <= l < L");
  UniformMPS mps = in.canonical ? in : canonicalize(in);
  const int D = mps.D;
  cmat T = transfer_matrix(mps.A);
  cmat Tl = power(T, l), Tr = power(T, L - l);
  cd norm = (Tl * Tr).trace();
  cmat G = realign(Tl, D);
  cmat W = swap_factors(realign(Tr, D), D).conjugate();
  cmat Wh = sqrtm_psd(0.5 * (W + W.adjoint()));
  cmat M = Wh * G * Wh / norm.real();
  return report_from_shifted(M, 0.0);
}

double mb_gap(const SpectrumReport& r, int rr) {
  const size_t need = size_t(rr) * rr;
  if (r.values.size() < need) throw Error(Errc::TooFewValues, "fewer than r^2 values");
  if (r.rel.size() >= need) return std::abs(r.rel[0] - r.rel[need - 1]);
  return std::abs(r.values[0] - r.values[need - 1]);
}

ProjectiveRep projective_rep(const UniformMPS& in, const std::vector<cmat>& generators, int r) {
  UniformMPS mps = in.canonical ? in : canonicalize(in);
  const int D = mps.D, d = mps.d;
  ProjectiveRep out;
  out.r = r;
  for (const cmat& rho : generators) {
    if (rho.rows() != d) throw Error(Errc::DimensionMismatch, "generator dimension differs from d");
    std::vector<cmat> Ag(d, cmat::Zero(D, D));
    for (int j = 0; j < d; ++j)
      for (int jp = 0; jp < d; ++jp)
        if (rho(j, jp) != cd(0)) Ag[j] += rho(j, jp) * mps.A[jp];
    // X -> sum_j Ag_j X A_j^dagger has the fixed point V_g
    cmat Tg = mixed_transfer(mps.A, Ag);
    Leading lead = leading_eig(Tg);
    if (std::abs(std::abs(lead.value) - 1) > 1e-8)
      throw Error(Errc::NotSymmetric, "mixed transfer operator has no unimodular eigenvalue");
    cmat X = unvec(lead.vector, D);
    Svd s = svd(X);
    double ratio = s.s(s.s.size() - 1) / s.s(0);
    out.unitarity_residual = std::max(out.unitarity_residual, 1 - ratio);
    if (1 - ratio > 1e-6) throw Error(Errc::NonUnitaryV, "virtual symmetry operator is not unitary");
    out.V.push_back(s.U * s.V.adjoint());
  }
  if (out.V.size() >= 2) {
    const cmat& Va = out.V[0];
    const cmat& Vb = out.V[1];
    cmat K = Va * Vb * Va.adjoint() * Vb.adjoint();
    out.commutator = K.trace() / double(D);
    if (max_abs(K - out.commutator * cmat::Identity(D, D)) > 1e-6)
      throw Error(Errc::NotSymmetric, "group commutator is not a phase");
    double ang = std::arg(out.commutator);
    int nu = int(std::lround(ang * r / (2 * M_PI)));
    out.nu = ((nu % r) + r) % r;
  }
  return out;
}

cvec mps_dense_ring(const std::vector<cmat>& A, int L) {
  const int d = A.size(), D = A[0].rows();
  std::vector<cmat> level{cmat::Identity(D, D)};
  for (int s = 0; s < L; ++s) {
    std::vector<cmat> next;
    next.reserve(level.size() * d);
    for (auto& m : level)
      for (int j = 0; j < d; ++j) next.push_back(m * A[j]);
    level.swap(next);
  }
  cvec psi(level.size());
  for (size_t i = 0; i < level.size(); ++i) psi(i) = level[i].trace();
  return psi;
}

}  // namespace sptq
