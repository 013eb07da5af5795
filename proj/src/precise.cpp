#include "sptq/precise.hpp"

#include <boost/multiprecision/float128.hpp>

#include <Eigen/Dense>
#include <algorithm>

using boost::multiprecision::float128;

namespace Eigen {
template <>
struct NumTraits<float128> : GenericNumTraits<float128> {
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 1, AddCost = 4, MulCost = 8 };
  typedef float128 Real;
  typedef float128 NonInteger;
  typedef float128 Literal;
  typedef float128 Nested;
  static inline Real epsilon() { return std::numeric_limits<float128>::epsilon(); }
  static inline Real dummy_precision() { return Real(1e-30); }
  static inline Real highest() { return (std::numeric_limits<float128>::max)(); }
  static inline Real lowest() { return -highest(); }
  static inline int digits10() { return 33; }
  static inline Real infinity() { return std::numeric_limits<float128>::infinity(); }
  static inline Real quiet_NaN() { return std::numeric_limits<float128>::quiet_NaN(); }
};
}  // namespace Eigen

namespace sptq {

namespace {

using QM = Eigen::Matrix<float128, Eigen::Dynamic, Eigen::Dynamic>;

struct QC {
  QM re, im;
  QC() = default;
  QC(int r, int c) : re(QM::Zero(r, c)), im(QM::Zero(r, c)) {}
  explicit QC(const cmat& X) : re(X.rows(), X.cols()), im(X.rows(), X.cols()) {
    for (int i = 0; i < X.rows(); ++i)
      for (int j = 0; j < X.cols(); ++j) {
        re(i, j) = X(i, j).real();
        im(i, j) = X(i, j).imag();
      }
  }
  int rows() const { return re.rows(); }
  int cols() const { return re.cols(); }
};

QC operator*(const QC& a, const QC& b) {
  QC c;
  c.re = a.re * b.re - a.im * b.im;
  c.im = a.re * b.im + a.im * b.re;
  return c;
}

QC operator-(const QC& a, const QC& b) {
  QC c;
  c.re = a.re - b.re;
  c.im = a.im - b.im;
  return c;
}

QC operator+(const QC& a, const QC& b) {
  QC c;
  c.re = a.re + b.re;
  c.im = a.im + b.im;
  return c;
}

QC adjoint(const QC& a) {
  QC c;
  c.re = a.re.transpose();
  c.im = -a.im.transpose();
  return c;
}

QC conj(const QC& a) {
  QC c;
  c.re = a.re;
  c.im = -a.im;
  return c;
}

QC identity(int n) {
  QC c(n, n);
  c.re.setIdentity();
  return c;
}

QC kron(const QC& a, const QC& b) {
  QC c(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      c.re.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a.re(i, j) * b.re - a.im(i, j) * b.im;
      c.im.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a.re(i, j) * b.im + a.im(i, j) * b.re;
    }
  return c;
}

QC power(const QC& X, int n) {
  QC R = identity(X.rows());
  QC B = X;
  while (n > 0) {
    if (n & 1) R = R * B;
    n >>= 1;
    if (n) B = B * B;
  }
  return R;
}

QC realign(const QC& T, int D) {
  QC R(D * D, D * D);
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c)
        for (int e = 0; e < D; ++e) {
          R.re(a * D + b, c * D + e) = T.re(a * D + c, b * D + e);
          R.im(a * D + b, c * D + e) = T.im(a * D + c, b * D + e);
        }
  return R;
}

QM realify(const QC& X) {
  const int n = X.rows();
  QM R(2 * n, 2 * n);
  R.topLeftCorner(n, n) = X.re;
  R.topRightCorner(n, n) = -X.im;
  R.bottomLeftCorner(n, n) = X.im;
  R.bottomRightCorner(n, n) = X.re;
  return R;
}

QC hermitize(const QC& X) {
  QC h = X + adjoint(X);
  h.re *= float128(0.5);
  h.im *= float128(0.5);
  return h;
}

// Square root of a Hermitian PSD matrix through the realified symmetric form.
QC sqrt_psd(const QC& X) {
  const int n = X.rows();
  Eigen::SelfAdjointEigenSolver<QM> es(realify(hermitize(X)));
  QM vals = es.eigenvalues();
  QM S = es.eigenvectors();
  for (int i = 0; i < 2 * n; ++i) vals(i) = vals(i) > 0 ? boost::multiprecision::sqrt(vals(i)) : float128(0);
  QM R = S * vals.asDiagonal() * S.transpose();
  QC out(n, n);
  out.re = R.topLeftCorner(n, n);
  out.im = R.bottomLeftCorner(n, n);
  return out;
}

// vec(X) with column-major order; matrices carried as D*D x 1.
QC unvec(const QC& v, int D) {
  QC X(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) {
      X.re(i, j) = v.re(i + D * j, 0);
      X.im(i, j) = v.im(i + D * j, 0);
    }
  return X;
}

QC normalize_by_trace(const QC& v, int D) {
  QC X = unvec(v, D);
  float128 tr = X.re.trace(), ti = X.im.trace();
  float128 n2 = tr * tr + ti * ti;
  // divide by complex trace
  QC out(v.rows(), 1);
  out.re = (v.re * tr + v.im * ti) / n2;
  out.im = (v.im * tr - v.re * ti) / n2;
  return out;
}

QC fixed_point(const QC& T, const cvec& seed, int D) {
  QC v(seed.size(), 1);
  for (int i = 0; i < seed.size(); ++i) {
    v.re(i, 0) = seed(i).real();
    v.im(i, 0) = seed(i).imag();
  }
  v = normalize_by_trace(v, D);
  for (int it = 0; it < 400; ++it) {
    QC w = normalize_by_trace(T * v, D);
    QC diff = w - v;
    float128 change = diff.re.cwiseAbs().maxCoeff() + diff.im.cwiseAbs().maxCoeff();
    v = w;
    if (change < float128(1e-33)) break;
  }
  return hermitize(unvec(v, D));
}

cvec seed_vector(const cmat& T) {
  Eigen::ComplexEigenSolver<cmat> es(T);
  int best = 0;
  for (int i = 1; i < T.rows(); ++i)
    if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best))) best = i;
  return es.eigenvectors().col(best);
}

cmat to_double(const QC& X) {
  cmat out(X.rows(), X.cols());
  for (int i = 0; i < X.rows(); ++i)
    for (int j = 0; j < X.cols(); ++j) out(i, j) = cd(double(X.re(i, j)), double(X.im(i, j)));
  return out;
}

}  // namespace

PreciseGap precise_segment_gap(const std::vector<cmat>& A, int l, int r) {
  if (l < 1) throw Error(Errc::InvalidGeometry, "need l >= 1");
  const int D = A[0].rows();
  QC T(D * D, D * D);
  for (const cmat& a : A) T = T + kron(conj(QC(a)), QC(a));
  const cmat Td = to_double(T);
  QC R = fixed_point(T, seed_vector(Td), D);
  QC Lm = fixed_point(adjoint(T), seed_vector(Td.adjoint()), D);

  QC vr(D * D, 1), vl(D * D, 1);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) {
      vr.re(i + D * j, 0) = R.re(i, j);
      vr.im(i + D * j, 0) = R.im(i, j);
      vl.re(i + D * j, 0) = Lm.re(i, j);
      vl.im(i + D * j, 0) = Lm.im(i, j);
    }
  QC overlap = adjoint(vl) * vr;
  QC Tr = adjoint(vl) * (T * vr);
  // leading eigenvalue (real positive for a CP map)
  float128 lam = Tr.re(0, 0) / overlap.re(0, 0);
  T.re /= lam;
  T.im /= lam;
  QC Tinf = vr * adjoint(vl);
  Tinf.re /= overlap.re(0, 0);
  Tinf.im /= overlap.re(0, 0);

  QC Nl = power(T - Tinf, l);
  // environment conj(Lm) (x) R, from S realign(T_inf) S
  QC Wh = kron(conj(sqrt_psd(Lm)), sqrt_psd(R));
  Wh.re /= boost::multiprecision::sqrt(overlap.re(0, 0));
  Wh.im /= boost::multiprecision::sqrt(overlap.re(0, 0));
  QC M = Wh * (realign(Tinf, D) + realign(Nl, D)) * Wh;

  Eigen::SelfAdjointEigenSolver<QM> es(realify(hermitize(M)), Eigen::EigenvaluesOnly);
  std::vector<float128> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end(), std::greater<float128>());
  const size_t k = size_t(r) * r;
  if (v.size() < 2 * k) throw Error(Errc::TooFewValues, "fewer than r^2 values");
  PreciseGap out;
  out.zeta1 = double(v[0]);
  out.gap = double(v[0] - v[2 * (k - 1)]);
  out.floor = double(std::numeric_limits<float128>::epsilon() * v[0]) * D * D;
  return out;
}

}  // namespace sptq
