#include "sptq/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

namespace sptq {

double max_abs(const cmat& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

double spectral_norm(const cmat& A) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<cmat> s(A);
  return s.singularValues()(0);
}

HermEig herm_eig(const cmat& A, double herm_tol) {
  if (A.rows() != A.cols()) throw Error(Errc::DimensionMismatch, "herm_eig needs a square matrix");
  double scale = std::max(1.0, max_abs(A));
  if (max_abs(A - A.adjoint()) > herm_tol * scale)
    throw Error(Errc::NotHermitian, "matrix is not Hermitian");
  cmat H = 0.5 * (A + A.adjoint());
  Eigen::SelfAdjointEigenSolver<cmat> es(H);
  if (es.info() != Eigen::Success) throw Error(Errc::ConvergenceFailure, "Hermitian eigensolver stalled");
  return {es.eigenvalues(), es.eigenvectors()};
}

BiorthEig general_eig(const cmat& A, double rank_tol) {
  const int n = A.rows();
  if (n != A.cols()) throw Error(Errc::DimensionMismatch, "general_eig needs a square matrix");
  BiorthEig out;
  if (n == 0) return out;
  Eigen::ComplexEigenSolver<cmat> es(A);
  if (es.info() != Eigen::Success) throw Error(Errc::ConvergenceFailure, "eigensolver stalled");
  out.values = es.eigenvalues();
  out.right = es.eigenvectors();
  for (int j = 0; j < n; ++j) {
    double nr = out.right.col(j).norm();
    if (nr > 0) out.right.col(j) /= nr;
  }

  const double scale = std::max(1.0, spectral_norm(A));
  const double ctol = 1e-7 * scale;
  std::vector<int> label(n, -1);
  int nc = 0;
  for (int i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    label[i] = nc;
    std::vector<int> stack{i};
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < n; ++b)
        if (label[b] < 0 && std::abs(out.values(a) - out.values(b)) < ctol) {
          label[b] = nc;
          stack.push_back(b);
        }
    }
    ++nc;
  }
  for (int c = 0; c < nc; ++c) {
    std::vector<int> idx;
    cd mean = 0;
    for (int i = 0; i < n; ++i)
      if (label[i] == c) {
        idx.push_back(i);
        mean += out.values(i);
      }
    if (idx.size() < 2) continue;
    mean /= double(idx.size());
    cmat Vc(n, idx.size());
    for (size_t k = 0; k < idx.size(); ++k) Vc.col(k) = out.right.col(idx[k]);
    Eigen::JacobiSVD<cmat> sv(Vc);
    double vmin = sv.singularValues().tail(1)(0) / sv.singularValues()(0);
    Eigen::JacobiSVD<cmat> sa(A - mean * cmat::Identity(n, n));
    int nullity = 0;
    for (int k = 0; k < n; ++k)
      if (sa.singularValues()(k) <= rank_tol * scale) ++nullity;
    if (vmin < rank_tol || (nullity < int(idx.size()) && vmin < 1e-6)) out.defective = true;
  }

  Eigen::FullPivLU<cmat> lu(out.right);
  cmat inv = lu.inverse();
  out.left = inv.adjoint();
  return out;
}

Svd svd(const cmat& A) {
  Svd out;
  if (A.size() == 0) {
    out.s = rvec::Zero(0);
    out.U = cmat::Identity(A.rows(), A.rows());
    out.V = cmat::Identity(A.cols(), A.cols());
    return out;
  }
  Eigen::BDCSVD<cmat> s(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (s.info() != Eigen::Success) throw Error(Errc::ConvergenceFailure, "SVD failed");
  out.s = s.singularValues();
  out.U = s.matrixU();
  out.V = s.matrixV();
  return out;
}

double pfaffian(const rmat& R) {
  const int n = R.rows();
  if (n != R.cols()) throw Error(Errc::DimensionMismatch, "pfaffian needs a square matrix");
  if (n % 2) throw Error(Errc::OddDimension, "pfaffian of odd dimension");
  if (n == 0) return 1.0;
  double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  if ((R + R.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error(Errc::NotSkewSymmetric, "matrix is not skew-symmetric");
  rmat A = 0.5 * (R - R.transpose());
  double sign = 1.0;
  // Householder reduction to tridiagonal form; each nontrivial reflector has det -1.
  for (int k = 0; k + 2 < n; ++k) {
    const int m = n - k - 1;
    rvec x = A.col(k).tail(m);
    double tail = x.tail(m - 1).norm();
    if (tail == 0.0) continue;
    double alpha = -std::copysign(x.norm(), x(0));
    rvec v = x;
    v(0) -= alpha;
    v /= v.norm();
    // A <- H A H with H = 1 - 2 v v^T acting on rows/cols k+1..n-1
    rvec w = A.bottomRows(m).transpose() * v;
    A.bottomRows(m) -= 2.0 * v * w.transpose();
    rvec u = A.rightCols(m) * v;
    A.rightCols(m) -= 2.0 * u * v.transpose();
    sign = -sign;
  }
  double pf = sign;
  for (int k = 0; k < n; k += 2) pf *= A(k, k + 1);
  return pf;
}

WeylShift weyl_shift(const cmat& O, const cmat& Op) {
  if (O.rows() != Op.rows() || O.cols() != Op.cols())
    throw Error(Errc::DimensionMismatch, "weyl_shift operands differ in size");
  HermEig a = herm_eig(O), b = herm_eig(Op);
  WeylShift w;
  for (int i = 0; i < a.values.size(); ++i)
    w.max_shift = std::max(w.max_shift, std::abs(a.values(i) - b.values(i)));
  w.norm_diff = spectral_norm(O - Op);
  return w;
}

cmat expm_herm(const HermEig& e, double t) {
  cvec ph(e.values.size());
  for (int i = 0; i < ph.size(); ++i) ph(i) = std::exp(cd(0, -e.values(i) * t));
  return e.vectors * ph.asDiagonal() * e.vectors.adjoint();
}

cmat expm_herm(const cmat& H, double t) { return expm_herm(herm_eig(H), t); }

cmat sqrtm_psd(const cmat& A) {
  HermEig e = herm_eig(A, 1e-8);
  rvec s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

std::vector<Cluster> cluster_values(const std::vector<double>& desc, double tol) {
  std::vector<Cluster> out;
  size_t i = 0;
  while (i < desc.size()) {
    size_t j = i + 1;
    while (j < desc.size() && std::abs(desc[j - 1] - desc[j]) <= tol) ++j;
    Cluster c;
    c.multiplicity = int(j - i);
    double s = 0;
    for (size_t k = i; k < j; ++k) s += desc[k];
    c.value = s / c.multiplicity;
    c.width = std::abs(desc[i] - desc[j - 1]);
    out.push_back(c);
    i = j;
  }
  return out;
}

namespace {
Quadrature make_gl(int n) {
  Quadrature q;
  q.x.resize(n);
  q.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1, p1 = 0;
    for (int k = 1; k <= n; ++k) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1);
    q.x[i] = -z;
    q.x[n - 1 - i] = z;
    q.w[i] = q.w[n - 1 - i] = 2.0 / ((1 - z * z) * dp * dp);
  }
  return q;
}
}  // namespace

const Quadrature& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Quadrature>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Quadrature>(make_gl(n));
  return *slot;
}

namespace {
std::atomic<int> g_threads{0};
}

int default_threads() {
  int n = g_threads.load();
  if (n > 0) return n;
  unsigned h = std::thread::hardware_concurrency();
  return h ? int(h) : 1;
}

void set_default_threads(int n) { g_threads.store(n); }

void parallel_for(int n, int threads, const std::function<void(int)>& f) {
  if (threads <= 0) threads = default_threads();
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex emu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) break;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(emu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace sptq
