#include "sptq/randmat.hpp"

namespace sptq {

cmat random_complex(Stream& rng, int rows, int cols) {
  cmat M(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      double re = rng.normal();
      double im = rng.normal();
      M(i, j) = cd(re, im) / std::sqrt(2.0);
    }
  return M;
}

cmat random_hermitian(Stream& rng, int n) {
  cmat G = random_complex(rng, n, n);
  return 0.5 * (G + G.adjoint());
}

cmat random_unitary(Stream& rng, int n) {
  cmat G = random_complex(rng, n, n);
  Eigen::HouseholderQR<cmat> qr(G);
  cmat Q = qr.householderQ();
  cmat R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    cd r = R(i, i);
    if (std::abs(r) > 0) Q.col(i) *= r / std::abs(r);
  }
  return Q;
}

rmat random_skew(Stream& rng, int n) {
  rmat M(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) M(i, j) = rng.normal();
  return M - M.transpose();
}

}  // namespace sptq
