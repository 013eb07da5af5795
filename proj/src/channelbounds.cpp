#include "sptq/channelbounds.hpp"

#include <algorithm>
#include <cmath>

namespace sptq {

namespace {

int nullity(const cmat& X, double tol) {
  Eigen::JacobiSVD<cmat> s(X);
  int n = 0;
  for (int i = 0; i < s.singularValues().size(); ++i)
    if (s.singularValues()(i) <= tol) ++n;
  return n;
}

cmat mpow(const cmat& X, int n) {
  cmat R = cmat::Identity(X.rows(), X.cols());
  for (int i = 0; i < n; ++i) R = R * X;
  return R;
}

}  // namespace

MinimalPolynomial minimal_polynomial(const cmat& M, double cluster_tol) {
  const int n = M.rows();
  const double norm = std::max(spectral_norm(M), 1e-300);
  Eigen::ComplexEigenSolver<cmat> es(M, false);
  cvec ev = es.eigenvalues();
  const double tol = cluster_tol * std::max(norm, 1.0);
  std::vector<int> label(n, -1);
  int nc = 0;
  for (int i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    label[i] = nc;
    // grow cluster transitively
    bool grew = true;
    while (grew) {
      grew = false;
      for (int j = 0; j < n; ++j) {
        if (label[j] >= 0) continue;
        for (int k = 0; k < n; ++k)
          if (label[k] == nc && std::abs(ev(j) - ev(k)) < tol) {
            label[j] = nc;
            grew = true;
            break;
          }
      }
    }
    ++nc;
  }
  MinimalPolynomial m;
  cmat I = cmat::Identity(n, n);
  for (int c = 0; c < nc; ++c) {
    cd mean = 0;
    int mult = 0;
    for (int i = 0; i < n; ++i)
      if (label[i] == c) {
        mean += ev(i);
        ++mult;
      }
    mean /= double(mult);
    // Jordan size: smallest s with nullity((M - mu)^s) saturated
    cmat X = M - mean * I;
    cmat P = I;
    int s = mult, prev = 0;
    for (int k = 1; k <= mult; ++k) {
      P = P * X;
      int nl = nullity(P, 1e-8 * std::pow(std::max(norm, 1.0), k));
      if (nl >= mult) {
        s = k;
        break;
      }
      if (k > 1 && nl == prev) {
        s = k - 1;
        break;
      }
      prev = nl;
    }
    m.roots.push_back(mean);
    m.sizes.push_back(std::max(s, 1));
  }
  for (int s : m.sizes) m.degree += s;
  cmat Q = I;
  for (size_t j = 0; j < m.roots.size(); ++j) Q = Q * mpow(M - m.roots[j] * I, m.sizes[j]);
  m.residual = spectral_norm(Q);
  if (m.residual > 1e-6 * std::pow(std::max(norm, 1e-3), m.degree) && m.residual > 1e-12)
    throw Error(Errc::VerificationFailure, "minimal polynomial residual " + std::to_string(m.residual));
  return m;
}

cd blaschke(cd z, const MinimalPolynomial& m) {
  cd B = 1;
  for (size_t j = 0; j < m.roots.size(); ++j) {
    cd den = 1.0 - std::conj(m.roots[j]) * z;
    if (std::abs(den) < 1e-14) throw Error(Errc::PoleHit, "Blaschke pole");
    B *= std::pow((z - m.roots[j]) / den, m.sizes[j]);
  }
  return B;
}

double spectral_radius(const MinimalPolynomial& m) {
  double r = 0;
  for (cd x : m.roots) r = std::max(r, std::abs(x));
  return r;
}

double inverse_blaschke_sup(const MinimalPolynomial& m, double radius) {
  auto f = [&](double th) { return 1.0 / std::abs(blaschke(std::polar(radius, th), m)); };
  const int n = 720;
  int best = 0;
  double bv = f(0);
  for (int i = 1; i < n; ++i) {
    double v = f(2 * M_PI * i / n);
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  double a = 2 * M_PI * (best - 1) / n, b = 2 * M_PI * (best + 1) / n;
  const double g = 0.5 * (std::sqrt(5.0) - 1);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::max({bv, fc, fd});
}

double convergence_bound(int l, const MinimalPolynomial& m, double C, BoundMode mode) {
  const double mu = spectral_radius(m);
  const int deg = m.degree;
  const double e2 = std::exp(2.0);
  if (mu == 0) {
    if (l >= deg) return 0.0;
    throw Error(Errc::ValidityViolated, "nilpotent case needs l >= degree");
  }
  if (mu >= 1) throw Error(Errc::ValidityViolated, "spectral radius must be < 1");
  const double pref = 4 * e2 * C * std::sqrt(double(deg)) * (deg + 1);
  if (mode == BoundMode::Sharp) {
    if (!(l > mu / (1 - mu))) throw Error(Errc::ValidityViolated, "sharp bound needs l > mu/(1-mu)");
    const double rad = (1 + 1.0 / l) * mu;
    const double sup = inverse_blaschke_sup(m, rad);
    return std::pow(mu, l + 1) * pref / (l * std::pow(1 - rad, 1.5)) * sup;
  }
  if (l < (1 + mu) / (1 - mu)) throw Error(Errc::ValidityViolated, "worst-case bound needs l >= (1+mu)/(1-mu)");
  return pref * std::pow((1 + mu) / (1 - mu), 1.5) * std::pow((1 - mu * mu) / mu * l, deg - 1) * std::pow(mu, l);
}

double thm2_coefficient(int D, double mu) {
  const double D2 = double(D) * D;
  return 4 * std::exp(2.0) * D2 * (D2 + 1) * std::pow(mu, 1 - D2) * std::pow(1 + mu, D2 + 0.5) *
         std::pow(1 - mu, D2 - 2.5);
}

double thm2_bound(const BoundInputs& in) {
  const int x = in.l - 2 * in.k0 * in.t;
  const double D2 = double(in.D) * in.D;
  if (in.mu == 0) {
    if (x >= D2) return 0.0;
    throw Error(Errc::ValidityViolated, "mu = 0 needs l - 2 k0 t >= D^2");
  }
  if (x < (1 + in.mu) / (1 - in.mu)) throw Error(Errc::ValidityViolated, "l - 2 k0 t below (1+mu)/(1-mu)");
  const double kappa = -std::log(in.mu);
  const double v = 2.0 * in.k0 - std::log(double(in.DU)) / std::log(in.mu);
  return thm2_coefficient(in.D, in.mu) * std::pow(double(x), D2 - 1) * std::exp(-kappa * (in.l - v * in.t));
}

double finite_coefficient(double alpha, int D, double mu) {
  const double D2 = double(D) * D;
  return std::exp(2.0) * std::pow(2.0, 2.5 - alpha) * std::pow(double(D), 1.5 + alpha) * (D2 + 1) *
         std::pow(mu, 1 - D2) * std::pow(1 + mu, D2 + 0.5) * std::pow(1 - mu, D2 - 2.5);
}

double finite_b(double alpha, int x, const BoundInputs& in) {
  const double D2 = double(in.D) * in.D;
  const int y = x - 2 * in.k0 * in.t;
  const double lnmu = std::log(in.mu);
  const double va = 2.0 * in.k0 - (alpha + 0.5) * std::log(double(in.DU)) / lnmu;
  return finite_coefficient(alpha, in.D, in.mu) * std::pow(double(y), D2 - 1) * std::exp(lnmu * (x - va * in.t));
}

double finite_thm_bound(const BoundInputs& in) {
  if (in.L <= 0) return thm2_bound(in);
  if (in.l < 1 || in.l >= in.L) throw Error(Errc::InvalidGeometry, "need 1 <= l < L");
  const int lo = std::min(in.l, in.L - in.l);
  const int x = lo - 2 * in.k0 * in.t;
  if (in.mu == 0) {
    if (x >= double(in.D) * in.D) return 0.0;
    throw Error(Errc::ValidityViolated, "mu = 0 needs min(l, L-l) - 2 k0 t >= D^2");
  }
  if (x < (1 + in.mu) / (1 - in.mu)) throw Error(Errc::ValidityViolated, "min(l, L-l) - 2 k0 t below (1+mu)/(1-mu)");
  const int l = in.l, r = in.L - in.l;
  double a = finite_b(0.5, l, in) + finite_b(0.75, r, in);
  double b = finite_b(0.5, r, in) + finite_b(0.75, l, in);
  return (std::min(a, b) + 4 * finite_b(1.0, l, in) * finite_b(1.0, r, in)) / in.trEL;
}

double channel_distance(const cmat& T, const cmat& Tinf, int l) {
  if (l < 0) throw Error(Errc::InvalidArgument, "l >= 0");
  if (l == 0) return spectral_norm(cmat::Identity(T.rows(), T.cols()) - Tinf);
  // T^l - T_inf = (T - T_inf)^l; the difference of powers cancels down to ~1e-15
  cmat P = cmat::Identity(T.rows(), T.cols());
  cmat B = T - Tinf;
  int n = l;
  while (n > 0) {
    if (n & 1) P = P * B;
    n >>= 1;
    if (n) B = B * B;
  }
  return spectral_norm(P);
}

double channel_distance(const TransferChannel& E, int l) { return channel_distance(E.T, E.Tinf, l); }

double sup_power_norm(const cmat& T, const cmat& Tinf, int n_max) {
  cmat P = T;
  double best = spectral_norm(P);
  const double inf = spectral_norm(Tinf);
  for (int n = 2; n <= n_max; ++n) {
    P = P * T;
    double v = spectral_norm(P);
    best = std::max(best, v);
    if (spectral_norm(P - Tinf) < 1e-13 * std::max(1.0, inf)) break;
  }
  return std::max(best, inf);
}

}  // namespace sptq
