#include "sptq/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sptq/precise.hpp"
#include "sptq/rng.hpp"

namespace sptq {

namespace {

constexpr std::uint64_t kDisorderStream = 0x6469736f72646572ULL;
constexpr std::uint64_t kMBLStream = 0x6d626cULL;
constexpr std::uint64_t kCocycleStream = 0x636f6379636c65ULL;
constexpr std::uint64_t kGateStream = 0x6761746573ULL;

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void mean_se(const std::vector<double>& v, double& mean, double& se) {
  mean = 0;
  for (double x : v) mean += x;
  mean /= v.size();
  double var = 0;
  for (double x : v) var += (x - mean) * (x - mean);
  se = v.size() > 1 ? std::sqrt(var / (v.size() - 1) / v.size()) : 0.0;
}

int gcd(int a, int b) { return b == 0 ? a : gcd(b, a % b); }

}  // namespace

BlochModel ssh(double J1, double J2, double phs_J) {
  cmat H0 = cmat::Zero(2, 2), H1 = cmat::Zero(2, 2);
  H0(0, 1) = H0(1, 0) = -J1;
  H1(1, 0) = -J2;
  if (phs_J != 0) H1 += cd(0, -phs_J) * cmat::Identity(2, 2);
  return make_bloch(2, {{0, H0}, {1, H1}});
}

double ssh_F(double k, double kappa, double J1, double J2) {
  const double s = J1 * J1 + J2 * J2;
  const double num = J1 * J1 + J2 * J2 * std::exp(2 * kappa) + 2 * J1 * J2 * std::exp(kappa) * std::cos(k);
  const double den = std::sqrt(s * s + 4 * J1 * J2 * s * std::cosh(kappa) * std::cos(k) +
                               2 * J1 * J1 * J2 * J2 * (std::cos(2 * k) + std::cosh(2 * kappa)));
  return num / den;
}

double ssh_analytic_C(double J1, double J2, double J1p, double J2p, double kappa, CVariant variant, double tol) {
  if (std::abs(kappa) >= std::abs(std::log(J1 / J2))) throw Error(Errc::StripExceeded, "kappa outside |ln(J1/J2)|");
  auto integrand = [&](double k) {
    double w = (1 + ssh_F(k, -kappa, J1p, J2p)) * (1 + ssh_F(k, kappa, J1p, J2p));
    double pn;
    if (variant == CVariant::Printed) {
      pn = 0.5 * (ssh_F(k, kappa, J1, J2) + ssh_F(k, -kappa, J1, J2));
    } else {
      const cd e(std::cos(k), std::sin(k));
      double r = std::abs(J1 + J2 * std::exp(kappa) / e) / std::abs(J1 + J2 * std::exp(-kappa) * e);
      pn = 0.5 * (std::sqrt(r) + 1 / std::sqrt(r));
    }
    return w * pn;
  };
  double prev = 0;
  for (int n = 64; n <= (1 << 16); n *= 2) {
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += integrand(-M_PI + 2 * M_PI * i / n);
    double C = sum / n;
    if (n > 64 && std::abs(C - prev) < tol * std::abs(C)) return C;
    prev = C;
  }
  throw Error(Errc::NoConvergence, "analytic C quadrature did not converge");
}

cmat flatband_segment(int N, double t) {
  const int n = 2 * N;
  cmat P0 = cmat::Zero(n, n), U = cmat::Identity(n, n);
  for (int j = 0; j < N; ++j) P0.block(2 * j, 2 * j, 2, 2).setConstant(0.5);
  cmat rot(2, 2);
  rot << std::cos(t), cd(0, std::sin(t)), cd(0, std::sin(t)), std::cos(t);
  for (int j = 0; j + 1 < N; ++j) U.block(2 * j + 1, 2 * j + 1, 2, 2) = rot;
  cmat P = U * P0 * U.adjoint();
  cmat E(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) E(a, b) = P(2 * a, 2 * b);
  return E;
}

std::vector<double> flatband_roots(int N, double t) {
  // Jacobi matrix of f_N in x = xi - 1/2: couplings sin t / 2, then sin 2t / 4
  std::vector<double> b2(N, 0.0);
  for (int i = 1; i < N; ++i) {
    double b = i == 1 ? 0.5 * std::sin(t) : 0.25 * std::sin(2 * t);
    b2[i] = b * b;
  }
  auto count_below = [&](double x) {
    int c = 0;
    double q = 1;
    for (int i = 0; i < N; ++i) {
      q = -x - (i ? b2[i] / q : 0.0);
      if (q == 0) q = -1e-300;
      if (q < 0) ++c;
    }
    return c;
  };
  std::vector<double> roots;
  for (int k = 0; k < N; ++k) {
    double lo = -1, hi = 1;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      double mid = 0.5 * (lo + hi);
      if (count_below(mid) > k)
        hi = mid;
      else
        lo = mid;
    }
    roots.push_back(0.5 + 0.5 * (lo + hi));
  }
  return roots;
}

std::vector<double> flatband_closed_form(int N, double t) {
  const double s = std::sin(t), c = std::cos(t), c2 = c * c;
  std::vector<double> v;
  switch (N) {
    case 1:
      v = {0.5};
      break;
    case 2:
      v = {0.5 * (1 + s), 0.5 * (1 - s)};
      break;
    case 3: {
      double r = s * std::sqrt(1 + c2);
      v = {0.5, 0.5 * (1 + r), 0.5 * (1 - r)};
      break;
    }
    case 4: {
      double q = std::sqrt(1 + 4 * c2 * c2);
      for (int a : {1, -1})
        for (int b : {1, -1}) v.push_back(0.5 + a * s / 4 * std::sqrt(std::max(0.0, 2 + 4 * c2 + b * 2 * q)));
      break;
    }
    case 5: {
      double q = std::sqrt(5 * c2 * c2 - 2 * c2 + 1);
      v.push_back(0.5);
      for (int a : {1, -1})
        for (int b : {1, -1}) v.push_back(0.5 + a * s / 4 * std::sqrt(std::max(0.0, 2 + 6 * c2 + b * 2 * q)));
      break;
    }
    default:
      throw Error(Errc::InvalidArgument, "closed forms exist for N <= 5");
  }
  std::sort(v.begin(), v.end());
  return v;
}

FlatbandES flatband_es(int N, double t) {
  if (N < 1) throw Error(Errc::InvalidArgument, "N >= 1");
  FlatbandES out;
  HermEig e = herm_eig(flatband_segment(N, t));
  out.numeric.assign(e.values.data(), e.values.data() + N);
  out.analytic = N <= 5 ? flatband_closed_form(N, t) : flatband_roots(N, t);
  return out;
}

QuenchResult quench_ssh_experiment(const QuenchSpec& s) {
  BlochModel m0 = ssh(s.J1, s.J2, s.phs), m = ssh(s.J1p, s.J2p, s.phs_p);
  QuenchResult res;
  const int nxi = 2 * s.l;
  res.table.columns.push_back("t");
  for (int i = 1; i <= nxi; ++i) res.table.columns.push_back("xi_" + std::to_string(i));
  res.table.columns.push_back("gap");
  if (s.kappa > 0) {
    res.consts = lr_constants(m0, m, s.kappa, 1e-9, s.threads);
    res.table.columns.push_back("bound");
  }
  std::vector<std::vector<double>> rows(s.times.size());
  if (s.L == 0) {
    if (s.Nk < 8 * s.l) throw Error(Errc::GridTooCoarse, "Nk < 8 l");
    KProjector P0 = k_projector(m0, s.Nk);
    parallel_for(s.times.size(), s.threads, [&](int i) {
      SpectrumReport r = sp_es(evolve_projector(P0, m, s.times[i]), s.l);
      rows[i] = r.values;
      rows[i].push_back(sp_gap(r));
    });
  } else {
    if (s.l >= s.L) throw Error(Errc::InvalidGeometry, "need l < L");
    FermiProjector P0 = fermi_projector(real_space(m0, s.L, true));
    HermEig H = herm_eig(real_space(m, s.L, true).H);
    parallel_for(s.times.size(), s.threads, [&](int i) {
      SpectrumReport r = sp_es(evolve_projector(P0, H, s.times[i]), s.l);
      rows[i] = r.values;
      rows[i].push_back(sp_gap(r));
    });
  }
  for (size_t i = 0; i < s.times.size(); ++i) {
    std::vector<double> row{s.times[i]};
    row.insert(row.end(), rows[i].begin(), rows[i].end());
    if (s.kappa > 0) row.push_back(gap_bound(res.consts, s.l, s.times[i]));
    if (res.t_star < 0 && rows[i].back() > 1e-3) res.t_star = s.times[i];
    res.table.rows.push_back(std::move(row));
  }
  return res;
}

RealSpaceHamiltonian disordered_ssh(int L, double J, double Jp, double f, std::uint64_t seed, std::uint64_t realization) {
  Stream rng(seed, kDisorderStream, realization);
  std::vector<double> a(L), b(L);
  for (int j = 0; j < L; ++j) a[j] = rng.uniform((1 - f) * J, (1 + f) * J);
  for (int j = 0; j < L; ++j) b[j] = rng.uniform((1 - f) * Jp, (1 + f) * Jp);
  RealSpaceHamiltonian H;
  H.L = L;
  H.d = 2;
  H.periodic = true;
  H.H = cmat::Zero(2 * L, 2 * L);
  for (int j = 0; j < L; ++j) {
    int aj = 2 * j, bj = 2 * j + 1, an = (2 * j + 2) % (2 * L);
    H.H(bj, aj) += -a[j];
    H.H(aj, bj) += -a[j];
    H.H(an, bj) += -b[j];
    H.H(bj, an) += -b[j];
  }
  return H;
}

DisorderResult disordered_ssh_experiment(const DisorderSpec& s) {
  const int L = 2 * s.l + 1;
  const int nt = s.times.size();
  std::vector<std::vector<double>> gap(s.realizations), ent(s.realizations);
  std::vector<char> ok(s.realizations, 0);
  parallel_for(s.realizations, s.threads, [&](int r) {
    try {
      RealSpaceHamiltonian H0 = disordered_ssh(L, s.J, s.Jp, s.f, s.seed, 2 * std::uint64_t(r));
      FermiProjector P0 = fermi_projector(H0);
      RealSpaceHamiltonian H = disordered_ssh(L, s.Jq, s.Jpq, s.fq, s.seed, 2 * std::uint64_t(r) + 1);
      HermEig e = herm_eig(H.H);
      const int n = 2 * L, m = 2 * s.l;
      cmat Q = e.vectors.adjoint() * P0.P * e.vectors;
      cmat VS = e.vectors.topRows(m);
      for (int i = 0; i < nt; ++i) {
        cmat Qt(n, n);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) Qt(a, b) = Q(a, b) * std::polar(1.0, -(e.values(a) - e.values(b)) * s.times[i]);
        cmat seg = VS * Qt * VS.adjoint();
        HermEig se = herm_eig(0.5 * (seg + seg.adjoint()), 1e-8);
        std::vector<double> xi(se.values.data(), se.values.data() + m);
        for (double& x : xi) x = std::clamp(x, 0.0, 1.0);
        SpectrumReport rep = sp_report(xi);
        gap[r].push_back(sp_gap(rep));
        ent[r].push_back(sp_entropy(rep));
      }
      ok[r] = 1;
    } catch (const Error& err) {
      if (err.code() != Errc::GapClosure) throw;
    }
  });
  DisorderResult res;
  res.table.columns = {"t", "gap_mean", "gap_median", "gap_se", "entropy_mean", "entropy_se", "n_used", "n_skipped"};
  int used = 0;
  for (char c : ok) used += c;
  res.skipped = s.realizations - used;
  for (int i = 0; i < nt; ++i) {
    std::vector<double> g, sv;
    for (int r = 0; r < s.realizations; ++r)
      if (ok[r]) {
        g.push_back(gap[r][i]);
        sv.push_back(ent[r][i]);
      }
    double gm = std::nan(""), gs = std::nan(""), em = std::nan(""), es = std::nan("");
    if (!g.empty()) {
      mean_se(g, gm, gs);
      mean_se(sv, em, es);
    }
    res.table.rows.push_back({s.times[i], gm, median(g), gs, em, es, double(used), double(res.skipped)});
  }
  return res;
}

UniformMPS z2z2_mps(double p, double q) {
  if (!(p > 0 && p < 1 && q > 0 && q < 1)) throw Error(Errc::InvalidArgument, "p, q must lie in (0, 1)");
  cmat s0 = cmat::Identity(2, 2), sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cd(0, -1), cd(0, 1), 0;
  sz << 1, 0, 0, -1;
  std::vector<cmat> A{std::sqrt((1 - p) * (1 - q)) * s0, std::sqrt(q * (1 - p)) * sx,
                      cd(0, 1) * std::sqrt(p * (1 - q)) * sy, std::sqrt(p * q) * sz};
  UniformMPS m = make_mps(A);
  m.canonical = true;
  return m;
}

cmat z2z2_rep(int m, int n) {
  cmat R = cmat::Zero(4, 4);
  for (int j1 = 0; j1 < 2; ++j1)
    for (int j2 = 0; j2 < 2; ++j2) R(2 * j1 + j2, 2 * j1 + j2) = ((m * j1 + n * j2) % 2) ? -1.0 : 1.0;
  return R;
}

Table mbl_experiment(const MBLSpec& s) {
  if (s.L > 8) throw Error(Errc::SizeOverflow, "dense budget is 4^8");
  if (s.cut < 1 || s.cut >= s.L) throw Error(Errc::InvalidGeometry, "need 1 <= cut < L");
  UniformMPS mps = z2z2_mps(s.p, s.q);
  cvec psi0 = mps_dense_ring(mps.A, s.L);
  psi0.normalize();
  const int nq = 2 * s.L;
  const long long dim = psi0.size();
  const long long dA = 1LL << (2 * s.cut), dB = dim / dA;
  std::vector<std::vector<double>> ent(s.realizations), gap(s.realizations);
  parallel_for(s.realizations, s.threads, [&](int r) {
    Stream rng(s.seed, kMBLStream, r);
    std::vector<double> J(nq * nq, 0.0);
    for (int a = 0; a < nq; ++a)
      for (int b = a + 1; b < nq; ++b) {
        double w = s.J0 * std::exp(-s.kappa * (b - a));
        J[a * nq + b] = rng.uniform(-w, w);
      }
    std::vector<double> E(dim, 0.0);
    for (long long st = 0; st < dim; ++st) {
      double e = 0;
      for (int a = 0; a < nq; ++a) {
        double za = ((st >> (nq - 1 - a)) & 1) ? -1.0 : 1.0;
        for (int b = a + 1; b < nq; ++b) {
          double zb = ((st >> (nq - 1 - b)) & 1) ? -1.0 : 1.0;
          e += J[a * nq + b] * za * zb;
        }
      }
      E[st] = e;
    }
    for (double t : s.times) {
      cmat M(dA, dB);
      for (long long a = 0; a < dA; ++a)
        for (long long b = 0; b < dB; ++b) {
          long long st = a * dB + b;
          M(a, b) = psi0(st) * std::polar(1.0, -E[st] * t);
        }
      Eigen::JacobiSVD<cmat> svd(M);
      rvec sv = svd.singularValues();
      double S = 0;
      std::vector<double> z;
      for (int i = 0; i < sv.size(); ++i) {
        double p = sv(i) * sv(i);
        z.push_back(p);
        if (p > 0) S -= p * std::log(p);
      }
      ent[r].push_back(S);
      gap[r].push_back(z.size() >= 4 ? z[0] - z[3] : std::nan(""));
    }
  });
  Table tab;
  tab.columns = {"t", "entropy_mean", "entropy_se", "gap_mean", "gap_median", "gap_se"};
  for (size_t i = 0; i < s.times.size(); ++i) {
    std::vector<double> e, g;
    for (int r = 0; r < s.realizations; ++r) {
      e.push_back(ent[r][i]);
      g.push_back(gap[r][i]);
    }
    double em, es, gm, gs;
    mean_se(e, em, es);
    mean_se(g, gm, gs);
    tab.rows.push_back({s.times[i], em, es, gm, median(g), gs});
  }
  return tab;
}

cd cocycle_omega(const CocycleModel& m, int g, int h) {
  const int b = g % m.N, ap = h / m.N;
  return std::polar(1.0, 2 * M_PI * double((long long)m.nu * ap * b % m.N) / m.N);
}

namespace {

int gmul(int N, int g, int h) { return ((g / N + h / N) % N) * N + (g % N + h % N) % N; }
int ginv(int N, int g) { return ((N - g / N) % N) * N + (N - g % N) % N; }

}  // namespace

double cocycle_identity_residual(const CocycleModel& m) {
  const int G = m.N * m.N;
  double r = 0;
  for (int g = 0; g < G; ++g)
    for (int h = 0; h < G; ++h)
      for (int k = 0; k < G; ++k) {
        cd lhs = cocycle_omega(m, gmul(m.N, g, h), k) * cocycle_omega(m, g, h);
        cd rhs = cocycle_omega(m, g, gmul(m.N, h, k)) * cocycle_omega(m, h, k);
        r = std::max(r, std::abs(lhs - rhs));
      }
  return r;
}

CocycleModel make_cocycle_model(int N, int nu, int n, std::uint64_t seed, std::uint64_t draw) {
  if (N < 1 || n < 1 || N % n) throw Error(Errc::InvalidCocycle, "subgroup order must divide N");
  if (nu < 0 || nu >= N) throw Error(Errc::InvalidCocycle, "class must lie in [0, N)");
  CocycleModel m;
  m.N = N;
  m.nu = nu;
  m.n = n;
  const int G = N * N, p = N / n;
  std::vector<int> sub;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) sub.push_back((p * a) * N + p * b);
  Stream rng(seed, kCocycleStream, draw);
  m.h.assign(size_t(G) * G, 0.0);
  std::vector<char> done(size_t(G) * G, 0);
  for (int g = 0; g < G; ++g)
    for (int gp = 0; gp < G; ++gp) {
      if (done[g * G + gp]) continue;
      double v = rng.uniform(-1, 1);
      for (int s : sub) {
        int x = gmul(N, s, g), y = gmul(N, s, gp);
        m.h[x * G + y] = v;
        done[x * G + y] = 1;
      }
    }
  if (cocycle_identity_residual(m) > 1e-12) throw Error(Errc::InvalidCocycle, "cocycle identity fails");
  return m;
}

double subgroup_residual(const CocycleModel& m) {
  const int N = m.N, G = N * N, p = N / m.n;
  double r = 0;
  for (int a = 0; a < m.n; ++a)
    for (int b = 0; b < m.n; ++b) {
      int s = (p * a) * N + p * b;
      for (int g = 0; g < G; ++g)
        for (int gp = 0; gp < G; ++gp)
          r = std::max(r, std::abs(m.h[g * G + gp] - m.h[gmul(N, s, g) * G + gmul(N, s, gp)]));
    }
  return r;
}

cmat cocycle_m(const CocycleModel& m, double t) {
  const int G = m.N * m.N;
  cmat M(G, G);
  for (int g = 0; g < G; ++g)
    for (int gp = 0; gp < G; ++gp) {
      cd w = cocycle_omega(m, gmul(m.N, ginv(m.N, g), gp), ginv(m.N, gp));
      M(g, gp) = std::polar(1.0, -m.h[g * G + gp] * t) / w / double(G);
    }
  return M;
}

std::vector<double> cocycle_es(const CocycleModel& m, double t) {
  Svd s = svd(cocycle_m(m, t));
  std::vector<double> z;
  for (int i = 0; i < s.s.size(); ++i) z.push_back(s.s(i) * s.s(i));
  return z;
}

Degeneracy top_degeneracy(const std::vector<double>& es, int r, double tol) {
  Degeneracy d;
  if (es.empty()) return d;
  std::vector<double> head(es.begin(), es.begin() + std::min<size_t>(r, es.size()));
  std::vector<Cluster> cl = cluster_values(head, tol);
  d.clusters = cl.size();
  std::vector<Cluster> all = cluster_values(es, tol);
  d.top = all.front().multiplicity;
  return d;
}

int initial_degeneracy(int N, int nu) {
  if (nu < 0 || nu >= N) throw Error(Errc::InvalidArgument, "0 <= nu < N");
  return N / gcd(nu, N);
}

Table cocycle_experiment(const CocycleModel& m, const std::vector<double>& times) {
  const int G = m.N * m.N;
  const int r = initial_degeneracy(m.N, m.nu);
  Table tab;
  tab.columns = {"t", "top_degeneracy", "top_r_clusters"};
  for (int i = 1; i <= G; ++i) tab.columns.push_back("zeta_" + std::to_string(i));
  for (double t : times) {
    std::vector<double> z = cocycle_es(m, t);
    Degeneracy d = top_degeneracy(z, r);
    std::vector<double> row{t, double(d.top), double(d.clusters)};
    row.insert(row.end(), z.begin(), z.end());
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

UniformMPS cocycle_mps(const CocycleModel& m) {
  const int G = m.N * m.N;
  std::vector<cmat> A(G, cmat::Zero(G, G));
  for (int g = 0; g < G; ++g)
    for (int hp = 0; hp < G; ++hp)
      A[g](g, hp) = 1.0 / cocycle_omega(m, gmul(m.N, ginv(m.N, g), hp), ginv(m.N, hp)) / std::sqrt(double(G));
  return make_mps(A);
}

std::vector<cmat> cocycle_generators(int N) {
  const int G = N * N;
  std::vector<cmat> out;
  for (int gen : {N, 1}) {
    cmat R = cmat::Zero(G, G);
    for (int h = 0; h < G; ++h) R(gmul(N, gen, h), h) = 1;
    out.push_back(R);
  }
  return out;
}

DiagonalGates random_diagonal_gates(std::uint64_t seed) {
  Stream rng(seed, kGateStream, 0);
  DiagonalGates g;
  g.u.resize(4);
  g.v.resize(4);
  for (int i = 0; i < 4; ++i) g.u(i) = std::polar(1.0, rng.uniform(0, 2 * M_PI));
  for (int i = 0; i < 4; ++i) g.v(i) = std::polar(1.0, rng.uniform(0, 2 * M_PI));
  return g;
}

MPUTensor diagonal_mpu(const DiagonalGates& g, int power) {
  cmat u = cmat::Zero(4, 4), v = cmat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    u(i, i) = std::pow(g.u(i), power);
    v(i, i) = std::pow(g.v(i), power);
  }
  return bilayer_mpu(u, v, 2, 2);
}

MPSQuenchResult mps_quench_experiment(const MPSQuenchSpec& s) {
  UniformMPS mps = z2z2_mps(s.p, s.q);
  TransferChannel ch = transfer_analysis(mps);
  DiagonalGates g = random_diagonal_gates(s.seed);
  MPUTensor U1 = diagonal_mpu(g, 1);
  validate(U1, {2, 3});
  Simpleness simp = simpleness_k0(U1, 4);
  MPSQuenchResult res;
  res.k0 = simp.k0;
  res.DU = U1.DU;
  res.mu = ch.mu;
  res.table.columns = {"t", "l", "gap", "gap_floor", "bound", "valid"};
  for (int t : s.steps) {
    std::vector<cmat> A = t == 0 ? mps.A : apply_tensors(diagonal_mpu(g, t), mps.A);
    for (int l = s.l_min; l <= s.l_max; ++l) {
      PreciseGap pg = precise_segment_gap(A, l, 2);
      BoundInputs in;
      in.D = mps.D;
      in.DU = U1.DU;
      in.mu = ch.mu;
      in.k0 = simp.k0;
      in.l = l;
      in.t = t;
      double bound = std::nan("");
      bool valid = true;
      try {
        bound = thm2_bound(in);
      } catch (const Error& e) {
        if (e.code() != Errc::ValidityViolated) throw;
        valid = false;
      }
      res.table.rows.push_back({double(t), double(l), pg.gap, pg.floor, bound, valid ? 1.0 : 0.0});
    }
  }
  return res;
}

}  // namespace sptq
