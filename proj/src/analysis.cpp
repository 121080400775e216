#include "isingops/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <Eigen/Eigenvalues>

#include "isingops/combinatorics.hpp"

namespace isingops {

namespace {

// Largest eigenvalue of a Hermitian positive semidefinite operator by Lanczos with full
// reorthogonalization; stops when the top Ritz value settles.
double lanczos_top(const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& op, Eigen::Index dim) {
  if (dim == 0) return 0.0;
  const int kmax = static_cast<int>(std::min<Eigen::Index>(dim, 120));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd Q(dim, kmax + 1);
  Eigen::VectorXcd q(dim);
  for (Eigen::Index i = 0; i < dim; ++i) q(i) = cplx(nd(rng), nd(rng));
  q /= q.norm();
  Q.col(0) = q;
  std::vector<double> alpha, beta;
  Eigen::VectorXcd w(dim);
  double prev = -1.0;
  for (int j = 0; j < kmax; ++j) {
    op(Q.col(j), w);
    const double a = Q.col(j).dot(w).real();
    alpha.push_back(a);
    for (int r = 0; r < 2; ++r) w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).adjoint() * w);
    const double b = w.norm();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(j + 1, j + 1);
    for (int i = 0; i <= j; ++i) {
      T(i, i) = alpha[i];
      if (i < j) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    if (b <= 1e-14 * std::max(1.0, std::abs(top)) || (prev >= 0.0 && std::abs(top - prev) <= 1e-14 * std::abs(top)))
      return std::max(0.0, top);
    prev = top;
    beta.push_back(b);
    Q.col(j + 1) = w / b;
  }
  return std::max(0.0, prev);
}

double top_eigenvalue(const Eigen::MatrixXcd& H) {
  if (H.rows() == 0) return 0.0;
  if (H.rows() <= 1024) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff());
  }
  return lanczos_top([&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y.noalias() = H * x; }, H.rows());
}

double energy(const RapidityGrid& g, const int* c, int k) {
  double e = 0.0;
  for (int j = 0; j < k; ++j) e += std::cosh(g.node(c[j]));
  return e;
}

}  // namespace

KernelNorms grid_kernel_norms(const GridKernel& K, const Indicatrix& omega, bool parallel) {
  KernelNorms out;
  if (K.is_zero()) return out;
  const RapidityGrid& g = K.grid();
  const int G = g.size();
  const int m = K.m(), n = K.n();
  const bool by_rows = K.rows() >= K.cols();
  const int kb = by_rows ? m : n;  // streamed (big) side
  const int ks = by_rows ? n : m;
  const std::size_t nb = by_rows ? K.rows() : K.cols();
  const std::size_t ns = by_rows ? K.cols() : K.rows();
  if (ns > kGramLimit) throw ResourceLimit("kernel too large on both sides for a Gram matrix");

  std::vector<double> sw(ns), dw(ns);
  {
    std::vector<int> c(std::max(ks, 1));
    combo_first(c.data(), ks);
    std::size_t r = 0;
    do {
      sw[r] = std::sqrt(tuple_weight(g, c.data(), ks));
      dw[r] = std::exp(-omega(energy(g, c.data(), ks)));
      ++r;
    } while (ks > 0 && combo_next(c.data(), ks, G));
  }

  Eigen::MatrixXcd gram_plain = Eigen::MatrixXcd::Zero(ns, ns);
  Eigen::MatrixXcd gram_big = Eigen::MatrixXcd::Zero(ns, ns);
  const std::size_t batch = 64;
#pragma omp parallel if (parallel)
  {
    Eigen::MatrixXcd gp = Eigen::MatrixXcd::Zero(ns, ns), gb = Eigen::MatrixXcd::Zero(ns, ns);
    Eigen::MatrixXcd V(batch, ns), Vw(batch, ns);
    std::vector<cplx> buf(ns);
    std::vector<int> c(std::max(kb, 1));
#pragma omp for schedule(dynamic)
    for (std::size_t start = 0; start < nb; start += batch) {
      const std::size_t cnt = std::min(batch, nb - start);
      for (std::size_t b = 0; b < cnt; ++b) {
        combo_unrank(start + b, kb, c.data());
        if (by_rows)
          K.fill_row(c.data(), buf.data());
        else
          K.fill_col(c.data(), buf.data());
        const double wb = std::sqrt(tuple_weight(g, c.data(), kb));
        const double eb = std::exp(-omega(energy(g, c.data(), kb)));
        for (std::size_t j = 0; j < ns; ++j) {
          V(b, j) = wb * sw[j] * buf[j];
          Vw(b, j) = eb * V(b, j);
        }
      }
      const auto Vb = V.topRows(cnt);
      const auto Vwb = Vw.topRows(cnt);
      gp.noalias() += Vb.adjoint() * Vb;
      gb.noalias() += Vwb.adjoint() * Vwb;
    }
#pragma omp critical
    {
      gram_plain += gp;
      gram_big += gb;
    }
  }
  Eigen::MatrixXcd gram_small = gram_plain;
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < ns; ++j) gram_small(i, j) *= dw[i] * dw[j];

  const double f = std::sqrt(factorial(m) * factorial(n));
  const double plain = f * std::sqrt(top_eigenvalue(gram_plain));
  const double big = f * std::sqrt(top_eigenvalue(gram_big));
  const double small = f * std::sqrt(top_eigenvalue(gram_small));
  out.plain = plain;
  out.omega_left = by_rows ? big : small;
  out.omega_right = by_rows ? small : big;
  return out;
}

double kernel_opnorm(const GridKernel& K, bool parallel) {
  return grid_kernel_norms(K, Indicatrix::zero(), parallel).plain;
}

double omega_norm(const GridKernel& K, const Indicatrix& omega, bool parallel) {
  return grid_kernel_norms(K, omega, parallel).omega();
}

namespace {

// Full-tuple weights and energies in lexicographic order.
void full_tuple_data(const RapidityGrid& g, int k, std::vector<double>& sw, std::vector<double>& en) {
  const int G = g.size();
  std::size_t total = 1;
  for (int j = 0; j < k; ++j) total *= G;
  sw.assign(total, 1.0);
  en.assign(total, 0.0);
  for (std::size_t r = 0; r < total; ++r) {
    std::size_t q = r;
    double w = 1.0, e = 0.0;
    for (int j = 0; j < k; ++j) {
      const int i = static_cast<int>(q % G);
      q /= G;
      w *= g.weight(i);
      e += std::cosh(g.node(i));
    }
    sw[r] = std::sqrt(w);
    en[r] = e;
  }
}

double dense_sigma(const DenseKernel& K, const std::vector<double>& rl, const std::vector<double>& cl) {
  const std::size_t R = K.rows(), C = K.cols();
  if (R == 0 || C == 0) return 0.0;
  if (std::min(R, C) <= 2048) {
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(K.data.data(), R, C);
    Eigen::MatrixXcd S = M;
    for (std::size_t i = 0; i < R; ++i)
      for (std::size_t j = 0; j < C; ++j) S(i, j) *= rl[i] * cl[j];
    const Eigen::MatrixXcd H = (R <= C) ? Eigen::MatrixXcd(S * S.adjoint()) : Eigen::MatrixXcd(S.adjoint() * S);
    return std::sqrt(top_eigenvalue(H));
  }
  // matrix-free Lanczos on M^H M with M = diag(rl) K diag(cl)
  Eigen::VectorXcd y(R);
  auto op = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& z) {
#pragma omp parallel for
    for (std::size_t i = 0; i < R; ++i) {
      cplx a = 0.0;
      const cplx* row = &K.data[i * C];
      for (std::size_t j = 0; j < C; ++j) a += row[j] * (cl[j] * x(j));
      y(i) = rl[i] * rl[i] * a;
    }
    z.setZero(C);
    for (std::size_t i = 0; i < R; ++i) {
      const cplx yi = y(i);
      const cplx* row = &K.data[i * C];
      for (std::size_t j = 0; j < C; ++j) z(j) += std::conj(row[j]) * yi;
    }
    for (std::size_t j = 0; j < C; ++j) z(j) *= cl[j];
  };
  return std::sqrt(lanczos_top(op, static_cast<Eigen::Index>(C)));
}

}  // namespace

KernelNorms dense_kernel_norms(const DenseKernel& K, const RapidityGrid& grid, const Indicatrix& omega) {
  if (K.G != grid.size()) throw InvalidArgument("kernel and grid sizes differ");
  std::vector<double> rw, re, cw, ce;
  full_tuple_data(grid, K.m, rw, re);
  full_tuple_data(grid, K.n, cw, ce);
  KernelNorms out;
  out.plain = dense_sigma(K, rw, cw);
  if (omega.kind == Indicatrix::Kind::Zero) {
    out.omega_left = out.omega_right = out.plain;
    return out;
  }
  std::vector<double> rl(rw), cl(cw);
  for (std::size_t i = 0; i < rl.size(); ++i) rl[i] *= std::exp(-omega(re[i]));
  out.omega_left = dense_sigma(K, rl, cw);
  for (std::size_t j = 0; j < cl.size(); ++j) cl[j] *= std::exp(-omega(ce[j]));
  out.omega_right = dense_sigma(K, rw, cl);
  return out;
}

double kernel_opnorm(const DenseKernel& K, const RapidityGrid& grid) {
  return dense_kernel_norms(K, grid, Indicatrix::zero()).plain;
}

double omega_norm(const DenseKernel& K, const RapidityGrid& grid, const Indicatrix& omega) {
  return dense_kernel_norms(K, grid, omega).omega();
}

nlohmann::json NormReport::to_json() const {
  return {{"m", m}, {"n", n}, {"plain", plain}, {"omega", omega}, {"nodes", nodes}, {"cutoff", cutoff},
          {"refined_delta", refined_delta}};
}

NormReport norm_report(const CoefficientFamily& fam, int m, int n, const Indicatrix& omega, GridPtr grid,
                       int refined_nodes, bool parallel) {
  NormReport r;
  r.m = m;
  r.n = n;
  r.nodes = grid->size();
  r.cutoff = grid->cutoff();
  const auto N = grid_kernel_norms(GridKernel(fam, m, n, grid), omega, parallel);
  r.plain = N.plain;
  r.omega = N.omega();
  if (refined_nodes > 0) {
    const auto fine = make_grid(refined_nodes, grid->cutoff());
    r.refined_delta = std::abs(omega_norm(GridKernel(fam, m, n, fine), omega, parallel) - r.omega);
  }
  return r;
}

nlohmann::json SummabilityReport::to_json() const {
  return {{"n", n},
          {"epsilon", epsilon},
          {"m", m},
          {"norm_mn", norm_mn},
          {"norm_nm", norm_nm},
          {"terms", terms},
          {"partial_sums", partial_sums},
          {"ratios", ratios},
          {"envelope_c", envelope_c},
          {"envelope_fit_terms", envelope_fit_terms},
          {"envelope_violations", envelope_violations},
          {"eventual_ratio_below_one", eventual_ratio_below_one},
          {"stirling_threshold", stirling_threshold},
          {"terminates", terminates}};
}

namespace {

double envelope_root(double N, int m, double eps) {
  const double growth = m > 0 ? std::pow(static_cast<double>(m), eps * m) : 1.0;
  return std::pow(N / growth, 1.0 / (m + 1));
}

}  // namespace

SummabilityReport summability_scan(const CoefficientFamily& fam, const Indicatrix& omega, int n, int m_max,
                                   GridPtr grid, double epsilon, bool parallel) {
  if (n < 0 || m_max < 0) throw InvalidArgument("summability scan needs n, m_max >= 0");
  SummabilityReport rep;
  rep.n = n;
  rep.epsilon = epsilon;
  double sum = 0.0;
  std::vector<int> nz;
  for (int m = 0; m <= m_max; ++m) {
    double a = 0.0, b = 0.0;
    if (fam.nonzero_in(m + n)) {
      a = omega_norm(GridKernel(fam, m, n, grid), omega, parallel);
      b = (m == n) ? a : omega_norm(GridKernel(fam, n, m, grid), omega, parallel);
    }
    const double t = std::pow(2.0, 0.5 * m) / std::sqrt(factorial(m)) * (a + b);
    rep.m.push_back(m);
    rep.norm_mn.push_back(a);
    rep.norm_nm.push_back(b);
    rep.terms.push_back(t);
    sum += t;
    rep.partial_sums.push_back(sum);
    if (t > 0.0) nz.push_back(m);
  }
  for (std::size_t i = 1; i < nz.size(); ++i) rep.ratios.push_back(rep.terms[nz[i]] / rep.terms[nz[i - 1]]);
  if (!rep.ratios.empty()) {
    const std::size_t tail = std::min<std::size_t>(2, rep.ratios.size());
    rep.eventual_ratio_below_one = true;
    for (std::size_t i = rep.ratios.size() - tail; i < rep.ratios.size(); ++i)
      rep.eventual_ratio_below_one = rep.eventual_ratio_below_one && rep.ratios[i] < 1.0;
  }
  rep.terminates = fam.is_odd() ? false : true;
  if (!fam.is_odd())
    for (int m : nz) rep.terminates = rep.terminates && (m + n == 2 * fam.k);

  const std::size_t nfit = nz.size() >= 3 ? nz.size() - 2 : nz.size();
  rep.envelope_fit_terms = static_cast<int>(nfit);
  for (std::size_t i = 0; i < nfit; ++i) {
    const int m = nz[i];
    rep.envelope_c = std::max(rep.envelope_c, envelope_root(rep.norm_mn[m] + rep.norm_nm[m], m, epsilon));
  }
  for (std::size_t i = nfit; i < nz.size(); ++i) {
    const int m = nz[i];
    const double growth = m > 0 ? std::pow(static_cast<double>(m), epsilon * m) : 1.0;
    if (rep.norm_mn[m] + rep.norm_nm[m] > std::pow(rep.envelope_c, m + 1) * growth * (1.0 + 1e-12))
      ++rep.envelope_violations;
  }
  // ratio of consecutive envelope terms 2^{m/2} c^{m+1} m^{eps m} / sqrt(m!), in logs
  if (rep.envelope_c > 0.0) {
    auto logb = [&](int m) {
      return 0.5 * m * std::log(2.0) + (m + 1) * std::log(rep.envelope_c) + (m > 0 ? epsilon * m * std::log(m) : 0.0) -
             0.5 * std::lgamma(m + 1.0);
    };
    int last_up = 0;
    for (int m = 1; m < 400; ++m)
      if (logb(m + 1) - logb(m) >= 0.0) last_up = m;
    rep.stirling_threshold = last_up + 1;
  }
  return rep;
}

nlohmann::json DoubleSumReport::to_json() const {
  return {{"max_index", max_index}, {"weighted", weighted}, {"total", total}, {"last_shell", last_shell}};
}

DoubleSumReport summable2_scan(const CoefficientFamily& fam, const Indicatrix& omega, int max_index, GridPtr grid,
                               bool parallel) {
  DoubleSumReport rep;
  rep.max_index = max_index;
  rep.weighted.assign(max_index + 1, std::vector<double>(max_index + 1, 0.0));
  for (int m = 0; m <= max_index; ++m)
    for (int n = 0; n <= max_index; ++n) {
      if (!fam.nonzero_in(m + n)) continue;
      const double w = std::pow(2.0, 0.5 * (m + n)) / std::sqrt(factorial(m) * factorial(n)) *
                       omega_norm(GridKernel(fam, m, n, grid), omega, parallel);
      rep.weighted[m][n] = w;
      rep.total += w;
      if (std::max(m, n) == max_index) rep.last_shell += w;
    }
  return rep;
}

cplx kga_smooth(const KgaSpec& spec, const std::vector<double>& theta, const std::vector<double>& eta) {
  std::vector<cplx> x;
  double p0 = 0.0, p1 = 0.0, E = 0.0;
  for (double t : theta) {
    x.emplace_back(std::exp(t));
    p0 += std::cosh(t);
    p1 += std::sinh(t);
  }
  for (double e : eta) {
    x.emplace_back(std::exp(-e));
    p0 -= std::cosh(e);
    p1 -= std::sinh(e);
    E += std::cosh(e);
  }
  const double mu = spec.model.mu;
  return eval(spec.P, x) * spec.g.transform(mu * p0, mu * p1) * std::exp(-std::pow(E, spec.alpha));
}

namespace {

std::vector<int> lex_digits(std::size_t r, int k, int G) {
  std::vector<int> d(k);
  for (int j = k - 1; j >= 0; --j) {
    d[j] = static_cast<int>(r % G);
    r /= G;
  }
  return d;
}

std::size_t ipow(int G, int k) {
  std::size_t t = 1;
  for (int j = 0; j < k; ++j) t *= G;
  return t;
}

}  // namespace

namespace {

// Multiplies the first l theta/eta pairs of K by the discretized coth((theta - eta + i0)/2).
void apply_cross_factors(DenseKernel& K, int l, const RapidityGrid& grid) {
  if (l == 0) return;
  const int G = grid.size(), m = K.m, n = K.n;
  const Eigen::MatrixXd& C = grid.pv_coth_matrix();
  std::vector<cplx> B(static_cast<std::size_t>(G) * G);
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      cplx b = C(j, i) / grid.weight(i);
      if (i == j) b -= 2.0 * kPi * kI / grid.weight(i);
      B[i * G + j] = b;
    }
  const std::size_t R = K.rows(), Cn = K.cols();
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < R; ++r) {
    const auto I = lex_digits(r, m, G);
    std::vector<int> J(n);
    for (std::size_t c = 0; c < Cn; ++c) {
      std::size_t q = c;
      for (int j = n - 1; j >= 0; --j) {
        J[j] = static_cast<int>(q % G);
        q /= G;
      }
      cplx f = 1.0;
      for (int j = 0; j < l; ++j) f *= B[I[j] * G + J[j]];
      K(r, c) *= f;
    }
  }
}

// One side of kga_smooth: the Laurent variables and the momentum sums of theta (sign +1,
// x = e^theta) or eta (sign -1, x = e^-eta).
struct KgaSide {
  std::vector<cplx> x;
  double p0 = 0.0;
  double p1 = 0.0;
  double energy = 0.0;
};

void kga_side(const double* v, int k, int sign, KgaSide& s) {
  s.x.resize(k);
  s.p0 = s.p1 = s.energy = 0.0;
  for (int a = 0; a < k; ++a) {
    s.x[a] = std::exp(sign * v[a]);
    s.p0 += std::cosh(v[a]);
    s.p1 += std::sinh(v[a]);
  }
  s.energy = s.p0;
}

double kga_damping(const KgaSpec& spec, const KgaSide& eta) { return std::exp(-std::pow(eta.energy, spec.alpha)); }

// Same value as kga_smooth up to rounding; xbuf is scratch space.
cplx kga_combine(const KgaSpec& spec, const KgaSide& th, const KgaSide& et, double damping, std::vector<cplx>& xbuf) {
  xbuf.assign(th.x.begin(), th.x.end());
  xbuf.insert(xbuf.end(), et.x.begin(), et.x.end());
  const double mu = spec.model.mu;
  return eval(spec.P, xbuf) * spec.g.transform(mu * (th.p0 - et.p0), mu * (th.p1 - et.p1)) * damping;
}

// Canonical (sorted) class of every lexicographic k-tuple on G nodes. The smooth part is
// symmetric within theta and within eta, so it is evaluated once per class.
void tuple_classes(int k, int G, std::vector<int>& cls, std::vector<std::vector<int>>& reps) {
  const std::size_t total = ipow(G, k);
  cls.resize(total);
  std::map<std::vector<int>, int> index;
  for (std::size_t r = 0; r < total; ++r) {
    auto d = lex_digits(r, k, G);
    std::sort(d.begin(), d.end());
    const auto it = index.emplace(d, static_cast<int>(reps.size()));
    if (it.second) reps.push_back(d);
    cls[r] = it.first->second;
  }
}

DenseKernel kga_smooth_kernel(const KgaSpec& spec, int m, int n, const RapidityGrid& grid) {
  const int G = grid.size();
  if (static_cast<double>(ipow(G, m)) * ipow(G, n) > 33554432.0) throw ResourceLimit("dense kernel too large");
  DenseKernel K(m, n, G);
  std::vector<int> rcls, ccls;
  std::vector<std::vector<int>> rreps, creps;
  tuple_classes(m, G, rcls, rreps);
  tuple_classes(n, G, ccls, creps);
  const std::size_t NR = rreps.size(), NC = creps.size();
  std::vector<KgaSide> rows(NR), cols(NC);
  std::vector<double> damp(NC);
  for (std::size_t i = 0; i < NR; ++i) {
    std::vector<double> th(m);
    for (int a = 0; a < m; ++a) th[a] = grid.node(rreps[i][a]);
    kga_side(th.data(), m, 1, rows[i]);
  }
  for (std::size_t j = 0; j < NC; ++j) {
    std::vector<double> et(n);
    for (int b = 0; b < n; ++b) et[b] = grid.node(creps[j][b]);
    kga_side(et.data(), n, -1, cols[j]);
    damp[j] = kga_damping(spec, cols[j]);
  }
  std::vector<cplx> V(NR * NC);
#pragma omp parallel
  {
    std::vector<cplx> xbuf;
#pragma omp for schedule(dynamic)
    for (std::size_t i = 0; i < NR; ++i)
      for (std::size_t j = 0; j < NC; ++j) V[i * NC + j] = kga_combine(spec, rows[i], cols[j], damp[j], xbuf);
  }
  const std::size_t R = K.rows(), Cn = K.cols();
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < R; ++r) {
    const cplx* src = &V[static_cast<std::size_t>(rcls[r]) * NC];
    for (std::size_t c = 0; c < Cn; ++c) K(r, c) = src[ccls[c]];
  }
  return K;
}

}  // namespace

DenseKernel kga_kernel(const KgaSpec& spec, int m, int n, int l, const RapidityGrid& grid) {
  if (l < 0 || l > std::min(m, n)) throw InvalidArgument("need 0 <= l <= min(m, n)");
  DenseKernel K = kga_smooth_kernel(spec, m, n, grid);
  apply_cross_factors(K, l, grid);
  return K;
}

double kga_rhs_sup(const KgaSpec& spec, int m, int n, int l, const RapidityGrid& grid) {
  if (m > 16 || l < 0 || l > std::min(m, n)) throw InvalidArgument("need m <= 16 and 0 <= l <= min(m, n)");
  const int G = grid.size();
  const std::size_t total = ipow(G, m + n);
  const std::size_t cap = 200000;
  std::vector<std::size_t> points;
  if (total <= cap) {
    points.resize(total);
    for (std::size_t i = 0; i < total; ++i) points[i] = i;
  } else {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<std::size_t> U(0, total - 1);
    points.resize(cap);
    for (auto& p : points) p = U(rng);
  }
  const double h = 1e-3;
  double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(dynamic, 256)
  for (std::size_t q = 0; q < points.size(); ++q) {
    const auto d = lex_digits(points[q], m + n, G);
    std::vector<double> th(m), et(n);
    double wgt = 1.0;
    for (int a = 0; a < m; ++a) {
      th[a] = grid.node(d[a]);
      wgt *= std::sqrt(1.0 + th[a] * th[a]);
    }
    for (int b = 0; b < n; ++b) {
      et[b] = grid.node(d[m + b]);
      wgt *= std::sqrt(1.0 + et[b] * et[b]);
    }
    KgaSide es, ts;
    std::vector<cplx> xbuf;
    kga_side(et.data(), n, -1, es);
    const double damping = kga_damping(spec, es);
    // exp, cosh, sinh of theta_a - h, theta_a, theta_a + h
    double ex[16][3], ch[16][3], sh[16][3];
    for (int a = 0; a < m; ++a)
      for (int v = 0; v < 3; ++v) {
        const double t = th[a] + (v - 1) * h;
        ex[a][v] = std::exp(t);
        ch[a][v] = std::cosh(t);
        sh[a][v] = std::sinh(t);
      }
    ts.x.resize(m);
    int shift[16];
    for (int mask = 0; mask < (1 << l); ++mask) {
      // mixed central difference over the theta variables in the mask
      std::vector<int> vars;
      for (int j = 0; j < l; ++j)
        if (mask & (1 << j)) vars.push_back(j);
      const int k = static_cast<int>(vars.size());
      cplx acc = 0.0;
      for (int s = 0; s < (1 << k); ++s) {
        std::fill(shift, shift + m, 1);
        double sg = 1.0;
        for (int b = 0; b < k; ++b) {
          const bool plus = s & (1 << b);
          shift[vars[b]] = plus ? 2 : 0;
          if (!plus) sg = -sg;
        }
        ts.p0 = ts.p1 = 0.0;
        for (int a = 0; a < m; ++a) {
          ts.x[a] = ex[a][shift[a]];
          ts.p0 += ch[a][shift[a]];
          ts.p1 += sh[a][shift[a]];
        }
        acc += sg * kga_combine(spec, ts, es, damping, xbuf);
      }
      acc /= std::pow(2.0 * h, k);
      best = std::max(best, std::abs(acc) * wgt);
    }
  }
  return best;
}

nlohmann::json BoundCheckReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks)
    arr.push_back({{"m", c.m}, {"n", c.n}, {"l", c.l}, {"lhs", c.lhs}, {"sup", c.sup}, {"rhs", c.rhs}, {"pass", c.pass}});
  return {{"c_L", c_L}, {"violations", violations}, {"envelope_c", envelope_c}, {"epsilon", epsilon}, {"checks", arr}};
}

BoundCheckReport kernel_bound_check(const KgaSpec& spec, int max_mn, int max_l, const RapidityGrid& grid,
                                    double epsilon) {
  BoundCheckReport rep;
  rep.epsilon = epsilon;
  const double lhs11 = kernel_opnorm(kga_kernel(spec, 1, 1, 1, grid), grid);
  const double sup11 = kga_rhs_sup(spec, 1, 1, 1, grid);
  rep.c_L = std::max(std::sqrt(kPi), sup11 > 0.0 ? std::sqrt(lhs11 / sup11) : 0.0);
  for (int m = 1; m <= max_mn; ++m)
    for (int n = 1; n <= max_mn; ++n) {
      const DenseKernel S = kga_smooth_kernel(spec, m, n, grid);
      for (int l = 0; l <= std::min({m, n, max_l}); ++l) {
        BoundCheck c;
        c.m = m;
        c.n = n;
        c.l = l;
        DenseKernel K = S;
        apply_cross_factors(K, l, grid);
        c.lhs = kernel_opnorm(K, grid);
        c.sup = kga_rhs_sup(spec, m, n, l, grid);
        c.rhs = std::pow(rep.c_L, m + n) * c.sup;
        c.pass = c.lhs <= c.rhs;
        if (!c.pass) ++rep.violations;
        rep.envelope_c = std::max(rep.envelope_c, envelope_root(c.lhs / (std::pow(static_cast<double>(m), epsilon * m) *
                                                                         std::pow(static_cast<double>(n), epsilon * n)),
                                                                m + n, 0.0));
        rep.checks.push_back(c);
      }
    }
  return rep;
}

}  // namespace isingops
