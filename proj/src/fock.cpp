#include "isingops/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include <omp.h>

#include "isingops/combinatorics.hpp"

namespace isingops {

GridPtr make_grid(int nodes, double cutoff) { return std::make_shared<const RapidityGrid>(nodes, cutoff); }

double tuple_weight(const RapidityGrid& g, const int* c, int k) {
  double w = 1.0;
  for (int j = 0; j < k; ++j) w *= g.weight(c[j]);
  return w;
}

FockVector::FockVector(GridPtr grid, int nmax) : grid_(std::move(grid)), nmax_(nmax) {
  if (!grid_) throw InvalidArgument("Fock vector needs a grid");
  if (nmax < 0) throw InvalidArgument("sector truncation must be nonnegative");
  sectors_.resize(nmax + 1);
  for (int n = 0; n <= nmax; ++n) sectors_[n].assign(sector_size(n), cplx(0.0));
}

std::size_t FockVector::sector_size(int n) const { return binom(grid_->size(), n); }

FockVector FockVector::vacuum(GridPtr grid, int nmax) {
  FockVector v(std::move(grid), nmax);
  v.sectors_[0][0] = 1.0;
  return v;
}

FockVector FockVector::random(GridPtr grid, int nmax, std::mt19937_64& rng, int top) {
  FockVector v(std::move(grid), nmax);
  if (top < 0 || top > nmax) top = nmax;
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int n = 0; n <= top; ++n)
    for (auto& x : v.sectors_[n]) {
      const double re = nd(rng);
      x = cplx(re, nd(rng));
    }
  return v;
}

FockVector FockVector::from_function(GridPtr grid, int nmax, int n,
                                     const std::function<cplx(const std::vector<double>&)>& f) {
  FockVector v(std::move(grid), nmax);
  if (n < 0 || n > nmax) throw InvalidArgument("sector outside truncation");
  const RapidityGrid& g = *v.grid_;
  std::vector<int> c(n);
  std::vector<double> th(n);
  combo_first(c.data(), n);
  std::size_t r = 0;
  do {
    for (int j = 0; j < n; ++j) th[j] = g.node(c[j]);
    v.sectors_[n][r++] = f(th);
  } while (n > 0 && combo_next(c.data(), n, g.size()));
  return v;
}

cplx FockVector::at(std::vector<int> idx) const {
  const int n = static_cast<int>(idx.size());
  if (n > nmax_) return 0.0;
  const int s = sort_with_sign(idx.data(), n);
  if (s == 0) return 0.0;
  return static_cast<double>(s) * sectors_[n][combo_rank(idx.data(), n)];
}

std::vector<cplx> FockVector::full_sector(int n) const {
  const int G = grid_->size();
  std::size_t total = 1;
  for (int j = 0; j < n; ++j) total *= static_cast<std::size_t>(G);
  std::vector<cplx> out(total);
  std::vector<int> idx(n, 0);
  for (std::size_t lin = 0; lin < total; ++lin) {
    std::size_t rem = lin;
    for (int j = n - 1; j >= 0; --j) {
      idx[j] = static_cast<int>(rem % G);
      rem /= G;
    }
    out[lin] = at(idx);
  }
  return out;
}

double FockVector::sector_norm(int n) const {
  const RapidityGrid& g = *grid_;
  std::vector<int> c(std::max(n, 1));
  combo_first(c.data(), n);
  double s = 0.0;
  std::size_t r = 0;
  do {
    s += tuple_weight(g, c.data(), n) * std::norm(sectors_[n][r++]);
  } while (n > 0 && combo_next(c.data(), n, g.size()));
  return std::sqrt(factorial(n) * s);
}

double FockVector::norm() const {
  double s = 0.0;
  for (int n = 0; n <= nmax_; ++n) {
    const double x = sector_norm(n);
    s += x * x;
  }
  return std::sqrt(s);
}

void FockVector::check_compatible(const FockVector& o) const {
  if (!grid_ || !o.grid_) throw InvalidArgument("uninitialized Fock vector");
  if (!grid_->same_as(*o.grid_)) throw InvalidArgument("Fock vectors live on different grids");
  if (nmax_ != o.nmax_) throw InvalidArgument("Fock vectors have different truncations");
}

FockVector FockVector::operator+(const FockVector& o) const {
  check_compatible(o);
  FockVector r = *this;
  for (int n = 0; n <= nmax_; ++n)
    for (std::size_t i = 0; i < r.sectors_[n].size(); ++i) r.sectors_[n][i] += o.sectors_[n][i];
  r.truncation_loss += o.truncation_loss;
  r.warnings.insert(r.warnings.end(), o.warnings.begin(), o.warnings.end());
  return r;
}

FockVector FockVector::operator-(const FockVector& o) const { return *this + o * cplx(-1.0); }

FockVector FockVector::operator*(cplx c) const {
  FockVector r = *this;
  for (auto& s : r.sectors_)
    for (auto& x : s) x *= c;
  r.truncation_loss *= std::abs(c);
  return r;
}

nlohmann::json FockVector::metadata() const {
  nlohmann::json j;
  j["nmax"] = nmax_;
  j["grid_nodes"] = grid_->size();
  j["cutoff"] = grid_->cutoff();
  j["truncation_loss"] = truncation_loss;
  j["warnings"] = warnings;
  std::vector<double> norms;
  for (int n = 0; n <= nmax_; ++n) norms.push_back(sector_norm(n));
  j["sector_norms"] = norms;
  return j;
}

namespace {

template <typename T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  // the build targets little-endian hosts; assert rather than byte-swap
  static_assert(sizeof(T) <= 8);
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw InvalidArgument("truncated Fock vector file");
  return v;
}

bool host_little_endian() {
  const std::uint16_t x = 1;
  unsigned char b[2];
  std::memcpy(b, &x, 2);
  return b[0] == 1;
}

}  // namespace

void FockVector::write_binary(std::ostream& os) const {
  if (!host_little_endian()) throw InvalidArgument("binary serialization requires a little-endian host");
  put_le<std::int32_t>(os, nmax_);
  put_le<std::int32_t>(os, grid_->size());
  put_le<double>(os, grid_->cutoff());
  for (int n = 0; n <= nmax_; ++n) {
    const auto full = full_sector(n);
    for (const cplx& z : full) {
      put_le<float>(os, static_cast<float>(z.real()));
      put_le<float>(os, static_cast<float>(z.imag()));
    }
  }
}

FockVector FockVector::read_binary(std::istream& is) {
  if (!host_little_endian()) throw InvalidArgument("binary serialization requires a little-endian host");
  const int N = get_le<std::int32_t>(is);
  const int G = get_le<std::int32_t>(is);
  const double theta = get_le<double>(is);
  if (N < 0 || N > 12 || G < 2 || G > 4096) throw InvalidArgument("corrupt Fock vector header");
  FockVector v(make_grid(G, theta), N);
  for (int n = 0; n <= N; ++n) {
    std::size_t total = 1;
    for (int j = 0; j < n; ++j) total *= static_cast<std::size_t>(G);
    std::vector<int> idx(n);
    for (std::size_t lin = 0; lin < total; ++lin) {
      const float re = get_le<float>(is);
      const float im = get_le<float>(is);
      std::size_t rem = lin;
      for (int j = n - 1; j >= 0; --j) {
        idx[j] = static_cast<int>(rem % G);
        rem /= G;
      }
      bool increasing = true;
      for (int j = 1; j < n; ++j) increasing = increasing && idx[j - 1] < idx[j];
      if (increasing) v.sectors_[n][combo_rank(idx.data(), n)] = cplx(re, im);
    }
  }
  return v;
}

cplx inner_product(const FockVector& psi, const FockVector& chi) {
  psi.check_compatible(chi);
  const RapidityGrid& g = psi.grid();
  cplx total = 0.0;
  for (int n = 0; n <= psi.nmax(); ++n) {
    const auto& a = psi.sector(n);
    const auto& b = chi.sector(n);
    std::vector<int> c(std::max(n, 1));
    combo_first(c.data(), n);
    cplx s = 0.0;
    std::size_t r = 0;
    do {
      s += tuple_weight(g, c.data(), n) * std::conj(a[r]) * b[r];
      ++r;
    } while (n > 0 && combo_next(c.data(), n, g.size()));
    total += factorial(n) * s;
  }
  return total;
}

std::vector<cplx> grid_values(const RapidityGrid& g, const std::function<cplx(double)>& h) {
  std::vector<cplx> v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = h(g.node(i));
  return v;
}

std::vector<cplx> grid_transform(const TestFunction2D& f, const RapidityGrid& g, int sign,
                                 const ModelParams& model) {
  std::vector<cplx> v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = fourier_pm(f, g.node(i), sign, model);
  return v;
}

namespace {

void check_onepart(const std::vector<cplx>& h, const FockVector& psi) {
  if (static_cast<int>(h.size()) != psi.grid().size())
    throw InvalidArgument("one-particle function does not match the grid size");
}

// Runs body(r, c) over all ranks r in [0, count) with c the colex tuple of rank r,
// unranking once per thread chunk and stepping with combo_next.
template <class Body>
void for_each_combo(std::size_t count, int n, Body body) {
#pragma omp parallel
  {
    const std::size_t T = static_cast<std::size_t>(omp_get_num_threads());
    const std::size_t t = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t lo = count * t / T, hi = count * (t + 1) / T;
    if (lo < hi) {
      int c[20];
      combo_unrank(lo, n, c);
      for (std::size_t r = lo; r < hi; ++r) {
        body(r, c);
        combo_next(c, n, 1 << 30);
      }
    }
  }
}

// (z(h) psi) restricted to the input sector n+1 -> output sector n.
void annihilate_sector(const std::vector<cplx>& h, const FockVector& psi, int n, std::vector<cplx>& out) {
  const RapidityGrid& g = psi.grid();
  const int G = g.size();
  const auto& src = psi.sector(n + 1);
  const double pre = std::sqrt(static_cast<double>(n + 1));
  std::vector<cplx> wh(G);
  for (int k = 0; k < G; ++k) wh[k] = g.weight(k) * h[k];
  for_each_combo(out.size(), n, [&](std::size_t r, const int* c) {
    // rank of c with k inserted at position p: lower[p] + C(k, p+1) + upper[p]
    std::size_t lower[21], upper[21];
    lower[0] = 0;
    for (int j = 0; j < n; ++j) lower[j + 1] = lower[j] + binom(c[j], j + 1);
    upper[n] = 0;
    for (int j = n - 1; j >= 0; --j) upper[j] = upper[j + 1] + binom(c[j], j + 2);
    cplx s = 0.0;
    int pos = 0;  // number of entries of c below k
    for (int k = 0; k < G; ++k) {
      while (pos < n && c[pos] < k) ++pos;
      if (pos < n && c[pos] == k) continue;
      const cplx v = wh[k] * src[lower[pos] + binom(k, pos + 1) + upper[pos]];
      s += (pos % 2 == 0) ? v : -v;
    }
    out[r] = pre * s;
  });
}

}  // namespace

FockVector z_apply(const std::vector<cplx>& h, const FockVector& psi) {
  check_onepart(h, psi);
  FockVector out(psi.grid_ptr(), psi.nmax());
  out.truncation_loss = psi.truncation_loss;
  out.warnings = psi.warnings;
  for (int n = 0; n < psi.nmax(); ++n) annihilate_sector(h, psi, n, out.sector(n));
  return out;
}

FockVector z_dagger_apply(const std::vector<cplx>& h, const FockVector& psi) {
  check_onepart(h, psi);
  const RapidityGrid& g = psi.grid();
  FockVector out(psi.grid_ptr(), psi.nmax());
  out.truncation_loss = psi.truncation_loss;
  out.warnings = psi.warnings;
  for (int n = 1; n <= psi.nmax(); ++n) {
    const auto& src = psi.sector(n - 1);
    auto& dst = out.sector(n);
    const double pre = 1.0 / std::sqrt(static_cast<double>(n));
    for_each_combo(dst.size(), n, [&](std::size_t r, const int* c) {
      // rank of c without entry j: lower[j] + upper[j + 1]
      std::size_t lower[21], upper[21];
      lower[0] = 0;
      for (int i = 0; i < n; ++i) lower[i + 1] = lower[i] + binom(c[i], i + 1);
      upper[n] = 0;
      for (int i = n - 1; i >= 1; --i) upper[i] = upper[i + 1] + binom(c[i], i);
      cplx s = 0.0;
      for (int j = 0; j < n; ++j) {
        const cplx v = h[c[j]] * src[lower[j] + upper[j + 1]];
        s += (j % 2 == 0) ? v : -v;
      }
      dst[r] = pre * s;
    });
  }
  // dropped sector N+1: ||z^dagger(h) psi_N||^2 = ||h||^2 ||psi_N||^2 - ||z(conj h) psi_N||^2
  const int N = psi.nmax();
  {
    FockVector top(psi.grid_ptr(), N);
    top.sector(N) = psi.sector(N);
    double hn = 0.0;
    for (int i = 0; i < g.size(); ++i) hn += g.weight(i) * std::norm(h[i]);
    std::vector<cplx> hc(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) hc[i] = std::conj(h[i]);
    const double zn = N > 0 ? z_apply(hc, top).norm() : 0.0;
    const double psin = top.sector_norm(N);
    const double dropped = std::sqrt(std::max(0.0, hn * psin * psin - zn * zn));
    out.truncation_loss += dropped;
  }
  return out;
}

DenseKernel::DenseKernel(int m_, int n_, int G_) : m(m_), n(n_), G(G_) {
  if (m < 0 || n < 0 || G < 1) throw InvalidArgument("bad kernel dimensions");
  data.assign(rows() * cols(), cplx(0.0));
}

std::size_t DenseKernel::rows() const {
  std::size_t r = 1;
  for (int j = 0; j < m; ++j) r *= static_cast<std::size_t>(G);
  return r;
}

std::size_t DenseKernel::cols() const {
  std::size_t r = 1;
  for (int j = 0; j < n; ++j) r *= static_cast<std::size_t>(G);
  return r;
}

namespace {

void lin_to_multi(std::size_t lin, int k, int G, int* idx) {
  for (int j = k - 1; j >= 0; --j) {
    idx[j] = static_cast<int>(lin % G);
    lin /= G;
  }
}

std::size_t multi_to_lin(const int* idx, int k, int G) {
  std::size_t lin = 0;
  for (int j = 0; j < k; ++j) lin = lin * G + idx[j];
  return lin;
}

}  // namespace

FockVector monomial_apply(const DenseKernel& K, const FockVector& psi) {
  const RapidityGrid& g = psi.grid();
  const int G = g.size();
  if (K.G != G) throw InvalidArgument("kernel grid size does not match the Fock vector");
  const int m = K.m, n = K.n, N = psi.nmax();
  FockVector out(psi.grid_ptr(), N);
  out.truncation_loss = psi.truncation_loss;
  out.warnings = psi.warnings;
  const std::size_t rowsK = K.rows(), colsK = K.cols();
  for (int b = n; b <= N; ++b) {
    const int r = b - n;
    const int a = r + m;
    if (a > N) continue;  // truncated
    const std::size_t nXi = binom(G, r);
    // Y(theta, Xi) = sqrt(b!/r!) sum_eta w_eta K(theta, eta) chi(eta_n..eta_1, Xi)
    std::vector<cplx> Y(rowsK * nXi, cplx(0.0));
    const double pre_b = std::sqrt(factorial(b) / factorial(r));
    std::vector<int> eta(n), xi(std::max(r, 1)), full(b);
    for (std::size_t q = 0; q < nXi; ++q) {
      combo_unrank(q, r, xi.data());
      std::vector<cplx> phi(colsK);
      for (std::size_t col = 0; col < colsK; ++col) {
        lin_to_multi(col, n, G, eta.data());
        double w = 1.0;
        for (int j = 0; j < n; ++j) {
          full[j] = eta[n - 1 - j];
          w *= g.weight(eta[j]);
        }
        for (int j = 0; j < r; ++j) full[n + j] = xi[j];
        phi[col] = w * pre_b * psi.at(full);
      }
      for (std::size_t row = 0; row < rowsK; ++row) {
        cplx s = 0.0;
        for (std::size_t col = 0; col < colsK; ++col) s += K(row, col) * phi[col];
        Y[row * nXi + q] = s;
      }
    }
    // out_a(I) = sqrt(a!/r!) (r!/a!) sum over injective S in I of sign(S, I\S) Y(S; I\S)
    const double pre_a = std::sqrt(factorial(a) / factorial(r)) * factorial(r) / factorial(a);
    auto& dst = out.sector(a);
    std::vector<int> I(std::max(a, 1)), pos(std::max(m, 1)), perm(std::max(a, 1)), th(std::max(m, 1)),
        rest(std::max(r, 1));
    for (std::size_t R = 0; R < dst.size(); ++R) {
      combo_unrank(R, a, I.data());
      cplx s = 0.0;
      // enumerate injective position sequences of length m
      std::size_t total = 1;
      for (int j = 0; j < m; ++j) total *= static_cast<std::size_t>(a);
      for (std::size_t code = 0; code < total; ++code) {
        lin_to_multi(code, m, a, pos.data());
        bool injective = true;
        for (int i = 0; i < m && injective; ++i)
          for (int j = 0; j < i; ++j)
            if (pos[i] == pos[j]) injective = false;
        if (!injective) continue;
        int t = 0;
        for (int j = 0; j < m; ++j) perm[t++] = pos[j];
        int u = 0;
        for (int p = 0; p < a; ++p)
          if (std::find(pos.begin(), pos.begin() + m, p) == pos.begin() + m) {
            perm[t++] = p;
            rest[u++] = I[p];
          }
        const int sign = sort_with_sign(perm.data(), a);
        for (int j = 0; j < m; ++j) th[j] = I[pos[j]];
        const std::size_t row = multi_to_lin(th.data(), m, G);
        const std::size_t q = combo_rank(rest.data(), r);
        s += static_cast<double>(sign) * Y[row * nXi + q];
      }
      dst[R] += pre_a * s;
    }
  }
  return out;
}

FockVector phi_apply(const TestFunction2D& f, const FockVector& psi, const ModelParams& model) {
  const RapidityGrid& g = psi.grid();
  return z_dagger_apply(grid_transform(f, g, +1, model), psi) + z_apply(grid_transform(f, g, -1, model), psi);
}

FockVector omega_weight(const FockVector& psi, const Indicatrix& omega, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  const RapidityGrid& g = psi.grid();
  FockVector out = psi;
  for (int n = 0; n <= psi.nmax(); ++n) {
    auto& s = out.sector(n);
    std::vector<int> c(std::max(n, 1));
    combo_first(c.data(), n);
    std::size_t r = 0;
    do {
      double E = 0.0;
      for (int j = 0; j < n; ++j) E += std::cosh(g.node(c[j]));
      const double ex = sign * omega(E);
      if (ex > 700.0) throw AccuracyError("omega weight overflows double precision");
      s[r++] *= std::exp(ex);
    } while (n > 0 && combo_next(c.data(), n, g.size()));
  }
  return out;
}

FockVector poincare_transform(const FockVector& psi, const Point2& x, double lambda, const ModelParams& model) {
  const RapidityGrid& g = psi.grid();
  FockVector out(psi.grid_ptr(), psi.nmax());
  out.truncation_loss = psi.truncation_loss;
  out.warnings = psi.warnings;
  for (int n = 0; n <= psi.nmax(); ++n) {
    auto& dst = out.sector(n);
    std::size_t outside = 0;
    std::vector<int> c(std::max(n, 1)), first(std::max(n, 1)), J(std::max(n, 1));
    std::vector<std::array<double, 4>> w(std::max(n, 1));
    combo_first(c.data(), n);
    std::size_t r = 0;
    do {
      bool inside = true;
      for (int j = 0; j < n && inside; ++j)
        inside = g.cubic_row(g.node(c[j]) - lambda, first[j], w[j].data());
      cplx val = 0.0;
      if (!inside) {
        ++outside;
      } else if (lambda == 0.0) {
        val = psi.sector(n)[r];
      } else {
        std::size_t total = 1;
        for (int j = 0; j < n; ++j) total *= 4;
        for (std::size_t code = 0; code < total; ++code) {
          std::size_t rem = code;
          double wt = 1.0;
          for (int j = 0; j < n; ++j) {
            const int a = static_cast<int>(rem % 4);
            rem /= 4;
            J[j] = first[j] + a;
            wt *= w[j][a];
          }
          if (wt == 0.0) continue;
          val += wt * psi.at(std::vector<int>(J.begin(), J.begin() + n));
        }
      }
      double phase = 0.0;
      for (int j = 0; j < n; ++j) {
        const double th = g.node(c[j]);
        phase += model.mu * (std::cosh(th) * x[0] - std::sinh(th) * x[1]);
      }
      dst[r] = std::exp(kI * phase) * val;
      ++r;
    } while (n > 0 && combo_next(c.data(), n, g.size()));
    if (outside > 0)
      out.warnings.push_back("poincare_transform: " + std::to_string(outside) + " points of sector " +
                             std::to_string(n) + " left the grid cutoff and were set to zero");
  }
  return out;
}

FockVector reflect(const FockVector& psi) {
  FockVector out = psi;
  for (int n = 0; n <= psi.nmax(); ++n) {
    const double s = ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    for (auto& z : out.sector(n)) z = s * std::conj(z);
  }
  return out;
}

double energy_expectation(const FockVector& psi, const ModelParams& model) {
  const RapidityGrid& g = psi.grid();
  double total = 0.0;
  for (int n = 1; n <= psi.nmax(); ++n) {
    const auto& s = psi.sector(n);
    std::vector<int> c(n);
    combo_first(c.data(), n);
    std::size_t r = 0;
    double acc = 0.0;
    do {
      double E = 0.0;
      for (int j = 0; j < n; ++j) E += std::cosh(g.node(c[j]));
      acc += tuple_weight(g, c.data(), n) * model.mu * E * std::norm(s[r++]);
    } while (combo_next(c.data(), n, g.size()));
    total += factorial(n) * acc;
  }
  return total;
}

FockVector gaussian_state(GridPtr grid, int nmax, int n, double center, double width, std::mt19937_64& rng) {
  if (n < 0 || n > nmax) throw InvalidArgument("sector outside truncation");
  if (!(width > 0.0)) throw InvalidArgument("wavepacket width must be positive");
  std::normal_distribution<double> nd(0.0, 1.0);
  const int nb = n + 2;
  // orbital a = sum_b coef[a][b] * hermite_b((theta - center)/width) * gaussian
  std::vector<std::vector<cplx>> coef(n, std::vector<cplx>(nb));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < nb; ++b) {
      const double re = nd(rng);
      coef[a][b] = cplx(re, nd(rng)) * ((b == a) ? 2.0 : 0.5);
    }
  auto orbital = [&](int a, double th) {
    const double u = (th - center) / width;
    double h0 = 1.0, h1 = 2.0 * u;
    cplx s = coef[a][0] * h0;
    if (nb > 1) s += coef[a][1] * h1;
    for (int b = 2; b < nb; ++b) {
      const double h2 = 2.0 * u * h1 - 2.0 * (b - 1) * h0;
      h0 = h1;
      h1 = h2;
      s += coef[a][b] * h2 / std::sqrt(std::pow(2.0, b) * factorial(b));
    }
    return s * std::exp(-0.5 * u * u);
  };
  FockVector v = FockVector::from_function(grid, nmax, n, [&](const std::vector<double>& th) -> cplx {
    if (n == 0) return 1.0;
    Eigen::MatrixXcd M(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) M(a, b) = orbital(a, th[b]);
    return M.determinant();
  });
  const double nv = v.norm();
  if (nv > 0.0) v = v * cplx(1.0 / nv);
  return v;
}

}  // namespace isingops
