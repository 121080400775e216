#include "isingops/boundary_grid.hpp"

#include <array>
#include <cmath>

#include "isingops/combinatorics.hpp"
#include "isingops/pfaffian.hpp"

namespace isingops {

namespace {
constexpr int kMaxSlots = 24;
constexpr int kMaxDim = 24;
}  // namespace

struct GridKernel::Partial {
  double c = 0.0;
  double s = 0.0;
  std::array<cplx, kMaxSlots> ps{};
};

GridKernel::GridKernel(const CoefficientFamily& fam, int m, int n, GridPtr grid)
    : fam_(fam), prep_(fam.P), grid_(std::move(grid)), m_(m), n_(n) {
  if (!grid_) throw InvalidArgument("grid kernel needs a grid");
  if (m < 0 || n < 0) throw InvalidArgument("sector counts must be nonnegative");
  if (fam.g.kind() == TestFunction2D::Kind::RadialBump)
    throw InvalidArgument("grid kernels need a spline localizing function (closed-form transform)");
  if (static_cast<int>(prep_.powers().size()) > kMaxSlots) throw ResourceLimit("polynomial has too many distinct powers");
  if (m + n + 1 > kMaxDim) throw ResourceLimit("kernel order too large");
  G_ = grid_->size();
  zero_ = !fam.nonzero_in(m + n) || fam.g.kind() == TestFunction2D::Kind::Zero;
  constant_ = fam.constant(m + n);
  if (!fam.is_odd()) constant_ *= std::pow(2.0, fam.k) * factorial(fam.k);

  const auto& t = grid_->nodes();
  ch_.resize(G_);
  sh_.resize(G_);
  for (int i = 0; i < G_; ++i) {
    ch_[i] = std::cosh(t[i]);
    sh_[i] = std::sinh(t[i]);
  }
  const auto& ks = prep_.powers();
  xpow_.resize(ks.size() * G_);
  for (std::size_t s = 0; s < ks.size(); ++s)
    for (int i = 0; i < G_; ++i) xpow_[s * G_ + i] = std::exp(ks[s] * t[i]);

  inner_.resize(static_cast<std::size_t>(G_) * G_);
  cross_.resize(static_cast<std::size_t>(G_) * G_);
  const Eigen::MatrixXd& C = grid_->pv_coth_matrix();
  for (int i = 0; i < G_; ++i)
    for (int j = 0; j < G_; ++j) {
      const double d = 0.5 * (t[i] - t[j]);
      if (fam.is_odd()) {
        inner_[i * G_ + j] = std::tanh(d);
        cplx b = C(j, i) / grid_->weight(i);
        if (i == j) b -= 2.0 * kPi * kI / grid_->weight(i);
        cross_[i * G_ + j] = b;
      } else {
        inner_[i * G_ + j] = std::sinh(d);
        cross_[i * G_ + j] = -kI * std::cosh(d);
      }
    }
}

std::size_t GridKernel::rows() const { return binom(G_, m_); }
std::size_t GridKernel::cols() const { return binom(G_, n_); }

void GridKernel::start(Partial& p, const int* idx, int count, bool eta) const {
  p.c = 0.0;
  p.s = 0.0;
  const auto& ks = prep_.powers();
  for (std::size_t s = 0; s < ks.size(); ++s) p.ps[s] = 0.0;
  for (int a = 0; a < count; ++a) {
    const int i = idx[a];
    p.c += ch_[i];
    p.s += sh_[i];
    for (std::size_t s = 0; s < ks.size(); ++s) {
      const cplx v = xpow_[s * G_ + i];
      p.ps[s] += (eta && (ks[s] % 2 != 0)) ? -v : v;
    }
  }
}

cplx GridKernel::finish(const Partial& pi, const Partial& pj, const int* I, const int* J, cplx* A) const {
  const double mu = fam_.model.mu;
  const cplx gt = fam_.g.transform(mu * (pi.c - pj.c), mu * (pi.s - pj.s));
  std::array<cplx, kMaxSlots> ps;
  const std::size_t ns = prep_.powers().size();
  for (std::size_t s = 0; s < ns; ++s) ps[s] = pi.ps[s] + pj.ps[s];
  const cplx Pv = prep_.eval_powersums(ps.data());
  const int N = m_ + n_;
  const bool border = fam_.is_odd() && (N % 2 == 1);
  const int D = N + (border ? 1 : 0);
  auto idx = [&](int a) { return a < m_ ? I[a] : J[a - m_]; };
  for (int a = 0; a < D; ++a) A[a * D + a] = 0.0;
  for (int a = 0; a < N; ++a)
    for (int b = a + 1; b < N; ++b) {
      cplx v;
      if (b < m_ || a >= m_)
        v = inner_[idx(a) * G_ + idx(b)];
      else
        v = cross_[idx(a) * G_ + idx(b)];
      A[a * D + b] = v;
      A[b * D + a] = -v;
    }
  if (border)
    for (int a = 0; a < N; ++a) {
      A[a * D + N] = 1.0;
      A[N * D + a] = -1.0;
    }
  const cplx pf = D == 0 ? cplx(1.0) : pfaffian_inplace(A, D);
  return constant_ * gt * Pv * pf;
}

cplx GridKernel::entry(const int* I, const int* J) const {
  if (zero_) return 0.0;
  Partial pi, pj;
  start(pi, I, m_, false);
  start(pj, J, n_, true);
  std::array<cplx, kMaxDim * kMaxDim> buf;
  return finish(pi, pj, I, J, buf.data());
}

void GridKernel::fill_row(const int* I, cplx* out) const {
  const std::size_t nc = cols();
  if (zero_) {
    std::fill(out, out + nc, cplx(0.0));
    return;
  }
  Partial pi, pj;
  start(pi, I, m_, false);
  std::array<cplx, kMaxDim * kMaxDim> buf;
  std::array<int, kMaxDim> J;
  combo_first(J.data(), n_);
  std::size_t r = 0;
  do {
    start(pj, J.data(), n_, true);
    out[r++] = finish(pi, pj, I, J.data(), buf.data());
  } while (n_ > 0 && combo_next(J.data(), n_, G_));
}

void GridKernel::fill_col(const int* J, cplx* out) const {
  const std::size_t nr = rows();
  if (zero_) {
    std::fill(out, out + nr, cplx(0.0));
    return;
  }
  Partial pi, pj;
  start(pj, J, n_, true);
  std::array<cplx, kMaxDim * kMaxDim> buf;
  std::array<int, kMaxDim> I;
  combo_first(I.data(), m_);
  std::size_t r = 0;
  do {
    start(pi, I.data(), m_, false);
    out[r++] = finish(pi, pj, I.data(), J, buf.data());
  } while (m_ > 0 && combo_next(I.data(), m_, G_));
}

}  // namespace isingops
