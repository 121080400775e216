#include "isingops/bookkeeping.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace isingops {

nlohmann::json BookkeepingResult::to_json() const {
  auto c = [](cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
  nlohmann::json reg = nlohmann::json::array();
  for (std::size_t i = 0; i < eps.size(); ++i) reg.push_back({{"eps", eps[i]}, {"value", c(regularized[i])}});
  return {{"m", m},           {"n", n},           {"split", c(split)},
          {"pv_part", c(pv_part)}, {"delta_part", c(delta_part)}, {"extrapolated", c(extrapolated)},
          {"residual", residual}, {"scale", scale}, {"regularized", reg}};
}

namespace {

// Positive half of a symmetric graded composite Gauss-Legendre rule on [-U, U].
void graded_half_rule(double c, double U, int per_panel, std::vector<double>& x, std::vector<double>& w) {
  std::vector<double> gx, gw;
  gauss_legendre(per_panel, gx, gw);
  x.clear();
  w.clear();
  for (int i = 0; i < per_panel; ++i)
    if (gx[i] > 0.0) {
      x.push_back(c * gx[i]);
      w.push_back(c * gw[i]);
    }
  for (double a = c; a < U; a *= 2.0) {
    const double b = std::min(2.0 * a, U), h = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < per_panel; ++i) {
      x.push_back(mid + h * gx[i]);
      w.push_back(h * gw[i]);
    }
  }
}

double tanh_product(const std::vector<double>& v, const std::vector<int>& idx, int offset) {
  double p = 1.0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      p *= std::tanh(0.5 * (v[idx[i] - offset] - v[idx[j] - offset]));
  return p;
}

}  // namespace

BookkeepingResult bookkeeping_check(const BoundaryKernel& K, const std::function<double(int, double)>& left,
                                    const std::function<double(int, double)>& right, const BookkeepingConfig& cfg) {
  if (cfg.eps.size() < 2) throw InvalidArgument("need at least two regularization parameters");
  if (cfg.panel_nodes < 2 || cfg.panel_nodes % 2 != 0) throw InvalidArgument("panel node count must be even");
  if (cfg.outer_nodes < 1) throw InvalidArgument("outer node count must be positive");
  const int m = K.m(), n = K.n();
  BookkeepingResult res;
  res.m = m;
  res.n = n;
  res.eps = cfg.eps;
  const int ne = static_cast<int>(cfg.eps.size());
  res.regularized.assign(ne, 0.0);
  if (K.is_zero() || K.terms().empty()) return res;

  const double eps_min = *std::min_element(cfg.eps.begin(), cfg.eps.end());
  std::vector<double> uh, wh;
  graded_half_rule(2.0 * eps_min, cfg.u_cutoff, cfg.panel_nodes, uh, wh);
  const int P = static_cast<int>(uh.size());
  // per-dimension u nodes: index 0 is u = 0, then +uh, then -uh
  const int nu = 2 * P + 1;
  std::vector<double> un(nu, 0.0), uw(nu, 0.0), ucoth(nu, 0.0);
  std::vector<cplx> ureg(static_cast<std::size_t>(ne) * nu, 0.0);
  for (int p = 0; p < P; ++p) {
    un[1 + p] = uh[p];
    un[1 + P + p] = -uh[p];
    uw[1 + p] = uw[1 + P + p] = wh[p];
  }
  for (int i = 1; i < nu; ++i) {
    ucoth[i] = 1.0 / std::tanh(0.5 * un[i]);
    for (int e = 0; e < ne; ++e) ureg[e * nu + i] = 1.0 / std::tanh(0.5 * cplx(un[i], 2.0 * cfg.eps[e]));
  }
  std::vector<double> ox, ow;
  gauss_legendre(cfg.outer_nodes, ox, ow);
  for (int i = 0; i < cfg.outer_nodes; ++i) {
    ox[i] *= cfg.outer_cutoff;
    ow[i] *= cfg.outer_cutoff;
  }
  const cplx two_pi_i(0.0, -2.0 * kPi);  // weight of each delta

  for (const auto& t : K.terms()) {
    const int k = t.k();
    if (t.sign == 0 || k == 0) continue;
    const int nth = static_cast<int>(t.theta_hat.size()), neh = static_cast<int>(t.eta_hat.size());
    const int dout = k + nth + neh;
    long long nouter = 1, ninner = 1;
    for (int d = 0; d < dout; ++d) nouter *= cfg.outer_nodes;
    for (int d = 0; d < k; ++d) ninner *= nu;
    const int nsub = 1 << k;

    const int nthreads = cfg.parallel ? omp_get_max_threads() : 1;
    std::vector<std::vector<cplx>> part(nthreads, std::vector<cplx>(nsub, 0.0));
    std::vector<std::vector<cplx>> reg(nthreads, std::vector<cplx>(ne, 0.0));
#pragma omp parallel num_threads(nthreads) if (cfg.parallel)
    {
      const int tid = omp_get_thread_num();
      std::vector<double> theta(m), eta(n);
      std::vector<int> oi(dout), ui(k);
#pragma omp for schedule(static)
      for (long long o = 0; o < nouter; ++o) {
        long long rem = o;
        double wout = static_cast<double>(t.sign);
        for (int d = 0; d < dout; ++d) {
          oi[d] = static_cast<int>(rem % cfg.outer_nodes);
          rem /= cfg.outer_nodes;
          wout *= ow[oi[d]];
        }
        for (int j = 0; j < k; ++j) {
          const double v = ox[oi[j]];
          eta[t.cross[j].second - m] = v;
          wout *= right(t.cross[j].second - m, v);
        }
        for (int j = 0; j < nth; ++j) {
          const double th = ox[oi[k + j]];
          theta[t.theta_hat[j]] = th;
          wout *= left(t.theta_hat[j], th);
        }
        for (int j = 0; j < neh; ++j) {
          const double e = ox[oi[k + nth + j]];
          eta[t.eta_hat[j] - m] = e;
          wout *= right(t.eta_hat[j] - m, e);
        }
        wout *= tanh_product(theta, t.theta_hat, 0) * tanh_product(eta, t.eta_hat, m);
        if (wout == 0.0) continue;
        for (long long q = 0; q < ninner; ++q) {
          long long r2 = q;
          int mask = 0;
          double wu = 1.0, cpv = 1.0;
          for (int j = 0; j < k; ++j) {
            ui[j] = static_cast<int>(r2 % nu);
            r2 /= nu;
            if (ui[j] == 0) {
              mask |= 1 << j;
            } else {
              wu *= uw[ui[j]];
              cpv *= ucoth[ui[j]];
            }
          }
          double arr = 1.0;
          for (int j = 0; j < k; ++j) {
            const double th = eta[t.cross[j].second - m] + un[ui[j]];
            theta[t.cross[j].first] = th;
            arr *= left(t.cross[j].first, th);
          }
          if (arr == 0.0) continue;
          const cplx phi = wout * arr * K.prefactor(theta, eta);
          part[tid][mask] += phi * (wu * cpv);
          if (mask == 0)
            for (int e = 0; e < ne; ++e) {
              cplx c = wu;
              for (int j = 0; j < k; ++j) c *= ureg[e * nu + ui[j]];
              reg[tid][e] += phi * c;
            }
        }
      }
    }
    for (int s = 0; s < nsub; ++s) {
      cplx tot = 0.0;
      for (int th = 0; th < nthreads; ++th) tot += part[th][s];
      tot *= std::pow(two_pi_i, static_cast<double>(__builtin_popcount(s)));
      if (s == 0)
        res.pv_part += tot;
      else
        res.delta_part += tot;
      res.scale += std::abs(tot);
    }
    for (int e = 0; e < ne; ++e)
      for (int th = 0; th < nthreads; ++th) res.regularized[e] += reg[th][e];
  }
  res.split = res.pv_part + res.delta_part;
  res.extrapolated = richardson_to_zero(res.eps, res.regularized);
  res.residual = std::abs(res.split - res.extrapolated);
  return res;
}

}  // namespace isingops
