#include "isingops/formfactors.hpp"

#include <algorithm>
#include <cmath>

#include "isingops/combinatorics.hpp"

namespace isingops {

CoefficientFamily CoefficientFamily::even(int k, SymLaurent P, TestFunction2D g, ModelParams model) {
  if (k < 0) throw InvalidArgument("even family needs k >= 0");
  model.validate();
  CoefficientFamily f;
  f.variant = Variant::Even;
  f.k = k;
  f.P = std::move(P);
  f.g = std::move(g);
  f.model = model;
  return f;
}

CoefficientFamily CoefficientFamily::odd(SymLaurent P, TestFunction2D g, ModelParams model) {
  if (!is_ising_invariant(P))
    throw InvalidArgument("odd family needs P built from odd power sums (P(y, -y, x) = P(x))");
  model.validate();
  CoefficientFamily f;
  f.variant = Variant::Odd;
  f.P = std::move(P);
  f.g = std::move(g);
  f.model = model;
  return f;
}

bool CoefficientFamily::nonzero_in(int j) const {
  if (j < 0) return false;
  return is_odd() ? (j % 2 == 1) : (j == 2 * k);
}

cplx CoefficientFamily::constant(int j) const {
  if (!nonzero_in(j)) return 0.0;
  if (!is_odd()) return 1.0;
  return std::pow(2.0 * kPi * kI, -static_cast<double>((j - 1) / 2));
}

double CoefficientFamily::localization_radius() const {
  const DoubleCone O = g.support();
  return std::abs(O.center[0]) + std::abs(O.center[1]) + O.radius;
}

CoefficientFamily CoefficientFamily::translated(const Point2& a) const {
  CoefficientFamily f = *this;
  f.g = g.translated(a);
  return f;
}

nlohmann::json CoefficientFamily::to_json() const {
  nlohmann::json j;
  j["variant"] = is_odd() ? "odd" : "even";
  if (!is_odd()) j["k"] = k;
  j["P"] = P.to_json();
  j["g"] = g.to_json();
  j["mu"] = model.mu;
  return j;
}

CoefficientFamily CoefficientFamily::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("family must be a JSON object");
  const std::string v = j.value("variant", "");
  ModelParams model;
  model.mu = j.value("mu", 1.0);
  SymLaurent P = j.contains("P") ? SymLaurent::from_json(j.at("P")) : SymLaurent::constant(1.0);
  if (!j.contains("g")) throw InvalidArgument("family needs a test function g");
  TestFunction2D g = TestFunction2D::from_json(j.at("g"));
  if (v == "even") return even(j.value("k", 1), P, g, model);
  if (v == "odd") return odd(P, g, model);
  throw InvalidArgument("family variant must be \"even\" or \"odd\"");
}

cplx gtilde_at(const CoefficientFamily& fam, const std::vector<cplx>& zeta) {
  cplx p0 = 0.0, p1 = 0.0;
  for (const cplx& z : zeta) {
    p0 += std::cosh(z);
    p1 += std::sinh(z);
  }
  return fam.g.transform(fam.model.mu * p0, fam.model.mu * p1);
}

cplx F_eval(const CoefficientFamily& fam, const std::vector<cplx>& zeta) {
  const int j = static_cast<int>(zeta.size());
  if (!fam.nonzero_in(j)) return 0.0;
  std::vector<cplx> x(j);
  for (int i = 0; i < j; ++i) x[i] = std::exp(zeta[i]);
  const cplx M = fam.is_odd() ? modd_product(zeta) : (j == 0 ? cplx(1.0) : meven_pfaffian(zeta));
  if (M == 0.0) return 0.0;
  return fam.constant(j) * gtilde_at(fam, zeta) * eval(fam.P, x) * M;
}

Residual fd2_check(const CoefficientFamily& fam, const std::vector<cplx>& zeta, int j) {
  if (j < 0 || j + 1 >= static_cast<int>(zeta.size())) throw InvalidArgument("transposition index out of range");
  std::vector<cplx> sw = zeta;
  std::swap(sw[j], sw[j + 1]);
  const cplx a = F_eval(fam, zeta), b = F_eval(fam, sw);
  return {std::abs(a + b), std::max(std::abs(a), std::abs(b))};
}

Residual fd3_check(const CoefficientFamily& fam, const std::vector<cplx>& zeta) {
  const int k = static_cast<int>(zeta.size());
  if (k == 0) return {0.0, std::abs(F_eval(fam, zeta))};
  std::vector<cplx> shifted = zeta;
  shifted[k - 1] += 2.0 * kPi * kI;
  std::vector<cplx> rotated;
  rotated.push_back(zeta[k - 1]);
  for (int i = 0; i + 1 < k; ++i) rotated.push_back(zeta[i]);
  const cplx a = F_eval(fam, shifted), b = F_eval(fam, rotated);
  return {std::abs(a - b), std::max(std::abs(a), std::abs(b))};
}

ResidueCheck fd4_check(const CoefficientFamily& fam, cplx zeta1, const std::vector<cplx>& tail) {
  const int k = static_cast<int>(tail.size()) + 2;
  auto F_at = [&](cplx zeta2) {
    std::vector<cplx> z;
    z.push_back(zeta1);
    z.push_back(zeta2);
    z.insert(z.end(), tail.begin(), tail.end());
    return F_eval(fam, z);
  };
  const cplx pole = zeta1 + kI * kPi;
  std::vector<double> h{1e-2, 1e-3, 1e-4};
  std::vector<cplx> v;
  double scale = 0.0;
  for (double e : h) {
    v.push_back(e * F_at(pole + e));
    scale = std::max(scale, std::abs(v.back()));
  }
  ResidueCheck rc;
  rc.numeric = richardson_to_zero(h, v);
  const int npts = 8;
  const double rho = 1e-3;
  cplx acc = 0.0;
  for (int l = 0; l < npts; ++l) {
    const cplx d = rho * std::exp(kI * (2.0 * kPi * l / npts));
    acc += d * F_at(pole + d);
  }
  rc.contour = acc / static_cast<double>(npts);
  // (1 - prod_j S(zeta_1 - zeta_j)) with S = -1 over k factors (j = 1 included)
  const double bracket = 1.0 - ((k % 2 == 0) ? 1.0 : -1.0);
  rc.target = (bracket == 0.0 || !fam.nonzero_in(k)) ? cplx(0.0) : -bracket / (2.0 * kPi * kI) * F_eval(fam, tail);
  rc.residual = std::abs(rc.numeric - rc.target);
  rc.scale = std::max({std::abs(rc.target), std::abs(rc.numeric), scale});
  return rc;
}

Residual fd1_check(const CoefficientFamily& fam, const std::vector<cplx>& zeta, int j, double radius, int nodes) {
  if (j < 0 || j >= static_cast<int>(zeta.size())) throw InvalidArgument("variable index out of range");
  if (!(radius > 0.0) || nodes < 4) throw InvalidArgument("bad contour parameters");
  const cplx center = F_eval(fam, zeta);
  cplx mean = 0.0;
  double scale = std::abs(center);
  std::vector<cplx> z = zeta;
  for (int l = 0; l < nodes; ++l) {
    z[j] = zeta[j] + radius * std::exp(kI * (2.0 * kPi * (l + 0.5) / nodes));
    const cplx v = F_eval(fam, z);
    mean += v;
    scale = std::max(scale, std::abs(v));
  }
  mean /= static_cast<double>(nodes);
  return {std::abs(center - mean), scale};
}

double tube_boundary_distance(const std::vector<double>& lambda) {
  if (lambda.empty()) return kPi;
  double d = std::min(lambda.front(), kPi - lambda.back());
  for (std::size_t i = 1; i < lambda.size(); ++i) d = std::min(d, (lambda[i] - lambda[i - 1]) / std::sqrt(2.0));
  return d;
}

EnvelopeFit fd6_check(const CoefficientFamily& fam, int k, const Indicatrix& omega, double c_prime, int samples,
                      std::mt19937_64& rng) {
  if (k < 1) throw InvalidArgument("envelope check needs k >= 1");
  if (samples < 2) throw InvalidArgument("envelope check needs at least two samples");
  EnvelopeFit fit;
  fit.k = k;
  fit.c_prime = c_prime;
  fit.r = fam.localization_radius();
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double mu = fam.model.mu;
  auto ratio = [&](const std::vector<double>& re, std::vector<double> lam) {
    std::sort(lam.begin(), lam.end());
    const double d = tube_boundary_distance(lam);
    if (!(d > 1e-6)) return -1.0;
    std::vector<cplx> z(k);
    for (int i = 0; i < k; ++i) z[i] = cplx(re[i], lam[i]);
    double e = std::pow(d, -0.5 * k);
    for (const cplx& zj : z)
      e *= std::exp(mu * fit.r * std::abs(std::sinh(zj).imag()) + c_prime * omega(std::cosh(zj.real())));
    try {
      return std::abs(F_eval(fam, z)) / e;
    } catch (const SingularityError&) {
      return -1.0;
    }
  };
  // bulk, boundary-approaching (outer imaginary parts toward 0 and pi, coincident real parts)
  // and large-real-part points, drawn alike for fitting and validation
  auto draw = [&](int s, std::vector<double>& re, std::vector<double>& lam) {
    re.assign(k, 0.0);
    lam.assign(k, 0.0);
    for (;;) {
      for (auto& l : lam) l = kPi * U(rng);
      std::sort(lam.begin(), lam.end());
      if (tube_boundary_distance(lam) > 0.1) break;
    }
    if (s % 3 == 1) {
      const double delta = std::pow(10.0, -1.0 - 3.0 * U(rng));
      for (auto& x : re) x = -1.5 + 3.0 * U(rng);
      lam.front() = delta;
      if (k > 1) {
        lam.back() = kPi - delta;
        re.back() = re.front();
      }
      std::sort(lam.begin(), lam.end());
    } else {
      const double R = s % 3 == 0 ? 1.5 : 5.0;
      for (auto& x : re) x = -R + 2.0 * R * U(rng);
    }
  };
  const int nfit = samples / 2;
  std::vector<std::pair<double, std::vector<double>>> best;  // (ratio, re ++ lam)
  for (int s = 0; s < nfit; ++s) {
    std::vector<double> re, lam;
    draw(s, re, lam);
    const double q = ratio(re, lam);
    std::vector<double> x = re;
    x.insert(x.end(), lam.begin(), lam.end());
    best.emplace_back(q, x);
  }
  std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  // pattern-search ascent from the largest fit ratios toward the supremum
  double cmax = best.empty() ? 0.0 : std::max(best.front().first, 0.0);
  const int starts = std::min<int>(4, static_cast<int>(best.size()));
  for (int st = 0; st < starts; ++st) {
    std::vector<double> x = best[st].second;
    double fx = best[st].first;
    if (fx <= 0.0) continue;
    auto value = [&](const std::vector<double>& y) {
      for (int i = 0; i < k; ++i)
        if (std::abs(y[i]) > 5.0 || y[k + i] <= 0.0 || y[k + i] >= kPi) return -1.0;
      return ratio(std::vector<double>(y.begin(), y.begin() + k), std::vector<double>(y.begin() + k, y.end()));
    };
    for (double step = 0.25; step > 1e-3; step *= 0.5) {
      bool moved = true;
      for (int it = 0; moved && it < 200; ++it) {
        moved = false;
        for (int i = 0; i < 2 * k; ++i)
          for (double sgn : {1.0, -1.0}) {
            std::vector<double> y = x;
            y[i] += sgn * (i < k ? step : 0.4 * step);
            const double fy = value(y);
            if (fy > fx) {
              x = y;
              fx = fy;
              moved = true;
            }
          }
      }
    }
    cmax = std::max(cmax, fx);
  }
  fit.c = kEnvelopeMargin * cmax;
  fit.fit_samples = nfit;
  double worst = 0.0;
  const int nval = samples - nfit;
  for (int s = 0; s < nval; ++s) {
    std::vector<double> re, lam;
    draw(s, re, lam);
    const double q = ratio(re, lam);
    worst = std::max(worst, q);
    if (q > fit.c) ++fit.violations;
  }
  fit.validation_samples = nval;
  fit.max_validation_ratio = fit.c > 0.0 ? worst / fit.c : 0.0;
  return fit;
}

BoundaryKernel::BoundaryKernel(const CoefficientFamily& fam, int m, int n) : fam_(fam), m_(m), n_(n) {
  if (m < 0 || n < 0) throw InvalidArgument("sector counts must be nonnegative");
  zero_ = !fam.nonzero_in(m + n);
  if (zero_ || !fam.is_odd()) return;
  terms_ = boundary_terms(m, n);
  // every nonempty subset of a term's cross pairs is a delta term; collect the distinct ones
  std::vector<std::vector<std::pair<int, int>>> seen;
  for (const auto& t : terms_) {
    if (t.sign == 0) continue;
    const int kk = t.k();
    for (int mask = 1; mask < (1 << kk); ++mask) {
      std::vector<std::pair<int, int>> S;
      for (int b = 0; b < kk; ++b)
        if (mask & (1 << b)) S.emplace_back(t.cross[b].first, t.cross[b].second - m);
      if (std::find(seen.begin(), seen.end(), S) == seen.end()) seen.push_back(S);
    }
  }
  for (auto& S : seen) deltas_.push_back({S});
}

cplx BoundaryKernel::prefactor(const std::vector<double>& theta, const std::vector<double>& eta) const {
  std::vector<cplx> x;
  double p0 = 0.0, p1 = 0.0;
  for (double t : theta) {
    x.emplace_back(std::exp(t));
    p0 += std::cosh(t);
    p1 += std::sinh(t);
  }
  for (double e : eta) {
    x.emplace_back(-std::exp(e));
    p0 -= std::cosh(e);
    p1 -= std::sinh(e);
  }
  const double mu = fam_.model.mu;
  return fam_.constant(m_ + n_) * fam_.g.transform(mu * p0, mu * p1) * eval(fam_.P, x);
}

cplx BoundaryKernel::pv(const std::vector<double>& theta, const std::vector<double>& eta) const {
  if (zero_) return 0.0;
  std::vector<cplx> z(theta.begin(), theta.end());
  for (double e : eta) z.emplace_back(e, kPi);
  return F_eval(fam_, z);
}

cplx BoundaryKernel::regularized(const std::vector<double>& theta, const std::vector<double>& eta, double eps) const {
  if (zero_) return 0.0;
  std::vector<cplx> z;
  for (double t : theta) z.emplace_back(t, eps);
  for (double e : eta) z.emplace_back(e, kPi - eps);
  return F_eval(fam_, z);
}

namespace {

cplx half_coth(double x) { return 1.0 / std::tanh(0.5 * x); }

cplx modd_real(const std::vector<double>& v, const std::vector<int>& idx) {
  cplx p = 1.0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j) p *= std::tanh(0.5 * (v[idx[i]] - v[idx[j]]));
  return p;
}

}  // namespace

cplx BoundaryKernel::pv_from_terms(const std::vector<double>& theta, const std::vector<double>& eta) const {
  if (zero_) return 0.0;
  if (!fam_.is_odd()) return pv(theta, eta);
  std::vector<double> all(theta.begin(), theta.end());
  all.insert(all.end(), eta.begin(), eta.end());
  cplx s = 0.0;
  for (const auto& t : terms_) {
    if (t.sign == 0) continue;
    cplx term = static_cast<double>(t.sign);
    for (const auto& [l, r] : t.cross) term *= half_coth(all[l] - all[r]);
    term *= modd_real(all, t.theta_hat) * modd_real(all, t.eta_hat);
    s += term;
  }
  return prefactor(theta, eta) * s;
}

cplx BoundaryKernel::delta_value(const DeltaTerm& S, const std::vector<double>& theta,
                                 const std::vector<double>& eta) const {
  if (zero_ || !fam_.is_odd()) return 0.0;
  std::vector<double> all(theta.begin(), theta.end());
  all.insert(all.end(), eta.begin(), eta.end());
  cplx s = 0.0;
  for (const auto& t : terms_) {
    if (t.sign == 0) continue;
    bool contains = true;
    for (const auto& [l, r] : S.pairs)
      contains = contains && std::find(t.cross.begin(), t.cross.end(), std::make_pair(l, r + m_)) != t.cross.end();
    if (!contains) continue;
    cplx term = static_cast<double>(t.sign);
    for (const auto& [l, r] : t.cross)
      if (std::find(S.pairs.begin(), S.pairs.end(), std::make_pair(l, r - m_)) == S.pairs.end())
        term *= half_coth(all[l] - all[r]);
    term *= modd_real(all, t.theta_hat) * modd_real(all, t.eta_hat);
    s += term;
  }
  const cplx w = std::pow(-2.0 * kPi * kI, static_cast<double>(S.pairs.size()));
  return w * prefactor(theta, eta) * s;
}

BoundaryKernel boundary_kernel(const CoefficientFamily& fam, int m, int n) { return BoundaryKernel(fam, m, n); }

FockVector vacuum_components(const CoefficientFamily& fam, int m, GridPtr grid, int nmax) {
  if (m < 0 || m > nmax) throw InvalidArgument("sector outside truncation");
  if (!fam.nonzero_in(m)) return FockVector(std::move(grid), nmax);
  const double norm = 1.0 / std::sqrt(factorial(m));
  return FockVector::from_function(std::move(grid), nmax, m, [&](const std::vector<double>& th) {
    std::vector<cplx> z(th.begin(), th.end());
    return norm * F_eval(fam, z);
  });
}

SymLaurent energy_density_polynomial(double mu) {
  SymLaurent Q;
  Q.add_term({1, 1}, 0.5);
  Q.add_term({2}, -0.5);
  Q.add_term({-1, -1}, 0.5);
  Q.add_term({-2}, -0.5);
  Q.add_term({}, 2.0);
  return Q * (-kI * mu * mu / 8.0);
}

cplx edensity_stated(const std::vector<cplx>& zeta, const TestFunction2D& g, const ModelParams& model) {
  if (zeta.size() != 2) throw InvalidArgument("energy density is a two-variable function");
  const cplx s = std::sinh(0.5 * (zeta[0] + zeta[1]));
  const cplx p0 = model.mu * (std::cosh(zeta[0]) + std::cosh(zeta[1]));
  const cplx p1 = model.mu * (std::sinh(zeta[0]) + std::sinh(zeta[1]));
  return -kI * model.mu * model.mu * std::sinh(0.5 * (zeta[0] - zeta[1])) * s * s * g.transform(p0, p1);
}

cplx edensity_from_polynomial(const std::vector<cplx>& zeta, const TestFunction2D& g, const ModelParams& model) {
  const auto fam = CoefficientFamily::even(1, energy_density_polynomial(model.mu), g, model);
  return F_eval(fam, zeta);
}

}  // namespace isingops
