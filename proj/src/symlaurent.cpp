#include "isingops/symlaurent.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace isingops {

SymLaurent SymLaurent::constant(cplx c) {
  SymLaurent P;
  P.add_term({}, c);
  return P;
}

SymLaurent SymLaurent::power_sum(int k) { return monomial({k}, 1.0); }

SymLaurent SymLaurent::monomial(Gens gens, cplx c) {
  SymLaurent P;
  P.add_term(std::move(gens), c);
  return P;
}

void SymLaurent::add_term(Gens gens, cplx c) {
  for (int k : gens)
    if (k == 0) throw InvalidArgument("power-sum generator index must be nonzero");
  std::sort(gens.begin(), gens.end());
  auto it = terms_.find(gens);
  if (it == terms_.end()) {
    if (c != 0.0) terms_.emplace(std::move(gens), c);
    return;
  }
  it->second += c;
  if (it->second == 0.0) terms_.erase(it);
}

int SymLaurent::degree() const {
  int d = 0;
  for (const auto& [g, c] : terms_) {
    int s = 0;
    for (int k : g) s += std::abs(k);
    d = std::max(d, s);
  }
  return d;
}

SymLaurent SymLaurent::operator+(const SymLaurent& o) const {
  SymLaurent r = *this;
  for (const auto& [g, c] : o.terms_) r.add_term(g, c);
  return r;
}

SymLaurent SymLaurent::operator-(const SymLaurent& o) const { return *this + o * cplx(-1.0); }

SymLaurent SymLaurent::operator*(const SymLaurent& o) const {
  SymLaurent r;
  for (const auto& [g1, c1] : terms_)
    for (const auto& [g2, c2] : o.terms_) {
      Gens g = g1;
      g.insert(g.end(), g2.begin(), g2.end());
      r.add_term(std::move(g), c1 * c2);
    }
  return r;
}

SymLaurent SymLaurent::operator*(cplx c) const {
  SymLaurent r;
  for (const auto& [g, v] : terms_) r.add_term(g, v * c);
  return r;
}

nlohmann::json SymLaurent::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [g, c] : terms_)
    arr.push_back({{"gens", g}, {"re", c.real()}, {"im", c.imag()}});
  return {{"terms", arr}};
}

SymLaurent SymLaurent::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
    throw InvalidArgument("SymLaurent JSON needs a \"terms\" array");
  SymLaurent P;
  for (const auto& t : j["terms"]) {
    if (!t.contains("gens") || !t["gens"].is_array())
      throw InvalidArgument("SymLaurent term needs a \"gens\" array");
    Gens g = t["gens"].get<Gens>();
    double re = t.value("re", 0.0);
    double im = t.value("im", 0.0);
    P.add_term(std::move(g), cplx(re, im));
  }
  return P;
}

namespace {

// Power sums p_k(x) for every generator index used by P.
std::map<int, cplx> power_sums_for(const SymLaurent& P, const VariableVector& x) {
  std::map<int, cplx> ps;
  for (const auto& [g, c] : P.terms())
    for (int k : g)
      if (!ps.count(k)) {
        cplx s = 0.0;
        for (const cplx& xi : x) s += std::pow(xi, k);
        ps[k] = s;
      }
  return ps;
}

}  // namespace

cplx eval(const SymLaurent& P, const VariableVector& x) {
  for (const cplx& xi : x)
    if (xi == 0.0) throw InvalidArgument("Laurent evaluation needs nonzero variables");
  const auto ps = power_sums_for(P, x);
  cplx total = 0.0;
  for (const auto& [g, c] : P.terms()) {
    cplx term = c;
    for (int k : g) term *= ps.at(k);
    total += term;
  }
  return total;
}

PreparedLaurent::PreparedLaurent(const SymLaurent& P) {
  for (const auto& [g, c] : P.terms())
    for (int k : g)
      if (std::find(ks_.begin(), ks_.end(), k) == ks_.end()) ks_.push_back(k);
  std::sort(ks_.begin(), ks_.end());
  for (const auto& [g, c] : P.terms()) {
    coef_.push_back(c);
    std::vector<int> slots;
    for (int k : g) slots.push_back(static_cast<int>(std::lower_bound(ks_.begin(), ks_.end(), k) - ks_.begin()));
    slots_.push_back(std::move(slots));
  }
}

cplx PreparedLaurent::eval_powersums(const cplx* ps) const {
  cplx total = 0.0;
  for (std::size_t t = 0; t < coef_.size(); ++t) {
    cplx term = coef_[t];
    for (int s : slots_[t]) term *= ps[s];
    total += term;
  }
  return total;
}

bool is_ising_invariant(const SymLaurent& P) {
  for (const auto& [g, c] : P.terms())
    for (int k : g)
      if (k % 2 == 0) return false;
  return true;
}

std::vector<cplx> elementary_sigmas(const VariableVector& x) {
  std::vector<cplx> e(x.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += x[i] * e[k - 1];
  return e;
}

cplx elementary_sigma(int k, const VariableVector& x) {
  if (k < 0) return 0.0;
  if (static_cast<std::size_t>(k) > x.size()) return 0.0;
  return elementary_sigmas(x)[k];
}

namespace {

cplx sigma_at(const std::vector<cplx>& e, int k) {
  if (k < 0 || static_cast<std::size_t>(k) >= e.size()) return 0.0;
  return e[k];
}

cplx I_from_sigmas(int s, const std::vector<cplx>& e) {
  const int d = s + 1;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j <= i + 1 && j < d; ++j) M(i, j) = sigma_at(e, 2 * (i - j + 1));
  for (int j = 0; j < d; ++j) M(s, j) = sigma_at(e, 2 * (s - j) + 1);
  if (d == 1) return M(0, 0);
  return M.partialPivLu().determinant();
}

}  // namespace

cplx I_eval(int s, const VariableVector& x) {
  if (s < 0 || s > 8) throw InvalidArgument("I_eval supports 0 <= s <= 8");
  return I_from_sigmas(s, elementary_sigmas(x));
}

cplx I_eval_negative(int s, const VariableVector& x) {
  VariableVector inv(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) throw InvalidArgument("I_{-2s-1} needs nonzero variables");
    inv[i] = 1.0 / x[i];
  }
  return I_eval(s, inv);
}

cplx J_eval(int s, const VariableVector& x) {
  if (s < 1 || 2 * s - 1 > 8) throw InvalidArgument("J_eval supports 1 <= s <= 4");
  const auto e = elementary_sigmas(x);
  // I_{2t+1} for t = 1 .. 2s-1 are the entries needed.
  std::vector<cplx> I(2 * s, 0.0);
  for (int t = 1; t <= 2 * s - 1; ++t) I[t] = I_from_sigmas(t, e);
  Eigen::MatrixXcd M(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      // entry I_{4s-1-2i-2j} = I_{2t+1} with t = 2s-1-i-j
      M(i, j) = I[2 * s - 1 - i - j];
    }
  if (s == 1) return M(0, 0);
  return M.partialPivLu().determinant();
}

cplx partial_derivative_eval(const SymLaurent& P, const std::vector<int>& J,
                             const std::vector<cplx>& zeta) {
  const int n = static_cast<int>(zeta.size());
  for (std::size_t a = 0; a < J.size(); ++a) {
    if (J[a] < 0 || J[a] >= n) throw InvalidArgument("derivative index out of range");
    for (std::size_t b = 0; b < a; ++b)
      if (J[a] == J[b]) throw InvalidArgument("derivative index set must have distinct entries");
  }
  VariableVector x(n);
  for (int i = 0; i < n; ++i) x[i] = std::exp(zeta[i]);
  const auto ps = power_sums_for(P, x);

  cplx total = 0.0;
  for (const auto& [g, c] : P.terms()) {
    const int nf = static_cast<int>(g.size());
    if (static_cast<int>(J.size()) > nf) continue;  // each factor absorbs at most one derivative
    // Sum over injective assignments of the derivative indices to factors.
    std::vector<int> used(nf, 0);
    std::function<cplx(std::size_t)> rec = [&](std::size_t a) -> cplx {
      if (a == J.size()) {
        cplx prod = 1.0;
        for (int f = 0; f < nf; ++f)
          if (!used[f]) prod *= ps.at(g[f]);
        return prod;
      }
      cplx acc = 0.0;
      for (int f = 0; f < nf; ++f) {
        if (used[f]) continue;
        used[f] = 1;
        const int k = g[f];
        acc += static_cast<double>(k) * std::exp(static_cast<double>(k) * zeta[J[a]]) * rec(a + 1);
        used[f] = 0;
      }
      return acc;
    };
    total += c * rec(0);
  }
  return total;
}

std::vector<SymLaurent::Gens> ising_monomials(int degree) {
  std::vector<SymLaurent::Gens> out;
  std::vector<int> gens;
  for (int k = 1; k <= degree; k += 2) {
    gens.push_back(-k);
    gens.push_back(k);
  }
  std::sort(gens.begin(), gens.end());
  SymLaurent::Gens cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t start, int budget) {
    out.push_back(cur);
    for (std::size_t i = start; i < gens.size(); ++i) {
      const int w = std::abs(gens[i]);
      if (w > budget) continue;
      cur.push_back(gens[i]);
      rec(i, budget - w);
      cur.pop_back();
    }
  };
  rec(0, degree);
  return out;
}

namespace {

void tensor_points(int nvars, const std::vector<double>& axis, std::vector<std::vector<double>>& out) {
  std::vector<int> idx(nvars, 0);
  const int na = static_cast<int>(axis.size());
  while (true) {
    // only sorted tuples: the targets and P are symmetric
    bool sorted = true;
    for (int i = 1; i < nvars; ++i)
      if (idx[i] < idx[i - 1]) sorted = false;
    if (sorted) {
      std::vector<double> p(nvars);
      for (int i = 0; i < nvars; ++i) p[i] = axis[idx[i]];
      out.push_back(std::move(p));
    }
    int d = nvars - 1;
    while (d >= 0 && ++idx[d] == na) idx[d--] = 0;
    if (d < 0) break;
  }
}

}  // namespace

ApproxResult approximate_on_box(const std::vector<ApproxTarget>& targets, int degree, double r,
                                int samples_per_dim) {
  if (targets.empty()) throw InvalidArgument("approximate_on_box needs at least one target");
  if (degree < 0) throw InvalidArgument("degree must be nonnegative");
  if (samples_per_dim < 2) throw InvalidArgument("need at least two samples per dimension");

  std::vector<double> axis(samples_per_dim);
  for (int i = 0; i < samples_per_dim; ++i)
    axis[i] = -r + 2.0 * r * i / (samples_per_dim - 1);

  struct Sample {
    VariableVector x;
    cplx target;
  };
  std::vector<Sample> samples;
  for (const auto& t : targets) {
    if (t.nvars < 1) throw InvalidArgument("targets need at least one variable");
    std::vector<std::vector<double>> pts;
    tensor_points(t.nvars, axis, pts);
    for (auto& p : pts) {
      VariableVector x(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) x[i] = std::exp(p[i]);
      samples.push_back({std::move(x), t.f(p)});
    }
  }

  ApproxResult best;
  best.sup_error = std::numeric_limits<double>::infinity();
  for (int d = 0; d <= degree; ++d) {
    const auto basis = ising_monomials(d);
    const int nb = static_cast<int>(basis.size());
    const int ns = static_cast<int>(samples.size());
    Eigen::MatrixXcd A(ns, nb);
    Eigen::VectorXcd b(ns);
    for (int i = 0; i < ns; ++i) {
      for (int j = 0; j < nb; ++j) A(i, j) = eval(SymLaurent::monomial(basis[j]), samples[i].x);
      b(i) = samples[i].target;
    }
    // Column scaling keeps the ridge parameter meaningful across monomials.
    Eigen::VectorXd scale(nb);
    for (int j = 0; j < nb; ++j) {
      scale(j) = A.col(j).norm();
      if (scale(j) == 0.0) scale(j) = 1.0;
      A.col(j) /= scale(j);
    }
    const double ridge = 1e-12;
    Eigen::MatrixXcd N = A.adjoint() * A;
    N.diagonal().array() += ridge;
    Eigen::VectorXcd c = N.ldlt().solve(A.adjoint() * b);
    double err = 0.0;
    Eigen::VectorXcd fit = A * c;
    for (int i = 0; i < ns; ++i) err = std::max(err, std::abs(fit(i) - b(i)));
    if (err <= best.sup_error) {
      SymLaurent P;
      for (int j = 0; j < nb; ++j) P.add_term(basis[j], c(j) / scale(j));
      best.P = P;
      best.sup_error = err;
      best.degree = d;
      best.basis_size = nb;
    }
  }
  return best;
}

GrowthFit fit_derivative_growth(const SymLaurent& P, int max_n, int samples, unsigned long seed) {
  GrowthFit fit;
  fit.b = P.degree();
  std::mt19937_64 rng(seed);
  auto draw = [&](double range, std::vector<cplx>& zeta, std::vector<int>& J, int& n) {
    n = 1 + static_cast<int>(rng() % static_cast<unsigned long>(max_n));
    std::uniform_real_distribution<double> u(-range, range);
    zeta.assign(n, 0.0);
    for (auto& z : zeta) z = u(rng);
    J.clear();
    for (int i = 0; i < n; ++i)
      if (rng() % 2) J.push_back(i);
  };
  auto energy = [](const std::vector<cplx>& zeta) {
    double E = 0.0;
    for (const auto& z : zeta) E += std::cosh(z.real());
    return E;
  };
  std::vector<cplx> zeta;
  std::vector<int> J;
  int n = 0;
  double log_a = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    draw(3.0, zeta, J, n);
    const double v = std::abs(partial_derivative_eval(P, J, zeta));
    if (v == 0.0) continue;
    const double la = (std::log(v) - fit.b * std::log(energy(zeta))) / n;
    log_a = std::max(log_a, la);
  }
  fit.a = std::isfinite(log_a) ? std::exp(log_a) : 0.0;
  fit.samples = samples;
  // Each derivative lands on one of at most `maxf` factors, so the number of
  // product-rule terms is at most maxf^n.
  double C = 0.0;
  std::size_t maxf = 1;
  for (const auto& [g, c] : P.terms()) {
    double t = std::abs(c);
    for (int k : g) t *= std::pow(2.0, std::abs(k)) * std::max(1, std::abs(k));
    C += t;
    maxf = std::max(maxf, g.size());
  }
  fit.a_bound = std::max(1.0, C) * static_cast<double>(maxf);
  for (int s = 0; s < samples; ++s) {
    draw(6.0, zeta, J, n);
    const double v = std::abs(partial_derivative_eval(P, J, zeta));
    const double E = energy(zeta);
    const double fitted = std::pow(fit.a, n) * std::pow(E, fit.b);
    if (fitted > 0.0) fit.max_validation_ratio = std::max(fit.max_validation_ratio, v / fitted);
    if (v > std::pow(fit.a_bound, n) * std::pow(E, fit.b) * (1.0 + 1e-12)) ++fit.violations;
  }
  return fit;
}

}  // namespace isingops
