#include "isingops/meromfuncs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "isingops/pfaffian.hpp"

namespace isingops {

int Pairing::unpaired() const {
  if (n % 2 == 0) return -1;
  std::vector<int> seen(n, 0);
  for (const auto& [l, r] : pairs) seen[l] = seen[r] = 1;
  for (int i = 0; i < n; ++i)
    if (!seen[i]) return i;
  return -1;
}

bool Pairing::valid() const {
  if (static_cast<int>(pairs.size()) != n / 2) return false;
  std::vector<int> seen(n, 0);
  for (const auto& [l, r] : pairs) {
    if (l < 0 || r >= n || l >= r || seen[l] || seen[r]) return false;
    seen[l] = seen[r] = 1;
  }
  return true;
}

std::vector<Pairing> all_pairings(int n) {
  if (n < 0) throw InvalidArgument("pairing size must be nonnegative");
  if (n > 11) throw ResourceLimit("all_pairings is guarded to n <= 11");
  std::vector<Pairing> out;
  Pairing cur;
  cur.n = n;
  std::vector<int> used(n, 0);
  // For odd n, choose the unpaired index first, then pair the rest greedily.
  std::function<void()> rec = [&]() {
    int l = 0;
    while (l < n && used[l]) ++l;
    if (l == n) {
      out.push_back(cur);
      return;
    }
    used[l] = 1;
    for (int r = l + 1; r < n; ++r) {
      if (used[r]) continue;
      used[r] = 1;
      cur.pairs.emplace_back(l, r);
      rec();
      cur.pairs.pop_back();
      used[r] = 0;
    }
    used[l] = 0;
  };
  if (n % 2 == 0) {
    rec();
  } else {
    for (int u = 0; u < n; ++u) {
      used[u] = 1;
      rec();
      used[u] = 0;
    }
  }
  for (auto& p : out) std::sort(p.pairs.begin(), p.pairs.end());
  return out;
}

namespace {

int permutation_parity(const std::vector<int>& perm) {
  std::vector<int> seen(perm.size(), 0);
  int transpositions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = 1;
      ++len;
    }
    transpositions += static_cast<int>(len) - 1;
  }
  return (transpositions % 2 == 0) ? 1 : -1;
}

cplx half_tanh(cplx d) { return std::tanh(0.5 * d); }

void check_pole(cplx d) {
  const double l = std::round((d.imag() / kPi - 1.0) / 2.0);
  const cplx pole(0.0, kPi * (2.0 * l + 1.0));
  if (std::abs(d - pole) < 1e-12) throw SingularityError("evaluation point on a tanh pole");
}

}  // namespace

int pairing_sign(const Pairing& p) {
  if (!p.valid()) throw InvalidArgument("invalid pairing");
  std::vector<int> perm;
  perm.reserve(p.n);
  for (const auto& [l, r] : p.pairs) {
    perm.push_back(l);
    perm.push_back(r);
  }
  if (p.n % 2 == 1) perm.push_back(p.unpaired());
  return permutation_parity(perm);
}

double modd_pole_distance(const std::vector<cplx>& zeta) {
  double best = INFINITY;
  for (std::size_t i = 0; i < zeta.size(); ++i)
    for (std::size_t j = i + 1; j < zeta.size(); ++j) {
      const cplx d = zeta[i] - zeta[j];
      const double l = std::round((d.imag() / kPi - 1.0) / 2.0);
      best = std::min(best, std::abs(d - cplx(0.0, kPi * (2.0 * l + 1.0))));
    }
  return best;
}

cplx modd_product(const std::vector<cplx>& zeta) {
  cplx prod = 1.0;
  for (std::size_t i = 0; i < zeta.size(); ++i)
    for (std::size_t j = i + 1; j < zeta.size(); ++j) {
      const cplx d = zeta[i] - zeta[j];
      check_pole(d);
      prod *= half_tanh(d);
    }
  return prod;
}

cplx modd_pairing_sum(const std::vector<cplx>& zeta) {
  const int n = static_cast<int>(zeta.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) check_pole(zeta[i] - zeta[j]);
  cplx total = 0.0;
  for (const auto& p : all_pairings(n)) {
    cplx term = static_cast<double>(pairing_sign(p));
    for (const auto& [l, r] : p.pairs) term *= half_tanh(zeta[l] - zeta[r]);
    total += term;
  }
  return total;
}

cplx modd_pfaffian(const std::vector<cplx>& zeta) {
  const int n = static_cast<int>(zeta.size());
  const int d = n + (n % 2);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      check_pole(zeta[i] - zeta[j]);
      A(i, j) = half_tanh(zeta[i] - zeta[j]);
      A(j, i) = -A(i, j);
    }
  if (n % 2 == 1)
    for (int i = 0; i < n; ++i) {
      A(i, n) = 1.0;
      A(n, i) = -1.0;
    }
  return pfaffian(A);
}

cplx modd_residue(int n, const std::vector<cplx>& tail) {
  if (n < 2) throw InvalidArgument("residue needs n >= 2");
  if (static_cast<int>(tail.size()) != n - 2) throw InvalidArgument("tail must have length n-2");
  return -2.0 * modd_product(tail);
}

cplx richardson_to_zero(const std::vector<double>& h, const std::vector<cplx>& v) {
  std::vector<cplx> p = v;
  const std::size_t n = h.size();
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i + k < n; ++i)
      p[i] = (h[i + k] * p[i] - h[i] * p[i + 1]) / (h[i + k] - h[i]);
  return p[0];
}

cplx modd_residue_numeric(cplx zeta1, const std::vector<cplx>& tail) {
  const std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  std::vector<cplx> vals;
  for (double e : eps) {
    std::vector<cplx> z = {zeta1, zeta1 + cplx(0.0, kPi) + e};
    z.insert(z.end(), tail.begin(), tail.end());
    vals.push_back(e * modd_product(z));
  }
  return richardson_to_zero(eps, vals);
}

cplx modd_residue_contour(cplx zeta1, const std::vector<cplx>& tail) {
  const int N = 8;
  const double rho = 1e-3;
  cplx acc = 0.0;
  for (int j = 0; j < N; ++j) {
    const cplx u = rho * std::exp(cplx(0.0, 2.0 * kPi * j / N));
    std::vector<cplx> z = {zeta1, zeta1 + cplx(0.0, kPi) + u};
    z.insert(z.end(), tail.begin(), tail.end());
    acc += modd_product(z) * u;  // (1/2 pi i) oint f du with du = i u dphi
  }
  return acc / static_cast<double>(N);
}

cplx meven_bruteforce(const std::vector<cplx>& zeta) {
  const int n = static_cast<int>(zeta.size());
  if (n % 2 != 0) throw InvalidArgument("M^even needs an even number of variables");
  if (n > 8) throw ResourceLimit("meven_bruteforce is guarded to 2k <= 8");
  if (n == 0) return 1.0;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  cplx total = 0.0;
  do {
    cplx term = static_cast<double>(permutation_parity(perm));
    for (int j = 0; j < n; j += 2) term *= std::sinh(0.5 * (zeta[perm[j]] - zeta[perm[j + 1]]));
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

cplx meven_pfaffian(const std::vector<cplx>& zeta) {
  const int n = static_cast<int>(zeta.size());
  if (n % 2 != 0) throw InvalidArgument("M^even needs an even number of variables");
  const int k = n / 2;
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = std::sinh(0.5 * (zeta[i] - zeta[j]));
  double norm = 1.0;
  for (int j = 1; j <= k; ++j) norm *= 2.0 * j;
  return norm * pfaffian(A);
}

double boundary_term_guard(int m, int n) {
  double f = 1.0;
  for (int j = 2; j <= std::min(m, n) + 1; ++j) f *= j;
  return std::pow(2.0, m + n) * f;
}

std::size_t boundary_term_count(int m, int n) {
  std::size_t total = 0;
  for (int k = 0; k <= std::min(m, n); ++k) {
    std::size_t c = 1;
    for (int j = 0; j < k; ++j) c = c * (m - j) / (j + 1);
    for (int j = 0; j < k; ++j) c *= (n - j);
    total += c;
  }
  return total;
}

void for_each_boundary_term(int m, int n, const std::function<void(const BoundaryTerm&)>& visit) {
  if (m < 0 || n < 0) throw InvalidArgument("boundary terms need m, n >= 0");
  if (boundary_term_guard(m, n) > 1e7) throw ResourceLimit("boundary term guard exceeded");
  BoundaryTerm t;
  t.m = m;
  t.n = n;
  std::vector<int> theta_used(m, 0), eta_used(n, 0);
  auto emit = [&]() {
    t.theta_hat.clear();
    t.eta_hat.clear();
    for (int i = 0; i < m; ++i)
      if (!theta_used[i]) t.theta_hat.push_back(i);
    for (int j = 0; j < n; ++j)
      if (!eta_used[j]) t.eta_hat.push_back(m + j);
    if (t.theta_hat.size() % 2 == 1 && t.eta_hat.size() % 2 == 1) {
      t.sign = 0;
    } else {
      std::vector<int> perm;
      for (const auto& [l, r] : t.cross) {
        perm.push_back(l);
        perm.push_back(r);
      }
      perm.insert(perm.end(), t.theta_hat.begin(), t.theta_hat.end());
      perm.insert(perm.end(), t.eta_hat.begin(), t.eta_hat.end());
      t.sign = permutation_parity(perm);
    }
    visit(t);
  };
  // choose l_1 < ... < l_k, then an injective assignment of eta indices
  std::function<void(int, int)> rec = [&](int next_l, int k_left) {
    if (k_left == 0) {
      emit();
      return;
    }
    for (int l = next_l; l < m; ++l) {
      theta_used[l] = 1;
      for (int j = 0; j < n; ++j) {
        if (eta_used[j]) continue;
        eta_used[j] = 1;
        t.cross.emplace_back(l, m + j);
        rec(l + 1, k_left - 1);
        t.cross.pop_back();
        eta_used[j] = 0;
      }
      theta_used[l] = 0;
    }
  };
  for (int k = 0; k <= std::min(m, n); ++k) rec(0, k);
}

std::vector<BoundaryTerm> boundary_terms(int m, int n) {
  std::vector<BoundaryTerm> out;
  for_each_boundary_term(m, n, [&](const BoundaryTerm& t) { out.push_back(t); });
  return out;
}

cplx boundary_term_sum(const std::vector<cplx>& theta, const std::vector<cplx>& eta) {
  const int m = static_cast<int>(theta.size());
  const int n = static_cast<int>(eta.size());
  std::vector<cplx> all = theta;
  all.insert(all.end(), eta.begin(), eta.end());
  cplx total = 0.0;
  for_each_boundary_term(m, n, [&](const BoundaryTerm& t) {
    if (t.sign == 0) return;
    cplx term = static_cast<double>(t.sign);
    for (const auto& [l, r] : t.cross) {
      const cplx d = all[l] - all[r];
      if (std::abs(std::sinh(0.5 * d)) < 1e-12) throw SingularityError("boundary term on a diagonal");
      term /= std::tanh(0.5 * d);
    }
    std::vector<cplx> th, et;
    for (int i : t.theta_hat) th.push_back(all[i]);
    for (int j : t.eta_hat) et.push_back(all[j]);
    term *= modd_product(th) * modd_product(et);
    total += term;
  });
  return total;
}

cplx modd_boundary_limit(const std::vector<cplx>& theta, const std::vector<cplx>& eta) {
  const std::vector<double> deltas = {1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4};
  std::vector<cplx> vals;
  for (double d : deltas) {
    std::vector<cplx> z = theta;
    for (const auto& e : eta) z.push_back(e + cplx(0.0, kPi - d));
    vals.push_back(modd_product(z));
  }
  return richardson_to_zero(deltas, vals);
}

void write_pairings_csv(std::ostream& os, int n) {
  os << "n,pairs,sign\n";
  for (const auto& p : all_pairings(n)) {
    os << n << ",\"";
    for (std::size_t i = 0; i < p.pairs.size(); ++i)
      os << (i ? " " : "") << "(" << p.pairs[i].first + 1 << "," << p.pairs[i].second + 1 << ")";
    os << "\"," << pairing_sign(p) << "\n";
  }
}

void write_boundary_terms_csv(std::ostream& os, int m, int n) {
  os << "m,n,k,pairs,sign\n";
  for_each_boundary_term(m, n, [&](const BoundaryTerm& t) {
    os << m << "," << n << "," << t.k() << ",\"";
    for (std::size_t i = 0; i < t.cross.size(); ++i)
      os << (i ? " " : "") << "(" << t.cross[i].first + 1 << "," << t.cross[i].second + 1 << ")";
    os << "\"," << t.sign << "\n";
  });
}

}  // namespace isingops
