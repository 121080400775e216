#include <functional>

#include "isingops/symlaurent.hpp"

namespace isingops {

namespace {

using BigMatrix = std::vector<std::vector<BigInt>>;

// Fraction-free Gaussian elimination (Bareiss) with row swaps.
BigInt det_exact(BigMatrix A) {
  const std::size_t n = A.size();
  if (n == 0) return 1;
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (A[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && A[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(A[k], A[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev;
    prev = A[k][k];
  }
  return sign * A[n - 1][n - 1];
}

std::vector<BigInt> sigmas_exact(const std::vector<BigInt>& x) {
  std::vector<BigInt> e(x.size() + 1, 0);
  e[0] = 1;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += x[i] * e[k - 1];
  return e;
}

BigInt sig(const std::vector<BigInt>& e, int k) {
  if (k < 0 || static_cast<std::size_t>(k) >= e.size()) return 0;
  return e[k];
}

BigInt I_from_sigmas_exact(int s, const std::vector<BigInt>& e) {
  const int d = s + 1;
  BigMatrix M(d, std::vector<BigInt>(d, 0));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j <= i + 1 && j < d; ++j) M[i][j] = sig(e, 2 * (i - j + 1));
  for (int j = 0; j < d; ++j) M[s][j] = sig(e, 2 * (s - j) + 1);
  return det_exact(M);
}

using Poly = std::map<std::vector<int>, BigInt>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r[e] += ca * cb;
    }
  for (auto it = r.begin(); it != r.end();) it = (it->second == 0) ? r.erase(it) : std::next(it);
  return r;
}

void poly_add(Poly& a, const Poly& b, int sign) {
  for (const auto& [e, c] : b) a[e] += sign * c;
  for (auto it = a.begin(); it != a.end();) it = (it->second == 0) ? a.erase(it) : std::next(it);
}

Poly poly_const(int n, long c) {
  Poly p;
  if (c != 0) p[std::vector<int>(n, 0)] = c;
  return p;
}

Poly sigma_poly(int k, int n) {
  Poly p;
  if (k < 0 || k > n) return p;
  std::vector<int> e(n, 0);
  std::function<void(int, int)> rec = [&](int start, int left) {
    if (left == 0) {
      p[e] = 1;
      return;
    }
    for (int i = start; i <= n - left; ++i) {
      e[i] = 1;
      rec(i + 1, left - 1);
      e[i] = 0;
    }
  };
  rec(0, k);
  return p;
}

Poly det_poly(const std::vector<std::vector<Poly>>& M, int n) {
  const std::size_t d = M.size();
  if (d == 0) return poly_const(n, 1);
  if (d == 1) return M[0][0];
  Poly total;
  for (std::size_t j = 0; j < d; ++j) {
    if (M[0][j].empty()) continue;
    std::vector<std::vector<Poly>> minor;
    for (std::size_t i = 1; i < d; ++i) {
      std::vector<Poly> row;
      for (std::size_t c = 0; c < d; ++c)
        if (c != j) row.push_back(M[i][c]);
      minor.push_back(std::move(row));
    }
    poly_add(total, poly_mul(M[0][j], det_poly(minor, n)), (j % 2 == 0) ? 1 : -1);
  }
  return total;
}

}  // namespace

BigInt elementary_sigma_exact(int k, const std::vector<BigInt>& x) {
  if (k < 0 || static_cast<std::size_t>(k) > x.size()) return 0;
  return sigmas_exact(x)[k];
}

BigInt I_eval_exact(int s, const std::vector<BigInt>& x) {
  if (s < 0 || s > 8) throw InvalidArgument("I_eval_exact supports 0 <= s <= 8");
  return I_from_sigmas_exact(s, sigmas_exact(x));
}

BigInt J_eval_exact(int s, const std::vector<BigInt>& x) {
  if (s < 1 || 2 * s - 1 > 8) throw InvalidArgument("J_eval_exact supports 1 <= s <= 4");
  const auto e = sigmas_exact(x);
  std::vector<BigInt> I(2 * s, 0);
  for (int t = 1; t <= 2 * s - 1; ++t) I[t] = I_from_sigmas_exact(t, e);
  BigMatrix M(s, std::vector<BigInt>(s, 0));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) M[i][j] = I[2 * s - 1 - i - j];
  return det_exact(M);
}

std::map<std::vector<int>, BigInt> I_monomial_coefficients(int s, int n) {
  if (s < 0 || s > 4 || n < 1 || n > 6)
    throw InvalidArgument("monomial expansion supports s <= 4 and 1 <= n <= 6");
  const int d = s + 1;
  std::vector<std::vector<Poly>> M(d, std::vector<Poly>(d));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j <= i + 1 && j < d; ++j) {
      const int k = 2 * (i - j + 1);
      M[i][j] = (k == 0) ? poly_const(n, 1) : sigma_poly(k, n);
    }
  for (int j = 0; j < d; ++j) M[s][j] = sigma_poly(2 * (s - j) + 1, n);
  return det_poly(M, n);
}

}  // namespace isingops
