#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>

namespace isingops {

inline std::uint64_t binom_direct(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * static_cast<std::uint64_t>(n - k + j) / static_cast<std::uint64_t>(j);
  return r;
}

inline constexpr int kBinomRows = 1024;
inline constexpr int kBinomCols = 21;

// Binomial coefficient as 64-bit integer; tabulated for n < 1024, k <= 20.
inline std::uint64_t binom(int n, int k) {
  static const std::array<std::uint64_t, kBinomRows * kBinomCols> table = [] {
    std::array<std::uint64_t, kBinomRows * kBinomCols> t{};
    for (int a = 0; a < kBinomRows; ++a)
      for (int b = 0; b < kBinomCols; ++b) t[a * kBinomCols + b] = binom_direct(a, b);
    return t;
  }();
  if (k < 0 || n < 0 || k > n) return 0;
  if (n < kBinomRows && k < kBinomCols) return table[n * kBinomCols + k];
  return binom_direct(n, k);
}

inline double factorial(int n) {
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

// Strictly increasing k-tuples of {0..G-1} are ranked in colexicographic order:
// rank(c) = sum_j C(c_j, j+1).
inline std::size_t combo_rank(const int* c, int k) {
  std::size_t r = 0;
  for (int j = 0; j < k; ++j) r += binom(c[j], j + 1);
  return r;
}

inline void combo_unrank(std::size_t r, int k, int* c) {
  for (int j = k - 1; j >= 0; --j) {
    int v = j;
    while (binom(v + 1, j + 1) <= r) ++v;
    c[j] = v;
    r -= binom(v, j + 1);
  }
}

inline void combo_first(int* c, int k) {
  for (int j = 0; j < k; ++j) c[j] = j;
}

// Advances to the next tuple in colex order; false after the last one.
inline bool combo_next(int* c, int k, int G) {
  for (int j = 0; j < k; ++j) {
    const int limit = (j + 1 < k) ? c[j + 1] : G;
    if (c[j] + 1 < limit) {
      ++c[j];
      for (int i = 0; i < j; ++i) c[i] = i;
      return true;
    }
  }
  return false;
}

// Sorts c ascending and returns the sign of the sorting permutation,
// or 0 if two entries coincide.
inline int sort_with_sign(int* c, int k) {
  int sign = 1;
  for (int i = 1; i < k; ++i) {
    const int v = c[i];
    int j = i - 1;
    while (j >= 0 && c[j] > v) {
      c[j + 1] = c[j];
      --j;
      sign = -sign;
    }
    c[j + 1] = v;
  }
  for (int i = 1; i < k; ++i)
    if (c[i] == c[i - 1]) return 0;
  return sign;
}

}  // namespace isingops
