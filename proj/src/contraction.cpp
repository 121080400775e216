#include "isingops/contraction.hpp"

#include <algorithm>
#include <cmath>

#include "isingops/combinatorics.hpp"

namespace isingops {

namespace {

struct RankTable {
  int G = 0;
  int K = 0;
  std::vector<std::size_t> b;  // b[v * (K + 1) + k] = C(v, k)
  RankTable(int G_, int K_) : G(G_), K(K_), b(static_cast<std::size_t>(G_ + 1) * (K_ + 1)) {
    for (int v = 0; v <= G; ++v)
      for (int k = 0; k <= K; ++k) b[v * (K + 1) + k] = binom(v, k);
  }
  std::size_t operator()(int v, int k) const { return b[v * (K + 1) + k]; }
};

// Sorts the concatenation (A, B) of two increasing tuples; returns the permutation sign
// (0 if they share an element) and the colex rank of the merged tuple.
inline int merge_rank(const int* A, int na, const int* B, int nb, const RankTable& T, std::size_t& rank) {
  int i = 0, j = 0, pos = 0, inv = 0;
  rank = 0;
  while (i < na || j < nb) {
    int v;
    if (j >= nb || (i < na && A[i] < B[j])) {
      v = A[i++];
    } else {
      if (i < na && A[i] == B[j]) return 0;
      v = B[j++];
      inv += na - i;
    }
    rank += T(v, pos + 1);
    ++pos;
  }
  return (inv % 2 == 0) ? 1 : -1;
}

void check_pairs(const GridKernel& K, const std::vector<StatePair>& pairs) {
  for (const auto& p : pairs) {
    if (!p.left || !p.right) throw InvalidArgument("state pair has a null member");
    if (!p.left->grid().same_as(K.grid()) || !p.right->grid().same_as(K.grid()))
      throw InvalidArgument("state grid differs from kernel grid");
  }
}

double block_factor(int m, int n, int s) {
  const double sgn = ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  return sgn * std::sqrt(factorial(m + s) * factorial(n + s));
}

}  // namespace

std::vector<cplx> block_elements(const GridKernel& K, const std::vector<StatePair>& pairs, bool parallel) {
  check_pairs(K, pairs);
  const int P = static_cast<int>(pairs.size());
  std::vector<cplx> result(P, 0.0);
  if (K.is_zero() || P == 0) return result;
  const int m = K.m(), n = K.n();
  const RapidityGrid& g = K.grid();
  const int G = g.size();
  std::vector<int> smax_p(P);
  int smax = -1, kmax = 0;
  for (int p = 0; p < P; ++p) {
    smax_p[p] = std::min({pairs[p].left->nmax() - m, pairs[p].right->nmax() - n, G - std::max(m, n)});
    smax = std::max(smax, smax_p[p]);
    kmax = std::max({kmax, pairs[p].left->nmax(), pairs[p].right->nmax()});
  }
  if (smax < 0) return result;
  const RankTable T(G, std::max(kmax, std::max(m, n)) + 1);
  const std::size_t nrows = K.rows(), ncols = K.cols();

  std::vector<double> colw(ncols);
  {
    std::vector<int> J(std::max(n, 1));
    combo_first(J.data(), n);
    std::size_t r = 0;
    do {
      colw[r++] = tuple_weight(g, J.data(), n);
    } while (n > 0 && combo_next(J.data(), n, G));
  }

  const int S = smax + 1;
  std::vector<cplx> total(static_cast<std::size_t>(P) * S, 0.0);

#pragma omp parallel if (parallel)
  {
    std::vector<cplx> acc(static_cast<std::size_t>(P) * S, 0.0);
    std::vector<cplx> krow(ncols);
    std::vector<int> I(std::max(m, 1)), J(std::max(n, 1)), Xi(std::max(smax, 1));
    std::vector<cplx> lv(P), rv(P);
    std::vector<char> active(P);
#pragma omp for schedule(dynamic, 4)
    for (std::size_t row = 0; row < nrows; ++row) {
      combo_unrank(row, m, I.data());
      K.fill_row(I.data(), krow.data());
      for (std::size_t c = 0; c < ncols; ++c) krow[c] *= colw[c];
      const double WI = tuple_weight(g, I.data(), m);
      for (int s = 0; s <= smax; ++s) {
        bool any = false;
        for (int p = 0; p < P; ++p) {
          active[p] = s <= smax_p[p];
          any = any || active[p];
        }
        if (!any) break;
        combo_first(Xi.data(), s);
        do {
          std::size_t rankL;
          const int sgnL = merge_rank(I.data(), m, Xi.data(), s, T, rankL);
          if (sgnL == 0) continue;
          bool nonzero = false;
          for (int p = 0; p < P; ++p) {
            lv[p] = 0.0;
            rv[p] = 0.0;
            if (!active[p]) continue;
            lv[p] = static_cast<double>(sgnL) * std::conj(pairs[p].left->sector(m + s)[rankL]);
            nonzero = nonzero || lv[p] != 0.0;
          }
          if (!nonzero) continue;
          if (s == 0) {
            for (int p = 0; p < P; ++p) {
              if (lv[p] == 0.0) continue;
              const auto& R = pairs[p].right->sector(n);
              cplx d = 0.0;
              for (std::size_t c = 0; c < ncols; ++c) d += krow[c] * R[c];
              rv[p] = d;
            }
          } else {
            combo_first(J.data(), n);
            std::size_t c = 0;
            do {
              std::size_t rankR;
              const int sgnR = merge_rank(J.data(), n, Xi.data(), s, T, rankR);
              if (sgnR != 0) {
                const cplx kv = static_cast<double>(sgnR) * krow[c];
                for (int p = 0; p < P; ++p)
                  if (lv[p] != 0.0) rv[p] += kv * pairs[p].right->sector(n + s)[rankR];
              }
              ++c;
            } while (n > 0 && combo_next(J.data(), n, G));
          }
          const double WX = WI * tuple_weight(g, Xi.data(), s);
          for (int p = 0; p < P; ++p)
            if (lv[p] != 0.0) acc[p * S + s] += WX * lv[p] * rv[p];
        } while (s > 0 && combo_next(Xi.data(), s, G));
      }
    }
#pragma omp critical
    for (std::size_t i = 0; i < acc.size(); ++i) total[i] += acc[i];
  }
  for (int p = 0; p < P; ++p)
    for (int s = 0; s <= smax_p[p]; ++s) result[p] += block_factor(m, n, s) * total[p * S + s];
  return result;
}

std::vector<cplx> block_elements_serial(const GridKernel& K, const std::vector<StatePair>& pairs) {
  check_pairs(K, pairs);
  const int P = static_cast<int>(pairs.size());
  std::vector<cplx> result(P, 0.0);
  if (K.is_zero()) return result;
  const int m = K.m(), n = K.n();
  const RapidityGrid& g = K.grid();
  const int G = g.size();
  for (int p = 0; p < P; ++p) {
    const FockVector& L = *pairs[p].left;
    const FockVector& R = *pairs[p].right;
    for (int s = 0; m + s <= L.nmax() && n + s <= R.nmax() && s <= G; ++s) {
      cplx acc = 0.0;
      std::vector<int> I(m), J(n), Xi(s);
      combo_first(I.data(), m);
      do {
        combo_first(J.data(), n);
        do {
          const cplx k = K.entry(I.data(), J.data());
          combo_first(Xi.data(), s);
          do {
            std::vector<int> li(I), ri(J);
            li.insert(li.end(), Xi.begin(), Xi.end());
            ri.insert(ri.end(), Xi.begin(), Xi.end());
            const double w = tuple_weight(g, I.data(), m) * tuple_weight(g, J.data(), n) * tuple_weight(g, Xi.data(), s);
            acc += w * std::conj(L.at(li)) * k * R.at(ri);
          } while (s > 0 && combo_next(Xi.data(), s, G));
        } while (n > 0 && combo_next(J.data(), n, G));
      } while (m > 0 && combo_next(I.data(), m, G));
      result[p] += block_factor(m, n, s) * acc;
    }
  }
  return result;
}

std::vector<FormElement> quadratic_form_elements(const CoefficientFamily& fam, const std::vector<StatePair>& pairs,
                                                 bool parallel) {
  std::vector<FormElement> out(pairs.size());
  if (pairs.empty()) return out;
  int lmax = 0, rmax = 0;
  for (const auto& p : pairs) {
    if (!p.left || !p.right) throw InvalidArgument("state pair has a null member");
    lmax = std::max(lmax, p.left->nmax());
    rmax = std::max(rmax, p.right->nmax());
  }
  const GridPtr grid = pairs.front().left->grid_ptr();
  auto occupied = [](const FockVector& v) {
    std::vector<bool> occ(v.nmax() + 1);
    for (int k = 0; k <= v.nmax(); ++k)
      occ[k] = std::any_of(v.sector(k).begin(), v.sector(k).end(), [](cplx x) { return x != cplx(0.0); });
    return occ;
  };
  std::vector<std::vector<bool>> locc, rocc;
  for (const auto& p : pairs) {
    locc.push_back(occupied(*p.left));
    rocc.push_back(occupied(*p.right));
  }
  // block (m, n) pairs left sector s + m with right sector s + n
  auto needed = [&](int m, int n) {
    for (std::size_t p = 0; p < pairs.size(); ++p)
      for (int s = 0; s + m < static_cast<int>(locc[p].size()) && s + n < static_cast<int>(rocc[p].size()); ++s)
        if (locc[p][s + m] && rocc[p][s + n]) return true;
    return false;
  };
  for (int m = 0; m <= lmax; ++m)
    for (int n = 0; n <= rmax; ++n) {
      if (!fam.nonzero_in(m + n)) continue;
      std::vector<cplx> v(pairs.size(), cplx(0.0));
      if (needed(m, n)) v = block_elements(GridKernel(fam, m, n, grid), pairs, parallel);
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        out[p].value += v[p];
        out[p].abs_sum += std::abs(v[p]);
        out[p].blocks.emplace_back(m, n);
        out[p].block_values.push_back(v[p]);
      }
    }
  return out;
}

cplx quadratic_form_element(const CoefficientFamily& fam, const FockVector& psi, const FockVector& chi, bool parallel) {
  return quadratic_form_elements(fam, {{&psi, &chi}}, parallel).front().value;
}

}  // namespace isingops
