#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "isingops/errors.hpp"

namespace isingops {

// A pairing of indices 0..n-1: disjoint pairs (l, r) with l < r, sorted by l.
// For odd n exactly one index stays unpaired.
struct Pairing {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;

  int unpaired() const;  // -1 when n is even
  bool valid() const;
};

// Complete enumeration; guarded to n <= 11.
std::vector<Pairing> all_pairings(int n);

// Signum of the permutation 0..n-1 -> (l1, r1, ..., lk, rk, unpaired).
int pairing_sign(const Pairing& p);

// Distance of zeta_i - zeta_j from the nearest odd multiple of i*pi, minimized over pairs.
double modd_pole_distance(const std::vector<cplx>& zeta);

// prod_{i<j} tanh((zeta_i - zeta_j)/2). Throws SingularityError within 1e-12 of a pole.
cplx modd_product(const std::vector<cplx>& zeta);

// Sum over pairings of sign(p) prod tanh((zeta_l - zeta_r)/2).
cplx modd_pairing_sum(const std::vector<cplx>& zeta);

// The pairing sum written as a Pfaffian (bordered by a row of ones for odd n).
cplx modd_pfaffian(const std::vector<cplx>& zeta);

// Residue of M^odd_n at zeta_2 - zeta_1 = i pi in the variable zeta_2: -2 M^odd_{n-2}(tail).
cplx modd_residue(int n, const std::vector<cplx>& tail);

// Same residue from the product formula: eps * M^odd_n(z1, z1 + i pi + eps, tail) at
// eps in {1e-2, 1e-3, 1e-4}, Richardson-extrapolated to eps = 0.
cplx modd_residue_numeric(cplx zeta1, const std::vector<cplx>& tail);

// Audit path: 8-point trapezoid rule on the circle |zeta_2 - zeta_1 - i pi| = 1e-3.
cplx modd_residue_contour(cplx zeta1, const std::vector<cplx>& tail);

// Polynomial extrapolation to h = 0 through the points (h_i, v_i) (Neville).
cplx richardson_to_zero(const std::vector<double>& h, const std::vector<cplx>& v);

// sum_{sigma in S_2k} sign(sigma) prod_j sinh((zeta_{sigma(2j-1)} - zeta_{sigma(2j)})/2); 2k <= 8.
cplx meven_bruteforce(const std::vector<cplx>& zeta);

// 2^k k! Pf(A) with A_ij = sinh((zeta_i - zeta_j)/2).
cplx meven_pfaffian(const std::vector<cplx>& zeta);

// One summand of the boundary decomposition of M^odd_{m+n}(theta, eta + i pi).
// Indices are 0-based: theta indices 0..m-1, eta indices m..m+n-1.
// sign is 0 when the reduced sets both have odd size (no pairing realizes the term).
struct BoundaryTerm {
  int m = 0;
  int n = 0;
  std::vector<std::pair<int, int>> cross;  // (l, r), l < m <= r, sorted by l
  int sign = 1;
  std::vector<int> theta_hat;  // unpaired theta indices, ascending
  std::vector<int> eta_hat;    // unpaired eta indices (m-based), ascending

  int k() const { return static_cast<int>(cross.size()); }
};

// Size guard of the enumeration: 2^{m+n} (min(m,n)+1)!.
double boundary_term_guard(int m, int n);
std::size_t boundary_term_count(int m, int n);

// Streams every term (k; (l_1, r_1), ..., (l_k, r_k)) without materializing the list.
void for_each_boundary_term(int m, int n, const std::function<void(const BoundaryTerm&)>& visit);
std::vector<BoundaryTerm> boundary_terms(int m, int n);

// Sum of the decomposition at real-off-diagonal or complex points:
// sum_terms sign prod coth((theta_l - eta_r)/2) M^odd(theta_hat) M^odd(eta_hat).
cplx boundary_term_sum(const std::vector<cplx>& theta, const std::vector<cplx>& eta);

// delta -> 0 limit of M^odd_{m+n}(theta, eta + i pi - i delta), extrapolated from
// delta = 1e-2 / 2^j, j = 0..5.
cplx modd_boundary_limit(const std::vector<cplx>& theta, const std::vector<cplx>& eta);

// Audit CSV: columns n, pairs, sign (indices printed 1-based).
void write_pairings_csv(std::ostream& os, int n);
// Audit CSV: columns m, n, k, pairs, sign.
void write_boundary_terms_csv(std::ostream& os, int m, int n);

}  // namespace isingops
