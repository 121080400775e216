#pragma once

#include <functional>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "isingops/errors.hpp"

namespace isingops {

// The variables x_i = e^{zeta_i} at which a symmetric Laurent function is
// evaluated. All entries must be nonzero.
using VariableVector = std::vector<cplx>;

// Element of the algebra of symmetric Laurent functions, stored in the
// power-sum basis: each term is a coefficient times a product of power sums
// p_k = sum_i x_i^k with nonzero k. The generator list of a term is a sorted
// multiset; the empty list is the constant term.
class SymLaurent {
public:
  using Gens = std::vector<int>;

  SymLaurent() = default;

  static SymLaurent constant(cplx c);
  static SymLaurent power_sum(int k);
  static SymLaurent monomial(Gens gens, cplx c = 1.0);

  // Adds c * prod p_{gens}; merges with an existing term and drops exact zeros.
  void add_term(Gens gens, cplx c);

  const std::map<Gens, cplx>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Largest sum of |k| over the generators of a term (homogeneity bound).
  int degree() const;

  SymLaurent operator+(const SymLaurent& o) const;
  SymLaurent operator-(const SymLaurent& o) const;
  SymLaurent operator*(const SymLaurent& o) const;
  SymLaurent operator*(cplx c) const;

  nlohmann::json to_json() const;
  static SymLaurent from_json(const nlohmann::json& j);

private:
  std::map<Gens, cplx> terms_;
};

cplx eval(const SymLaurent& P, const VariableVector& x);

// P flattened for inner loops: the caller supplies the power sums p_k for
// k = powers()[0], powers()[1], ... and gets P back without allocation.
class PreparedLaurent {
public:
  PreparedLaurent() = default;
  explicit PreparedLaurent(const SymLaurent& P);
  const std::vector<int>& powers() const { return ks_; }
  cplx eval_powersums(const cplx* ps) const;

private:
  std::vector<int> ks_;
  std::vector<cplx> coef_;
  std::vector<std::vector<int>> slots_;  // per term: positions into ks_
};

bool is_ising_invariant(const SymLaurent& P);

// sigma_k(x) by coefficient extraction from prod_i (1 + x_i t).
cplx elementary_sigma(int k, const VariableVector& x);
// sigma_0 .. sigma_{len(x)}.
std::vector<cplx> elementary_sigmas(const VariableVector& x);

// I_{2s+1}: determinant of the (s+1)x(s+1) matrix of elementary symmetric
// polynomials, evaluated numerically with partial pivoting. Supports 0 <= s <= 8.
cplx I_eval(int s, const VariableVector& x);
// I_{-2s-1}(x) = I_{2s+1}(1/x).
cplx I_eval_negative(int s, const VariableVector& x);
// J_{2s+1}: s x s Hankel determinant of odd I-values, s >= 1.
cplx J_eval(int s, const VariableVector& x);

// Exact path for integer variable vectors.
using BigInt = boost::multiprecision::cpp_int;
BigInt elementary_sigma_exact(int k, const std::vector<BigInt>& x);
BigInt I_eval_exact(int s, const std::vector<BigInt>& x);
BigInt J_eval_exact(int s, const std::vector<BigInt>& x);

// Monomial expansion of I_{2s+1} in n variables: exponent vector -> coefficient.
std::map<std::vector<int>, BigInt> I_monomial_coefficients(int s, int n);

// d/dzeta_J of P(e^zeta) for a set J of distinct 0-based indices.
cplx partial_derivative_eval(const SymLaurent& P, const std::vector<int>& J,
                             const std::vector<cplx>& zeta);

// All Lambda_I monomials (products of odd power sums p_{+-1}, p_{+-3}, ...)
// whose total degree sum |k| is at most `degree`.
std::vector<SymLaurent::Gens> ising_monomials(int degree);

struct ApproxTarget {
  int nvars;
  std::function<cplx(const std::vector<double>&)> f;
};

struct ApproxResult {
  SymLaurent P;
  double sup_error = 0.0;
  int degree = 0;
  int basis_size = 0;
};

// Ridge-regularized least squares fit of P(e^theta) to all targets on
// tensor sample grids in [-r, r]^j. The returned error is the best sup error
// over the nested bases of degree <= `degree`, so it is non-increasing.
ApproxResult approximate_on_box(const std::vector<ApproxTarget>& targets, int degree,
                                double r, int samples_per_dim = 7);

struct GrowthFit {
  double a = 0.0;        // smallest a fitting the calibration sample
  double b = 0.0;        // degree(P)
  double a_bound = 0.0;  // a constant for which a^n E^b provably dominates
  int samples = 0;
  int violations = 0;  // validation samples exceeding a_bound^n E^b
  double max_validation_ratio = 0.0;  // max |d_J P| / (a^n E^b) on the validation sample
};

// Fits |d_J P(e^zeta)| <= a^n E(Re zeta)^b with b = degree(P) over random real
// zeta (n <= max_n), then checks an independent, wider sample against the
// explicit constant a_bound = max(1, sum_terms |c| prod_f 2^{|k_f|} max(1,|k_f|))
// times the largest number of factors in a term.
GrowthFit fit_derivative_growth(const SymLaurent& P, int max_n, int samples,
                                unsigned long seed);

}  // namespace isingops
