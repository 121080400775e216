#pragma once

#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "isingops/formfactors.hpp"

namespace isingops {

struct BookkeepingConfig {
  std::vector<double> eps = {0.02, 0.04, 0.06, 0.08, 0.1, 0.12, 0.14, 0.16, 0.18, 0.2};
  int outer_nodes = 6;      // per outer dimension; the identity holds pointwise in these
  double outer_cutoff = 4.0;
  int panel_nodes = 12;     // even, so that u = 0 is never a node
  double u_cutoff = 8.0;
  bool parallel = true;
};

struct BookkeepingResult {
  int m = 0;
  int n = 0;
  cplx split = 0.0;          // PV part plus delta terms
  cplx pv_part = 0.0;
  cplx delta_part = 0.0;
  cplx extrapolated = 0.0;   // regularized integrals taken to eps = 0
  std::vector<double> eps;
  std::vector<cplx> regularized;
  double residual = 0.0;
  double scale = 0.0;        // sum of |PV| and |delta| pieces over terms and subsets
  double relative() const { return scale > 0.0 ? residual / scale : residual; }
  nlohmann::json to_json() const;
};

// Integrates the singular part of the boundary kernel (terms with at least one cross pair)
// against the product test array prod_l left(l, theta_l) prod_r right(r, eta_r) in two ways
// (the slot index keeps the array from being symmetric, where the antisymmetric kernel would
// integrate to zero):
//  split:       PV coth on every cross factor (symmetric-pair quadrature) plus the delta terms
//               with their (-2 pi i)^{|S|} weights, evaluated at the collapsed points;
//  regularized: coth((x + 2 i eps)/2) on every cross factor, extrapolated to eps = 0.
// Each term is integrated in the coordinates u_j = theta_l - eta_r, v_j = eta_r.
BookkeepingResult bookkeeping_check(const BoundaryKernel& K, const std::function<double(int, double)>& left,
                                    const std::function<double(int, double)>& right, const BookkeepingConfig& cfg = {});

}  // namespace isingops
