#pragma once

#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "isingops/boundary_grid.hpp"
#include "isingops/fock.hpp"
#include "isingops/formfactors.hpp"

namespace isingops {

// Smaller side of a Gram matrix that may be formed explicitly.
inline constexpr std::size_t kGramLimit = 4096;

struct KernelNorms {
  double plain = 0.0;
  double omega_left = 0.0;   // || e^{-omega(E(theta))} K ||
  double omega_right = 0.0;  // || K e^{-omega(E(eta))} ||
  double omega() const { return 0.5 * (omega_left + omega_right); }
};

// Norms of a grid kernel that is antisymmetric in theta and in eta: sqrt(m! n!) times the
// largest singular value of sqrt(W_I) K(I, J) sqrt(W_J) over ordered tuples.
KernelNorms grid_kernel_norms(const GridKernel& K, const Indicatrix& omega, bool parallel = true);
double kernel_opnorm(const GridKernel& K, bool parallel = true);
double omega_norm(const GridKernel& K, const Indicatrix& omega, bool parallel = true);

// Dense kernels on grid^m x grid^n (no symmetry assumed): largest singular value of
// sqrt(W) K sqrt(W) with full tuple weights.
KernelNorms dense_kernel_norms(const DenseKernel& K, const RapidityGrid& grid, const Indicatrix& omega);
double kernel_opnorm(const DenseKernel& K, const RapidityGrid& grid);
double omega_norm(const DenseKernel& K, const RapidityGrid& grid, const Indicatrix& omega);

struct NormReport {
  int m = 0;
  int n = 0;
  double plain = 0.0;
  double omega = 0.0;
  int nodes = 0;
  double cutoff = 0.0;
  double refined_delta = -1.0;  // |omega norm on the refined grid - omega norm|, -1 if not computed
  nlohmann::json to_json() const;
};

// omega norm of f_{mn}, with the refined-grid difference when `refined_nodes` > 0.
NormReport norm_report(const CoefficientFamily& fam, int m, int n, const Indicatrix& omega, GridPtr grid,
                       int refined_nodes = 0, bool parallel = true);

struct SummabilityReport {
  int n = 0;
  double epsilon = 0.4;
  std::vector<int> m;
  std::vector<double> norm_mn;  // ||f_mn||^omega
  std::vector<double> norm_nm;
  std::vector<double> terms;    // t_m = 2^{m/2}/sqrt(m!) (||f_mn|| + ||f_nm||)
  std::vector<double> partial_sums;
  std::vector<double> ratios;   // t at consecutive nonzero terms
  double envelope_c = 0.0;      // fitted on the leading terms
  int envelope_fit_terms = 0;
  int envelope_violations = 0;  // later terms exceeding c^{m+1} m^{eps m}
  bool eventual_ratio_below_one = false;
  int stirling_threshold = -1;  // first m where the envelope series ratio drops below 1
  bool terminates = false;      // only finitely many nonzero terms (even family)
  nlohmann::json to_json() const;
};

SummabilityReport summability_scan(const CoefficientFamily& fam, const Indicatrix& omega, int n, int m_max,
                                   GridPtr grid, double epsilon = 0.4, bool parallel = true);

struct DoubleSumReport {
  int max_index = 0;
  std::vector<std::vector<double>> weighted;  // 2^{(m+n)/2}/sqrt(m! n!) ||f_mn||^omega
  double total = 0.0;
  double last_shell = 0.0;  // contribution of the shell max(m, n) = max_index
  nlohmann::json to_json() const;
};
DoubleSumReport summable2_scan(const CoefficientFamily& fam, const Indicatrix& omega, int max_index, GridPtr grid,
                               bool parallel = true);

// Kernels h(theta, eta) prod_{j <= l} coth((theta_j - eta_j + i0)/2) with
// h = P(e^theta, e^{-eta}) g~(p(theta) - p(eta)) exp(-E(eta)^alpha).
struct KgaSpec {
  SymLaurent P;
  TestFunction2D g;
  double alpha = 0.5;
  ModelParams model;
};
cplx kga_smooth(const KgaSpec& spec, const std::vector<double>& theta, const std::vector<double>& eta);
DenseKernel kga_kernel(const KgaSpec& spec, int m, int n, int l, const RapidityGrid& grid);
// max over J subset {1..l} of sup over grid points of |d_J h| prod sqrt(1+theta^2) sqrt(1+eta^2),
// with mixed derivatives by central differences.
double kga_rhs_sup(const KgaSpec& spec, int m, int n, int l, const RapidityGrid& grid);

struct BoundCheck {
  int m = 0;
  int n = 0;
  int l = 0;
  double lhs = 0.0;
  double sup = 0.0;
  double rhs = 0.0;
  bool pass = false;
};
struct BoundCheckReport {
  double c_L = 0.0;  // calibrated on (1, 1, l = 1), floored at sqrt(pi)
  std::vector<BoundCheck> checks;
  int violations = 0;
  double envelope_c = 0.0;  // smallest c with ||K|| <= c^{m+n+1} m^{eps m} n^{eps n} on all checks
  double epsilon = 0.4;
  nlohmann::json to_json() const;
};
BoundCheckReport kernel_bound_check(const KgaSpec& spec, int max_mn, int max_l, const RapidityGrid& grid,
                                    double epsilon = 0.4);

}  // namespace isingops
