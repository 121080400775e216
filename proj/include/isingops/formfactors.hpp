#pragma once

#include <random>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "isingops/errors.hpp"
#include "isingops/fock.hpp"
#include "isingops/grid.hpp"
#include "isingops/meromfuncs.hpp"
#include "isingops/symlaurent.hpp"
#include "isingops/testfunction.hpp"

namespace isingops {

// Coefficient functions F_j of a local quadratic form.
//  Even{k, P, g}: F_{2k} = g~(p(zeta)) P(e^zeta) M^even_{2k}(zeta), all other F_j = 0.
//  Odd{P, g}:     F_{2k+1} = (2 pi i)^{-k} g~(p(zeta)) P(e^zeta) M^odd_{2k+1}(zeta), F_{2k} = 0,
//                 with P built from odd power sums only.
struct CoefficientFamily {
  enum class Variant { Even, Odd };
  Variant variant = Variant::Odd;
  int k = 0;
  SymLaurent P;
  TestFunction2D g;
  ModelParams model;

  static CoefficientFamily even(int k, SymLaurent P, TestFunction2D g, ModelParams model = {});
  static CoefficientFamily odd(SymLaurent P, TestFunction2D g, ModelParams model = {});

  bool is_odd() const { return variant == Variant::Odd; }
  // Whether F_j can be nonzero.
  bool nonzero_in(int j) const;
  // Constant in front of g~ P M for F_j: (2 pi i)^{-(j-1)/2} (odd) or 1 (even).
  cplx constant(int j) const;
  // The double cone O_r around the origin that contains supp g.
  double localization_radius() const;
  CoefficientFamily translated(const Point2& a) const;

  nlohmann::json to_json() const;
  static CoefficientFamily from_json(const nlohmann::json& j);
};

// g~(p(zeta)) with p(zeta) = mu sum_j (cosh zeta_j, sinh zeta_j).
cplx gtilde_at(const CoefficientFamily& fam, const std::vector<cplx>& zeta);

// F_j(zeta) for j = zeta.size(). Throws SingularityError near a pole of M^odd.
cplx F_eval(const CoefficientFamily& fam, const std::vector<cplx>& zeta);

// A residual together with the magnitude it should be compared against.
struct Residual {
  double residual = 0.0;
  double scale = 0.0;
  double relative() const { return scale > 0.0 ? residual / scale : residual; }
};

// |F(zeta) + F(zeta with zeta_j, zeta_{j+1} swapped)|; j is 0-based.
Residual fd2_check(const CoefficientFamily& fam, const std::vector<cplx>& zeta, int j);
// |F(zeta_1..zeta_{k-1}, zeta_k + 2 pi i) - F(zeta_k, zeta_1..zeta_{k-1})|.
Residual fd3_check(const CoefficientFamily& fam, const std::vector<cplx>& zeta);

struct ResidueCheck {
  cplx numeric;  // eps-extrapolated
  cplx contour;  // 8-point circle audit
  cplx target;
  double residual = 0.0;
  double scale = 0.0;
};
// Residue of F_{k} at zeta_2 - zeta_1 = i pi (in zeta_2) against
// -(1/2 pi i)(1 - prod_j S(zeta_1 - zeta_j)) F_{k-2}(tail), i.e. -(1/pi i) F_{k-2} (odd) or 0 (even).
ResidueCheck fd4_check(const CoefficientFamily& fam, cplx zeta1, const std::vector<cplx>& tail);

// Cauchy-formula check of analyticity: F(zeta) against the trapezoid contour integral over
// the circle of given radius in variable j. The disk must lie inside the analyticity tube.
Residual fd1_check(const CoefficientFamily& fam, const std::vector<cplx>& zeta, int j, double radius,
                   int nodes = 64);

// Euclidean distance of lambda from the boundary of I^k_+ (lambda increasing in (0, pi)).
double tube_boundary_distance(const std::vector<double>& lambda);

struct EnvelopeFit {
  int k = 0;
  double c = 0.0;
  double c_prime = 0.0;
  double r = 0.0;
  int fit_samples = 0;
  int validation_samples = 0;
  int violations = 0;
  double max_validation_ratio = 0.0;  // max |F| / envelope over validation samples, divided by c
};
// Safety factor applied to the estimated supremum when fitting c.
inline constexpr double kEnvelopeMargin = 1.05;

// |F_k| <= c dist(Im zeta, boundary)^{-k/2} prod exp(mu r |Im sinh zeta_j| + c' omega(cosh Re zeta_j)).
// Half of the samples (bulk, boundary-approaching, |Re| <= 5) fit c: the largest ratios are
// refined by pattern search and c is kEnvelopeMargin times the result. The other half,
// drawn the same way, counts violations.
EnvelopeFit fd6_check(const CoefficientFamily& fam, int k, const Indicatrix& omega, double c_prime,
                      int samples, std::mt19937_64& rng);

// One delta contribution of the boundary kernel: the listed cross pairs (theta index, eta index),
// both 0-based, are collapsed to theta_l = eta_r.
struct DeltaTerm {
  std::vector<std::pair<int, int>> pairs;
};

// f_{mn}(theta, eta) = F_{m+n}(theta + i0, eta + i pi - i0) split into a principal-value part and
// delta terms, using coth((x + i0)/2) = PV coth(x/2) - 2 pi i delta(x) on every cross factor.
class BoundaryKernel {
public:
  BoundaryKernel(const CoefficientFamily& fam, int m, int n);

  int m() const { return m_; }
  int n() const { return n_; }
  bool is_zero() const { return zero_; }
  const std::vector<BoundaryTerm>& terms() const { return terms_; }
  const std::vector<DeltaTerm>& delta_terms() const { return deltas_; }

  // F_{m+n}(theta, eta + i pi) at real points off the diagonals theta_l = eta_r.
  cplx pv(const std::vector<double>& theta, const std::vector<double>& eta) const;
  // F_{m+n}(theta + i eps, eta + i pi - i eps).
  cplx regularized(const std::vector<double>& theta, const std::vector<double>& eta, double eps) const;
  // Reduced kernel of a delta term, including its (-2 pi i)^{|S|} weight; the caller passes
  // theta and eta with theta_l = eta_r already imposed for the collapsed pairs.
  cplx delta_value(const DeltaTerm& S, const std::vector<double>& theta, const std::vector<double>& eta) const;
  // The same decomposition written out term by term (audit path for pv()).
  cplx pv_from_terms(const std::vector<double>& theta, const std::vector<double>& eta) const;

  // Smooth prefactor constant * g~(p(theta) - p(eta)) * P(e^theta, -e^eta).
  cplx prefactor(const std::vector<double>& theta, const std::vector<double>& eta) const;

private:
  CoefficientFamily fam_;
  int m_ = 0;
  int n_ = 0;
  bool zero_ = false;
  std::vector<BoundaryTerm> terms_;
  std::vector<DeltaTerm> deltas_;
};

BoundaryKernel boundary_kernel(const CoefficientFamily& fam, int m, int n);

// (A Omega)_m = f_{m,0} / sqrt(m!) on the grid (ordered-tuple storage of sector m).
FockVector vacuum_components(const CoefficientFamily& fam, int m, GridPtr grid, int nmax);

// The polynomial -(i/8) mu^2 (x1 x2 + 1/(x1 x2) + 2) in the power-sum basis.
SymLaurent energy_density_polynomial(double mu);
// -i mu^2 sinh((z1 - z2)/2) sinh^2((z1 + z2)/2) g~(p(z)) as printed.
cplx edensity_stated(const std::vector<cplx>& zeta, const TestFunction2D& g, const ModelParams& model);
// The even family k = 1 with energy_density_polynomial; equals the stated form with cosh^2.
cplx edensity_from_polynomial(const std::vector<cplx>& zeta, const TestFunction2D& g, const ModelParams& model);

}  // namespace isingops
