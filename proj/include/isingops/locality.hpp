#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "isingops/contraction.hpp"
#include "isingops/fock.hpp"
#include "isingops/formfactors.hpp"

namespace isingops {

struct CommutatorResult {
  cplx lhs = 0.0;  // <psi, A phi(f) chi>
  cplx rhs = 0.0;  // <phi(conj f) psi, A chi>
  cplx residual = 0.0;
  double scale = 0.0;  // l1 sum of the block contributions on both sides
  double relative() const { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }
};

// <psi, [A, phi(f)] chi> for every f and state pair, sharing one kernel pass. The states need
// one sector of headroom (nmax above their highest occupied sector) so that phi(f) does not
// truncate. Result index: [f][pair].
std::vector<std::vector<CommutatorResult>> commutator_residuals(
    const CoefficientFamily& fam, const std::vector<TestFunction2D>& fs,
    const std::vector<std::pair<const FockVector*, const FockVector*>>& states, bool parallel = true);

CommutatorResult commutator_residual(const CoefficientFamily& fam, const TestFunction2D& f, const FockVector& psi,
                                     const FockVector& chi, bool parallel = true);

// Superpositions of Gaussian Slater states in sectors 0..top (stored with nmax = top + 1).
std::vector<FockVector> wavepacket_states(GridPtr grid, int top, int count, double width, unsigned long seed);

// Test function supported in the left wedge spacelike to the double cone of the family,
// separated from it by `gap`.
TestFunction2D spacelike_test_function(const CoefficientFamily& fam, double half_width, double gap, int order = 8);
// Test function overlapping the family's localization region (center shifted in time by
// 0.6 times its radius).
TestFunction2D overlapping_test_function(const CoefficientFamily& fam, double half_width, int order = 8);

struct LocalityConfig {
  int nodes = 64;
  int coarse_nodes = 32;
  double cutoff = 4.5;
  int top_sector = 2;
  int state_pairs = 2;
  double width = 0.5;
  double tolerance = 1e-6;
  double control_threshold = 1e-2;
  double halving_factor = 4.0;
  double noise_floor = 1e-12;
  unsigned long seed = 1;
  bool parallel = true;
};

struct LocalityStudy {
  std::vector<double> fine_relative;    // per state pair
  std::vector<double> coarse_relative;
  std::vector<double> control_relative;  // fine grid, overlapping f
  double worst_fine = 0.0;
  double worst_coarse = 0.0;
  double min_halving_ratio = 0.0;  // coarse / fine over pairs not at the noise floor
  double min_control = 0.0;
  bool spacelike_pass = false;
  bool halving_pass = false;
  bool control_pass = false;
  nlohmann::json to_json() const;
};

// Grid-refinement study of the commutator for wedge-spacelike f and an overlapping control.
LocalityStudy locality_study(const CoefficientFamily& fam, const TestFunction2D& f_spacelike,
                             const TestFunction2D& f_overlap, const LocalityConfig& cfg);

}  // namespace isingops
