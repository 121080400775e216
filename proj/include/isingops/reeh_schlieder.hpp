#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "isingops/fock.hpp"
#include "isingops/formfactors.hpp"

namespace isingops {

struct RankResult {
  int rank = 0;
  int target = 0;    // C(nodes in ball, m)
  int in_ball = 0;
  int families = 0;
  std::vector<double> singular_values;
};

// Numerical rank (threshold 1e-8 relative to the top singular value) of the vacuum components
// (A Omega)_m of the families, restricted to ordered tuples of grid nodes with |theta| <= rho.
// Each row is normalized first; families vanishing on the ball are dropped.
RankResult reeh_schlieder_rank(const std::vector<CoefficientFamily>& fams, int m, double rho, const RapidityGrid& grid,
                               double threshold = 1e-8);

// Radius halfway between the count-th and (count+1)-th smallest |node|.
double ball_radius_for(const RapidityGrid& grid, int count);

// Odd families P g for P over Lambda_I monomials of degree <= degree and g over `translates`
// translates of base_g (spacing `step` along the light-cone axes).
std::vector<CoefficientFamily> rs_family_sweep(const TestFunction2D& base_g, int degree, int translates, double step,
                                               const ModelParams& model = {});

struct RankSweepRow {
  int degree = 0;
  int translates = 0;
  int families = 0;
  int rank = 0;
};
struct RankSweep {
  int m = 0;
  int target = 0;
  std::vector<RankSweepRow> rows;
  int best_rank() const;
  nlohmann::json to_json() const;
};
RankSweep rank_sweep(const TestFunction2D& base_g, int m, const std::vector<int>& degrees,
                     const std::vector<int>& translate_counts, double step, const RapidityGrid& grid, int in_ball,
                     const ModelParams& model = {});

}  // namespace isingops
