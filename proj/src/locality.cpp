#include "isingops/locality.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace isingops {

std::vector<std::vector<CommutatorResult>> commutator_residuals(
    const CoefficientFamily& fam, const std::vector<TestFunction2D>& fs,
    const std::vector<std::pair<const FockVector*, const FockVector*>>& states, bool parallel) {
  std::vector<FockVector> work;
  work.reserve(2 * fs.size() * states.size());
  std::vector<StatePair> pairs;
  for (const auto& f : fs) {
    const TestFunction2D fc = f.conj();
    for (const auto& [psi, chi] : states) {
      work.push_back(phi_apply(f, *chi, fam.model));
      pairs.push_back({psi, &work.back()});
      work.push_back(phi_apply(fc, *psi, fam.model));
      pairs.push_back({&work.back(), chi});
    }
  }
  const auto el = quadratic_form_elements(fam, pairs, parallel);
  std::vector<std::vector<CommutatorResult>> out(fs.size(), std::vector<CommutatorResult>(states.size()));
  std::size_t k = 0;
  for (std::size_t a = 0; a < fs.size(); ++a)
    for (std::size_t p = 0; p < states.size(); ++p) {
      CommutatorResult& r = out[a][p];
      r.lhs = el[k].value;
      r.rhs = el[k + 1].value;
      r.residual = r.lhs - r.rhs;
      r.scale = el[k].abs_sum + el[k + 1].abs_sum;
      k += 2;
    }
  return out;
}

CommutatorResult commutator_residual(const CoefficientFamily& fam, const TestFunction2D& f, const FockVector& psi,
                                     const FockVector& chi, bool parallel) {
  return commutator_residuals(fam, {f}, {{&psi, &chi}}, parallel).front().front();
}

std::vector<FockVector> wavepacket_states(GridPtr grid, int top, int count, double width, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<FockVector> out;
  for (int c = 0; c < count; ++c) {
    FockVector v(grid, top + 1);
    for (int n = 0; n <= top; ++n) {
      const cplx a(nd(rng), nd(rng));
      v = v + gaussian_state(grid, top + 1, n, 0.0, width, rng) * a;
    }
    out.push_back(v * cplx(1.0 / v.norm()));
  }
  return out;
}

TestFunction2D spacelike_test_function(const CoefficientFamily& fam, double half_width, double gap, int order) {
  const DoubleCone O = fam.g.support();
  const Point2 c{O.center[0], O.center[1] - O.radius - gap - half_width};
  return TestFunction2D::spline(c, half_width, order);
}

TestFunction2D overlapping_test_function(const CoefficientFamily& fam, double half_width, int order) {
  // shifted in time: a centered f sits on a symmetry point where much of the commutator cancels
  const DoubleCone O = fam.g.support();
  return TestFunction2D::spline({O.center[0] + 0.6 * O.radius, O.center[1]}, half_width, order);
}

nlohmann::json LocalityStudy::to_json() const {
  return {{"fine_relative", fine_relative},     {"coarse_relative", coarse_relative},
          {"control_relative", control_relative}, {"worst_fine", worst_fine},
          {"worst_coarse", worst_coarse},         {"min_halving_ratio", min_halving_ratio},
          {"min_control", min_control},           {"spacelike_pass", spacelike_pass},
          {"halving_pass", halving_pass},         {"control_pass", control_pass}};
}

LocalityStudy locality_study(const CoefficientFamily& fam, const TestFunction2D& f_spacelike,
                             const TestFunction2D& f_overlap, const LocalityConfig& cfg) {
  LocalityStudy st;
  auto run = [&](int nodes, bool with_control) {
    const GridPtr grid = make_grid(nodes, cfg.cutoff);
    const auto states = wavepacket_states(grid, cfg.top_sector, 2 * cfg.state_pairs, cfg.width, cfg.seed);
    std::vector<std::pair<const FockVector*, const FockVector*>> sp;
    for (int p = 0; p < cfg.state_pairs; ++p) sp.emplace_back(&states[2 * p], &states[2 * p + 1]);
    std::vector<TestFunction2D> fs{f_spacelike};
    if (with_control) fs.push_back(f_overlap);
    return commutator_residuals(fam, fs, sp, cfg.parallel);
  };
  const auto fine = run(cfg.nodes, true);
  const auto coarse = run(cfg.coarse_nodes, false);
  st.min_halving_ratio = std::numeric_limits<double>::infinity();
  st.min_control = std::numeric_limits<double>::infinity();
  for (int p = 0; p < cfg.state_pairs; ++p) {
    const double f = fine[0][p].relative(), c = coarse[0][p].relative(), k = fine[1][p].relative();
    st.fine_relative.push_back(f);
    st.coarse_relative.push_back(c);
    st.control_relative.push_back(k);
    st.worst_fine = std::max(st.worst_fine, f);
    st.worst_coarse = std::max(st.worst_coarse, c);
    st.min_control = std::min(st.min_control, k);
    if (f > cfg.noise_floor) st.min_halving_ratio = std::min(st.min_halving_ratio, c / f);
  }
  st.spacelike_pass = st.worst_fine <= cfg.tolerance;
  st.halving_pass = st.min_halving_ratio >= cfg.halving_factor;
  st.control_pass = st.min_control >= cfg.control_threshold;
  if (!std::isfinite(st.min_halving_ratio)) st.min_halving_ratio = -1.0;  // every pair at the noise floor
  return st;
}

}  // namespace isingops
