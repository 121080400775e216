#include <cmath>
#include <random>

#include "doctest.h"
#include "isingops/contraction.hpp"
#include "isingops/locality.hpp"
#include "isingops/reeh_schlieder.hpp"

using namespace isingops;

namespace {

const TestFunction2D kG = TestFunction2D::spline({0.0, 0.0}, 0.5, 8);

}  // namespace

TEST_CASE("block contraction: OpenMP kernel against the serial reference") {
  const GridPtr g = make_grid(10, 4.0);
  std::mt19937_64 rng(51);
  const auto odd = CoefficientFamily::odd(SymLaurent::power_sum(1), kG);
  const auto even = CoefficientFamily::even(1, energy_density_polynomial(1.0), kG);
  const FockVector a = FockVector::random(g, 4, rng), b = FockVector::random(g, 4, rng);
  const FockVector c = FockVector::random(g, 4, rng, 2);
  const std::vector<StatePair> pairs = {{&a, &b}, {&c, &a}, {&b, &b}};
  for (const auto& [fam, m, n] : std::vector<std::tuple<CoefficientFamily, int, int>>{
           {odd, 1, 0}, {odd, 2, 1}, {odd, 1, 2}, {odd, 2, 3}, {even, 1, 1}, {even, 2, 0}}) {
    const GridKernel K(fam, m, n, g);
    const auto fast = block_elements(K, pairs, true);
    const auto ref = block_elements_serial(K, pairs);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      CAPTURE(m);
      CAPTURE(n);
      CHECK(std::abs(fast[p] - ref[p]) <= 1e-12 * (1.0 + std::abs(ref[p])));
    }
  }
}

TEST_CASE("quadratic form elements do not depend on the parallel switch") {
  const GridPtr g = make_grid(12, 4.0);
  std::mt19937_64 rng(52);
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  const FockVector a = FockVector::random(g, 3, rng), b = FockVector::random(g, 3, rng);
  const cplx p = quadratic_form_element(fam, a, b, true), s = quadratic_form_element(fam, a, b, false);
  CHECK(std::abs(p - s) <= 1e-12 * std::abs(s));
}

TEST_CASE("odd family: zero vacuum expectation, one-particle element is F_1") {
  const GridPtr g = make_grid(16, 4.0);
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  const FockVector vac = FockVector::vacuum(g, 2);
  CHECK(std::abs(quadratic_form_element(fam, vac, vac)) < 1e-15);
  std::mt19937_64 rng(53);
  const FockVector psi = gaussian_state(g, 2, 1, 0.2, 0.7, rng);
  const cplx lhs = quadratic_form_element(fam, psi, vac);
  const cplx rhs = inner_product(psi, vacuum_components(fam, 1, g, 2));
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
}

TEST_CASE("wedge geometry") {
  const DoubleCone O{{0.0, 0.0}, 0.5};
  const Wedge W = left_wedge_spacelike_to(O);
  CHECK(W.contains(Point2{0.0, -1.0}));
  CHECK_FALSE(W.contains(Point2{0.0, 0.0}));
  CHECK(W.contains(DoubleCone{{0.0, -1.2}, 0.5}));
  CHECK_FALSE(W.contains(DoubleCone{{0.3, -1.2}, 0.5}));
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  CHECK(W.contains(spacelike_test_function(fam, 0.5, 0.1).support()));
  CHECK(overlaps(overlapping_test_function(fam, 0.5).support(), kG.support()));
}

TEST_CASE("commutator: spacelike f is far below the overlapping control") {
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  const GridPtr g = make_grid(48, 4.5);
  const auto states = wavepacket_states(g, 1, 2, 0.5, 7);
  const FockVector& psi = states[0];
  const FockVector& chi = states[1];
  const auto near = commutator_residual(fam, spacelike_test_function(fam, 0.5, 0.1), psi, chi);
  const auto far = commutator_residual(fam, overlapping_test_function(fam, 0.5), psi, chi);
  CHECK(near.relative() < 1e-6);
  CHECK(far.relative() > 1e-2);
}

TEST_CASE("Reeh-Schlieder rank: single family rank one, sector one saturates") {
  const RapidityGrid grid(32, 4.0);
  const double rho = ball_radius_for(grid, 8);
  const auto one = reeh_schlieder_rank({CoefficientFamily::odd(SymLaurent::constant(1.0), kG)}, 1, rho, grid);
  CHECK(one.rank == 1);
  CHECK(one.target == 8);
  const auto sweep = rs_family_sweep(kG, 3, 4, 0.5);
  const auto r = reeh_schlieder_rank(sweep, 1, rho, grid);
  CHECK(r.rank == 8);
  CHECK(r.rank <= r.target);
}
