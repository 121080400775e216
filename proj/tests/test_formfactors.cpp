#include <cmath>
#include <random>

#include "doctest.h"
#include "isingops/formfactors.hpp"

using namespace isingops;

namespace {

const TestFunction2D kG = TestFunction2D::spline({0.0, 0.0}, 0.5, 8);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

std::vector<cplx> random_zeta(std::mt19937_64& rng, int n, double re, double im) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<cplx> z(n);
  for (auto& v : z) v = cplx(re * U(rng), im * U(rng));
  return z;
}

}  // namespace

TEST_CASE("spline transform: closed form against quadrature") {
  const TestFunction2D f = TestFunction2D::spline({0.2, -0.1}, 0.6, 6, cplx(1.0, 0.5));
  for (const auto& p : std::vector<std::pair<cplx, cplx>>{{1.0, 0.3}, {cplx(1.2, 0.4), cplx(-0.5, 0.2)}, {0.0, 0.0}})
    CHECK(rel(f.transform(p.first, p.second), f.transform_quadrature(p.first, p.second)) < 1e-8);
  CHECK(std::abs(centered_bspline_ft(0.0, 0.6, 6) - 1.0) < 1e-15);
}

TEST_CASE("F_1 of the odd family with P = 1 is g~ at the mass shell") {
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  for (double t : {-1.0, 0.0, 0.7}) {
    const std::vector<cplx> z = {cplx(t, 0.2)};
    CHECK(rel(F_eval(fam, z), gtilde_at(fam, z)) < 1e-15);
  }
  CHECK(fam.nonzero_in(3));
  CHECK_FALSE(fam.nonzero_in(2));
  CHECK(std::abs(fam.constant(3) - 1.0 / (2.0 * kPi * kI)) < 1e-15);
}

TEST_CASE("even families vanish outside j = 2k") {
  const auto fam = CoefficientFamily::even(1, energy_density_polynomial(1.0), kG);
  CHECK(F_eval(fam, {0.1, 0.2, 0.3}) == cplx(0.0));
  CHECK(F_eval(fam, {cplx(0.1)}) == cplx(0.0));
  CHECK(std::abs(F_eval(fam, {0.1, -0.4})) > 0.0);
}

TEST_CASE("odd family requires Lambda_I coefficients") {
  CHECK_THROWS_AS(CoefficientFamily::odd(SymLaurent::power_sum(2), kG), InvalidArgument);
}

TEST_CASE("property: exchange and cyclic relations for odd families") {
  std::mt19937_64 rng(41);
  const auto fam = CoefficientFamily::odd(
      SymLaurent::power_sum(1) * SymLaurent::power_sum(-1) + SymLaurent::power_sum(3), kG);
  for (int j : {2, 3, 5})
    for (int t = 0; t < 20; ++t) {
      const auto z = random_zeta(rng, j, 1.5, 1.2);
      CHECK(fd2_check(fam, z, t % (j - 1)).relative() < 1e-10);
      CHECK(fd3_check(fam, z).relative() < 1e-10);
    }
}

TEST_CASE("residue of F_3 is -(1/pi i) F_1") {
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  const ResidueCheck rc = fd4_check(fam, cplx(0.2, 0.1), {cplx(-0.6, 0.3)});
  CHECK(rel(rc.target, -1.0 / (kPi * kI) * F_eval(fam, {cplx(-0.6, 0.3)})) < 1e-14);
  CHECK(rc.residual < 1e-6 * rc.scale);
  CHECK(std::abs(rc.contour - rc.target) < 1e-8 * rc.scale);
  const auto ev = CoefficientFamily::even(1, energy_density_polynomial(1.0), kG);
  CHECK(fd4_check(ev, cplx(0.3, 0.0), {}).target == cplx(0.0));
}

TEST_CASE("analyticity via the Cauchy mean") {
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  const std::vector<cplx> z = {cplx(0.1, 0.5), cplx(-0.3, 1.5), cplx(0.4, 2.6)};
  CHECK(fd1_check(fam, z, 1, 0.3).relative() < 1e-10);
}

TEST_CASE("envelope fit has no violations on the odd family") {
  std::mt19937_64 rng(42);
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  const EnvelopeFit fit = fd6_check(fam, 3, Indicatrix::power_type(0.5), 1.0, 200, rng);
  CHECK(fit.c > 0.0);
  CHECK(fit.violations == 0);
}

TEST_CASE("boundary kernel: PV value, term audit and delta limit") {
  const auto fam = CoefficientFamily::odd(SymLaurent::power_sum(1), kG);
  const BoundaryKernel K(fam, 2, 1);
  const std::vector<double> th = {0.3, -0.9}, et = {0.8};
  const cplx pv = K.pv(th, et);
  CHECK(rel(pv, K.pv_from_terms(th, et)) < 1e-12);
  std::vector<double> h = {1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4};
  std::vector<cplx> v;
  for (double d : h) v.push_back(K.regularized(th, et, d));
  CHECK(rel(richardson_to_zero(h, v), pv) < 1e-8);
  CHECK(K.delta_terms().size() == 2);
  const BoundaryKernel E(CoefficientFamily::even(1, energy_density_polynomial(1.0), kG), 1, 1);
  CHECK(E.delta_terms().empty());
}

TEST_CASE("vacuum components in sector 1 are F_1 on the grid") {
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  const GridPtr g = make_grid(12, 4.0);
  const FockVector v = vacuum_components(fam, 1, g, 2);
  for (int i = 0; i < g->size(); ++i) CHECK(rel(v.sector(1)[i], F_eval(fam, {g->node(i)})) < 1e-14);
}

TEST_CASE("energy density: stated and polynomial forms differ by tanh^2") {
  const std::vector<cplx> z = {cplx(0.3, 0.2), cplx(-0.5, 0.1)};
  const cplx a = edensity_stated(z, kG, ModelParams{}), b = edensity_from_polynomial(z, kG, ModelParams{});
  const cplx t = std::tanh(0.5 * (z[0] + z[1]));
  CHECK(rel(a, b * t * t) < 1e-13);
  CHECK(rel(a, b) > 0.1);
}

TEST_CASE("family JSON round trip") {
  const auto fam = CoefficientFamily::odd(SymLaurent::power_sum(-1), kG.translated({0.1, 0.2}));
  const auto back = CoefficientFamily::from_json(fam.to_json());
  CHECK(back.is_odd());
  CHECK(back.P.terms() == fam.P.terms());
  const std::vector<cplx> z = {cplx(0.2, 0.1), cplx(-0.3, 1.1), cplx(0.5, 2.0)};
  CHECK(rel(F_eval(back, z), F_eval(fam, z)) < 1e-14);
  CHECK_THROWS_AS(CoefficientFamily::from_json(nlohmann::json{{"variant", "bogus"}}), InvalidArgument);
}
