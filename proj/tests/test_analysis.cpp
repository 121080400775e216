#include <cmath>

#include "doctest.h"
#include "isingops/analysis.hpp"

using namespace isingops;

namespace {

const TestFunction2D kG = TestFunction2D::spline({0.0, 0.0}, 0.5, 8);

}  // namespace

TEST_CASE("indicatrices") {
  CHECK(Indicatrix::zero()(5.0) == 0.0);
  CHECK(std::abs(Indicatrix::power_type(0.5)(4.0) - 2.0) < 1e-15);
  CHECK(std::abs(Indicatrix::log_type(2.0)(std::exp(1.0) - 1.0) - 2.0) < 1e-14);
  CHECK_THROWS_AS(Indicatrix::power_type(1.5), InvalidArgument);
  const auto w = Indicatrix::from_json(Indicatrix::power_type(0.3).to_json());
  CHECK(w.kind == Indicatrix::Kind::Power);
  CHECK(w.param == 0.3);
}

TEST_CASE("rank-one dense kernel norm is the product of L2 norms") {
  const RapidityGrid g(20, 4.0);
  DenseKernel K(1, 1, g.size());
  double na = 0.0, nb = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double a = std::exp(-g.node(i) * g.node(i)), b = 1.0 / std::cosh(g.node(i));
    na += g.weight(i) * a * a;
    nb += g.weight(i) * b * b;
    for (int j = 0; j < g.size(); ++j) K(i, j) = a * (1.0 / std::cosh(g.node(j)));
  }
  CHECK(std::abs(kernel_opnorm(K, g) - std::sqrt(na * nb)) < 1e-12 * std::sqrt(na * nb));
  CHECK(kernel_opnorm(DenseKernel(1, 1, g.size()), g) == 0.0);
}

TEST_CASE("omega norms are bounded by the plain norm") {
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  const GridPtr g = make_grid(16, 4.0);
  const GridKernel K(fam, 2, 1, g);
  const KernelNorms n0 = grid_kernel_norms(K, Indicatrix::zero());
  const KernelNorms n1 = grid_kernel_norms(K, Indicatrix::power_type(0.5));
  CHECK(std::abs(n0.omega() - n0.plain) < 1e-10 * n0.plain);
  CHECK(n1.omega() <= n0.plain * (1.0 + 1e-12));
  CHECK(std::abs(kernel_opnorm(K, true) - kernel_opnorm(K, false)) < 1e-10 * n0.plain);
}

TEST_CASE("even family series terminates") {
  const auto fam = CoefficientFamily::even(1, energy_density_polynomial(1.0), kG);
  const auto r = summability_scan(fam, Indicatrix::power_type(0.5), 0, 4, make_grid(12, 4.0));
  CHECK(r.terminates);
  int nonzero = 0;
  for (double t : r.terms) nonzero += t > 0.0;
  CHECK(nonzero == 1);
}

TEST_CASE("odd family terms eventually decrease") {
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  const auto r = summability_scan(fam, Indicatrix::power_type(0.5), 0, 5, make_grid(16, 4.0));
  CHECK_FALSE(r.terminates);
  CHECK(r.eventual_ratio_below_one);
  for (std::size_t i = 1; i < r.partial_sums.size(); ++i) CHECK(r.partial_sums[i] >= r.partial_sums[i - 1]);
}

TEST_CASE("kga kernels: calibrated bound on small blocks") {
  const KgaSpec spec{SymLaurent::constant(1.0), kG, 0.5, ModelParams{}};
  const RapidityGrid g(8, 4.0);
  const auto r = kernel_bound_check(spec, 2, 2, g);
  CHECK(r.c_L >= std::sqrt(kPi) - 1e-12);
  CHECK(r.violations == 0);
  CHECK_FALSE(r.checks.empty());
}

TEST_CASE("kga kernel: per-class evaluation agrees with the pointwise smooth part") {
  const KgaSpec spec{SymLaurent::power_sum(1) * SymLaurent::power_sum(-1) + SymLaurent::constant(0.5), kG, 0.5,
                     ModelParams{}};
  const RapidityGrid g(6, 3.0);
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 3}, {3, 2}}) {
    const DenseKernel K = kga_kernel(spec, m, n, 0, g);
    for (std::size_t r = 0; r < K.rows(); r += 5)
      for (std::size_t c = 0; c < K.cols(); c += 3) {
        std::vector<double> th(m), et(n);
        std::size_t q = r;
        for (int a = m - 1; a >= 0; --a, q /= 6) th[a] = g.node(static_cast<int>(q % 6));
        q = c;
        for (int b = n - 1; b >= 0; --b, q /= 6) et[b] = g.node(static_cast<int>(q % 6));
        const cplx ref = kga_smooth(spec, th, et);
        CHECK(std::abs(K(r, c) - ref) <= 1e-13 * (1.0 + std::abs(ref)));
      }
  }
}
