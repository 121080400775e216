#include <cmath>

#include "doctest.h"
#include "isingops/bookkeeping.hpp"
#include "isingops/boundary_grid.hpp"
#include "isingops/combinatorics.hpp"

using namespace isingops;

namespace {

const TestFunction2D kG = TestFunction2D::spline({0.0, 0.0}, 0.5, 8);

double left(int j, double x) {
  const double c = 0.2 - 0.6 * j;
  return std::exp(-(x - c) * (x - c) / (0.32 + 0.2 * j)) * (1.0 + 0.5 * x + 0.2 * j * x * x);
}

double right(int j, double x) {
  const double c = -0.1 + 0.5 * j;
  return std::exp(-(x - c) * (x - c) / (0.5 - 0.1 * j)) * (1.0 - 0.3 * x + 0.1 * j * x * x * x);
}

}  // namespace

TEST_CASE("delta bookkeeping matches the eps-regularized integral") {
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}}) {
    const BookkeepingResult r = bookkeeping_check(BoundaryKernel(fam, m, n), left, right);
    CAPTURE(m);
    CAPTURE(n);
    CHECK(r.relative() < 1e-6);
    CHECK(std::abs(r.delta_part) > 1e-3 * r.scale);  // the delta terms matter
  }
}

TEST_CASE("without the delta terms the split misses the regularized value") {
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  const BookkeepingResult r = bookkeeping_check(BoundaryKernel(fam, 1, 2), left, right);
  CHECK(std::abs(r.pv_part - r.extrapolated) > 1e3 * r.residual);
}

TEST_CASE("bookkeeping input validation") {
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  BookkeepingConfig c;
  c.panel_nodes = 5;
  CHECK_THROWS_AS(bookkeeping_check(BoundaryKernel(fam, 1, 2), left, right, c), InvalidArgument);
}

TEST_CASE("grid kernel without cross pairs is F on the grid") {
  const auto fam = CoefficientFamily::odd(SymLaurent::power_sum(1), kG);
  const GridPtr g = make_grid(10, 4.0);
  const GridKernel K(fam, 3, 0, g);
  const BoundaryKernel B(fam, 3, 0);
  int I[3] = {1, 4, 8};
  const std::vector<double> th = {g->node(1), g->node(4), g->node(8)};
  CHECK(std::abs(K.entry(I, nullptr) - B.pv(th, {})) < 1e-13 * std::abs(B.pv(th, {})));
}

TEST_CASE("grid kernel (2,1) against the contour-shifted integral") {
  // F(theta + i0, eta + i pi - i0) only sees the cross differences, and b is entire, so the
  // eta integral can run on Im eta = -0.3 where the integrand is smooth.
  const auto fam = CoefficientFamily::odd(SymLaurent::constant(1.0), kG);
  auto a1 = [](cplx x) { return std::exp(-(x - 0.3) * (x - 0.3)); };
  auto a2 = [](cplx x) { return std::exp(-0.7 * (x + 0.4) * (x + 0.4)) * (1.0 + 0.2 * x); };
  auto b = [](cplx x) { return std::exp(-0.8 * (x + 0.2) * (x + 0.2)) * (1.0 + 0.3 * x); };
  const double L = 5.0;

  std::vector<double> x, w, y, v;
  gauss_legendre(60, x, w);
  gauss_legendre(200, y, v);
  cplx shifted = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = i + 1; k < x.size(); ++k) {
      const double t1 = L * x[i], t2 = L * x[k];
      cplx inner = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j) {
        const cplx e(L * y[j], -0.3);
        inner += L * v[j] * b(e) * F_eval(fam, {cplx(t1), cplx(t2), e + cplx(0.0, kPi)});
      }
      shifted += L * L * w[i] * w[k] * (a1(t1) * a2(t2) - a1(t2) * a2(t1)) * inner;
    }
  const cplx frozen(0.0103416546482, 0.0635262903965);
  CHECK(std::abs(shifted - frozen) < 1e-11);

  for (int N : {32, 48}) {
    const GridPtr g = make_grid(N, L);
    const GridKernel K(fam, 2, 1, g);
    cplx val = 0.0;
    for (int i = 0; i < N; ++i)
      for (int k = i + 1; k < N; ++k)
        for (int j = 0; j < N; ++j) {
          int I[2] = {i, k}, J[1] = {j};
          const double t1 = g->node(i), t2 = g->node(k);
          val += g->weight(i) * g->weight(k) * g->weight(j) * (a1(t1) * a2(t2) - a1(t2) * a2(t1)) *
                 b(g->node(j)) * K.entry(I, J);
        }
    CAPTURE(N);
    CHECK(std::abs(val - frozen) < (N == 32 ? 1e-8 : 1e-11));
  }
}

TEST_CASE("colex combinations enumerate binomially many tuples") {
  int c[3];
  combo_first(c, 3);
  int count = 1;
  while (combo_next(c, 3, 7)) ++count;
  CHECK(count == 35);
  CHECK(binom(7, 3) == 35);
}
