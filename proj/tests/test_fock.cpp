#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "isingops/fock.hpp"

using namespace isingops;

namespace {

std::vector<cplx> random_h(const RapidityGrid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<cplx> h(g.size());
  for (int i = 0; i < g.size(); ++i) h[i] = cplx(N(rng), N(rng)) * std::exp(-0.25 * g.node(i) * g.node(i));
  return h;
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  double s0 = 0.0, s10 = 0.0;
  for (int i = 0; i < 6; ++i) {
    s0 += w[i];
    s10 += w[i] * std::pow(x[i], 10);
  }
  CHECK(std::abs(s0 - 2.0) < 1e-14);
  CHECK(std::abs(s10 - 2.0 / 11.0) < 1e-14);
}

TEST_CASE("vacuum, inner products, antisymmetric access") {
  const GridPtr g = make_grid(16, 4.0);
  const FockVector v = FockVector::vacuum(g, 3);
  CHECK(std::abs(v.norm() - 1.0) < 1e-15);
  std::mt19937_64 rng(31);
  const FockVector a = FockVector::random(g, 3, rng), b = FockVector::random(g, 3, rng);
  const double na = a.norm(), nb = b.norm();
  CHECK(std::abs(inner_product(a, a).real() - na * na) < 1e-10 * na * na);
  CHECK(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))) < 1e-12 * na * nb);
  CHECK((a - a).norm() == 0.0);
  CHECK(std::abs(a.at({3, 7}) + a.at({7, 3})) < 1e-15);
  CHECK(a.at({5, 5}) == cplx(0.0));
  CHECK(a.sector_size(2) == 16 * 15 / 2);
}

TEST_CASE("CAR relations on a 16-node grid") {
  const GridPtr g = make_grid(16, 4.0);
  std::mt19937_64 rng(32);
  for (int t = 0; t < 3; ++t) {
    const auto f = random_h(*g, rng), h = random_h(*g, rng);
    const FockVector psi = FockVector::random(g, 4, rng, 3);
    cplx fh = 0.0;
    for (int i = 0; i < g->size(); ++i) fh += g->weight(i) * f[i] * h[i];
    const FockVector lhs = z_apply(f, z_dagger_apply(h, psi)) + z_dagger_apply(h, z_apply(f, psi));
    CHECK((lhs - psi * fh).norm() < 1e-12 * (lhs.norm() + std::abs(fh) * psi.norm()));
    const FockVector zz = z_apply(f, z_apply(h, psi)) + z_apply(h, z_apply(f, psi));
    CHECK(zz.norm() < 1e-12 * psi.norm() * 10.0);
  }
}

TEST_CASE("z dagger is adjoint to z of the conjugate") {
  const GridPtr g = make_grid(12, 4.0);
  std::mt19937_64 rng(33);
  for (int t = 0; t < 10; ++t) {
    const auto f = random_h(*g, rng);
    std::vector<cplx> fc(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) fc[i] = std::conj(f[i]);
    const FockVector psi = FockVector::random(g, 4, rng, 3), chi = FockVector::random(g, 4, rng, 4);
    const cplx l = inner_product(z_dagger_apply(f, psi), chi), r = inner_product(psi, z_apply(fc, chi));
    CHECK(std::abs(l - r) < 1e-12 * (std::abs(l) + psi.norm() * chi.norm()));
  }
}

TEST_CASE("energy of a one-particle state") {
  const GridPtr g = make_grid(20, 4.0);
  const FockVector psi = FockVector::from_function(g, 2, 1, [](const std::vector<double>& t) {
    return cplx(std::exp(-t[0] * t[0]), 0.0);
  });
  double e = 0.0;
  for (int i = 0; i < g->size(); ++i) e += g->weight(i) * std::cosh(g->node(i)) * std::exp(-2.0 * g->node(i) * g->node(i));
  ModelParams mp;
  mp.mu = 2.0;
  CHECK(std::abs(energy_expectation(psi, mp) - 2.0 * e) < 1e-12 * e);
}

TEST_CASE("property: energy is at least mu times the lowest occupancy") {
  const GridPtr g = make_grid(12, 4.0);
  std::mt19937_64 rng(34);
  for (int t = 0; t < 20; ++t) {
    FockVector psi = FockVector::random(g, 3, rng, 3);
    const int lo = 1 + t % 3;
    for (int n = 0; n < lo; ++n) std::fill(psi.sector(n).begin(), psi.sector(n).end(), cplx(0.0));
    CHECK(energy_expectation(psi, ModelParams{}) >= lo * psi.norm() * psi.norm() * (1.0 - 1e-12));
  }
}

TEST_CASE("reflection is an anti-unitary involution") {
  const GridPtr g = make_grid(10, 4.0);
  std::mt19937_64 rng(35);
  const FockVector a = FockVector::random(g, 3, rng);
  const FockVector r = reflect(a);
  CHECK(std::abs(r.norm() - a.norm()) < 1e-12 * a.norm());
  CHECK((reflect(r) - a).norm() < 1e-13 * a.norm());
}

TEST_CASE("translations act by a phase") {
  const GridPtr g = make_grid(16, 4.0);
  std::mt19937_64 rng(36);
  const FockVector a = FockVector::random(g, 2, rng);
  const FockVector b = poincare_transform(a, {0.3, -0.7}, 0.0, ModelParams{});
  CHECK(std::abs(b.norm() - a.norm()) < 1e-12 * a.norm());
  CHECK((poincare_transform(b, {-0.3, 0.7}, 0.0, ModelParams{}) - a).norm() < 1e-12 * a.norm());
}

TEST_CASE("omega weights undo each other") {
  const GridPtr g = make_grid(10, 4.0);
  std::mt19937_64 rng(37);
  const FockVector a = FockVector::random(g, 3, rng);
  const Indicatrix w = Indicatrix::power_type(0.5);
  CHECK((omega_weight(omega_weight(a, w, 1), w, -1) - a).norm() < 1e-12 * a.norm());
  CHECK(omega_weight(a, w, -1).norm() <= a.norm());
  CHECK_THROWS_AS(omega_weight(a, w, 0), InvalidArgument);
}

TEST_CASE("binary round trip at single precision") {
  const GridPtr g = make_grid(8, 3.0);
  std::mt19937_64 rng(38);
  const FockVector a = FockVector::random(g, 2, rng);
  std::stringstream ss;
  a.write_binary(ss);
  const FockVector b = FockVector::read_binary(ss);
  CHECK(b.nmax() == 2);
  CHECK(b.grid().size() == 8);
  CHECK((b - a).norm() < 1e-6 * a.norm());
}
