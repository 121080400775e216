#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "isingops/meromfuncs.hpp"

using namespace isingops;

namespace {

std::vector<cplx> random_zeta(std::mt19937_64& rng, int n, double re, double im) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<cplx> z(n);
  for (auto& v : z) v = cplx(re * U(rng), im * U(rng));
  return z;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_CASE("pairing counts") {
  CHECK(all_pairings(2).size() == 1);
  CHECK(all_pairings(3).size() == 3);
  CHECK(all_pairings(4).size() == 3);
  CHECK(all_pairings(5).size() == 15);
  CHECK(all_pairings(6).size() == 15);
  CHECK(all_pairings(7).size() == 105);
  for (const auto& p : all_pairings(5)) CHECK(p.valid());
  CHECK(all_pairings(4).front().unpaired() == -1);
}

TEST_CASE("pairing signs") {
  Pairing id{4, {{0, 1}, {2, 3}}};
  CHECK(pairing_sign(id) == 1);
  Pairing cross{4, {{0, 2}, {1, 3}}};
  CHECK(pairing_sign(cross) == -1);
  Pairing nested{4, {{0, 3}, {1, 2}}};
  CHECK(pairing_sign(nested) == 1);
}

TEST_CASE("M^odd_2 is one tanh factor") {
  const cplx a(0.3, 0.2), b(-0.4, -0.1);
  CHECK(rel(modd_product({a, b}), std::tanh(0.5 * (a - b))) < 1e-15);
  CHECK(std::abs(modd_product({a}) - 1.0) < 1e-15);
  CHECK_THROWS_AS(modd_product({a, a + kI * kPi}), SingularityError);
}

TEST_CASE("property: pairing sum, Pfaffian and product agree") {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 7; ++n) {
    const auto P = all_pairings(n);
    for (int t = 0; t < 50; ++t) {
      const auto z = random_zeta(rng, n, 3.0, 1.2);
      double scale = 0.0;
      for (const auto& q : P) {
        cplx term = 1.0;
        for (const auto& [l, r] : q.pairs) term *= std::tanh(0.5 * (z[l] - z[r]));
        scale += std::abs(term);
      }
      const cplx prod = modd_product(z);
      CHECK(std::abs(modd_pairing_sum(z) - prod) / scale < 1e-12);
      CHECK(std::abs(modd_pfaffian(z) - prod) / scale < 1e-12);
    }
  }
}

TEST_CASE("residue routes agree") {
  std::mt19937_64 rng(22);
  for (int n : {2, 3, 5}) {
    const std::vector<cplx> tail = random_zeta(rng, n - 2, 2.0, 0.5);
    const cplx z1(3.0, 0.1);  // away from the tail
    const cplx target = modd_residue(n, tail);
    CHECK(rel(modd_residue_numeric(z1, tail), target) < 1e-6);
    CHECK(rel(modd_residue_contour(z1, tail), target) < 1e-8);
  }
  CHECK(std::abs(modd_residue(2, {}) + 2.0) < 1e-15);
}

TEST_CASE("richardson is exact on polynomials of low degree") {
  const std::vector<double> h = {0.1, 0.05, 0.025};
  std::vector<cplx> v;
  for (double x : h) v.push_back(cplx(2.0, 1.0) + 3.0 * x - 7.0 * x * x);
  CHECK(std::abs(richardson_to_zero(h, v) - cplx(2.0, 1.0)) < 1e-12);
}

TEST_CASE("M^even: k = 1 is 2 sinh, k >= 2 vanishes") {
  const cplx a(0.4, 0.3), b(-0.2, 0.6);
  CHECK(rel(meven_bruteforce({a, b}), 2.0 * std::sinh(0.5 * (a - b))) < 1e-14);
  CHECK(rel(meven_pfaffian({a, b}), meven_bruteforce({a, b})) < 1e-14);
  CHECK(std::abs(meven_bruteforce({}) - 1.0) < 1e-15);
  std::mt19937_64 rng(23);
  for (int k = 2; k <= 3; ++k) {
    const auto z = random_zeta(rng, 2 * k, 1.0, 1.0);
    CHECK(std::abs(meven_bruteforce(z)) < 1e-11);
    CHECK(std::abs(meven_pfaffian(z)) < 1e-11);
  }
  CHECK_THROWS_AS(meven_pfaffian({a}), InvalidArgument);
}

TEST_CASE("boundary terms: counts and the (1,1) case") {
  CHECK(boundary_term_count(1, 1) == 2);
  CHECK(boundary_term_count(2, 1) == 3);
  CHECK(boundary_terms(2, 3).size() == boundary_term_count(2, 3));
  // M_2(theta, eta + i pi) = coth((theta - eta)/2)
  const cplx th = 0.7, et = -0.4;
  CHECK(rel(modd_boundary_limit({th}, {et}), 1.0 / std::tanh(0.5 * (th - et))) < 1e-9);
  CHECK(rel(boundary_term_sum({th}, {et}), 1.0 / std::tanh(0.5 * (th - et))) < 1e-14);
}

TEST_CASE("property: boundary term sum equals the delta limit off the diagonals") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> U(-2.5, 2.5);
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 2}, {2, 2}, {2, 3}})
    for (int t = 0; t < 20; ++t) {
      std::vector<cplx> th(m), et(n);
      double gap = 0.0;
      while (gap < 0.3) {
        for (auto& v : th) v = U(rng);
        for (auto& v : et) v = U(rng);
        gap = 1e9;
        for (const auto& a : th)
          for (const auto& b : et) gap = std::min(gap, std::abs(a - b));
      }
      CHECK(rel(boundary_term_sum(th, et), modd_boundary_limit(th, et)) < 1e-8);
    }
}

TEST_CASE("audit CSV headers") {
  std::ostringstream a, b;
  write_pairings_csv(a, 3);
  write_boundary_terms_csv(b, 1, 1);
  CHECK(a.str().rfind("n,pairs,sign\n", 0) == 0);
  CHECK(b.str().rfind("m,n,k,pairs,sign\n", 0) == 0);
}
