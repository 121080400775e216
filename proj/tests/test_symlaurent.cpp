#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "isingops/symlaurent.hpp"

using namespace isingops;

namespace {

VariableVector random_vars(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  VariableVector x(n);
  for (auto& v : x) v = std::exp(cplx(U(rng), 1.5 * U(rng)));
  return x;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_CASE("power sums evaluate directly") {
  const VariableVector x = {cplx(1.0, 0.5), cplx(-0.3, 2.0), cplx(0.7, -0.1)};
  cplx p3 = 0.0, pm1 = 0.0;
  for (const auto& v : x) {
    p3 += v * v * v;
    pm1 += 1.0 / v;
  }
  CHECK(rel(eval(SymLaurent::power_sum(3), x), p3) < 1e-14);
  CHECK(rel(eval(SymLaurent::power_sum(-1), x), pm1) < 1e-14);
  const SymLaurent P = SymLaurent::power_sum(3) * SymLaurent::power_sum(-1) + SymLaurent::constant(2.0);
  CHECK(rel(eval(P, x), p3 * pm1 + 2.0) < 1e-14);
  CHECK(P.degree() == 4);
}

TEST_CASE("elementary symmetric polynomials of 1,2,3") {
  const auto s = elementary_sigmas({1.0, 2.0, 3.0});
  REQUIRE(s.size() == 4);
  CHECK(std::abs(s[0] - 1.0) < 1e-14);
  CHECK(std::abs(s[1] - 6.0) < 1e-14);
  CHECK(std::abs(s[2] - 11.0) < 1e-14);
  CHECK(std::abs(s[3] - 6.0) < 1e-14);
  CHECK(elementary_sigma_exact(2, {1, 2, 3}) == 11);
}

TEST_CASE("I_1 is the first power sum, I_-1 the inverse one") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_vars(rng, 1 + t % 6);
    CHECK(rel(I_eval(0, x), eval(SymLaurent::power_sum(1), x)) < 1e-13);
    CHECK(rel(I_eval_negative(0, x), eval(SymLaurent::power_sum(-1), x)) < 1e-13);
  }
}

TEST_CASE("J_3 on integers: (1+2)(1+3)(2+3) = 60") {
  CHECK(J_eval_exact(1, {1, 2, 3}) == 60);
  CHECK(std::abs(J_eval(1, {1.0, 2.0, 3.0}) - 60.0) < 1e-11);
  // fewer odd variables: identically zero
  CHECK(J_eval_exact(1, {5}) == 0);
  CHECK(J_eval_exact(2, {2, -7, 3}) == 0);
}

TEST_CASE("J product formula on random points") {
  std::mt19937_64 rng(12);
  for (int s = 1; s <= 2; ++s)
    for (int t = 0; t < 30; ++t) {
      const auto x = random_vars(rng, 2 * s + 1);
      cplx p = 1.0;
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) p *= x[i] + x[j];
      CHECK(rel(J_eval(s, x), p) < 1e-10);
    }
}

TEST_CASE("I coefficients are nonnegative and I_1 in 3 variables is x1+x2+x3") {
  const auto c1 = I_monomial_coefficients(0, 3);
  CHECK(c1.size() == 3);
  for (const auto& [e, c] : c1) CHECK(c == 1);
  for (int s = 1; s <= 2; ++s)
    for (const auto& [e, c] : I_monomial_coefficients(s, 4)) CHECK(c >= 0);
}

TEST_CASE("Ising invariance") {
  CHECK(is_ising_invariant(SymLaurent::power_sum(1)));
  CHECK(is_ising_invariant(SymLaurent::power_sum(1) * SymLaurent::power_sum(-3)));
  CHECK_FALSE(is_ising_invariant(SymLaurent::power_sum(2)));
  for (const auto& g : ising_monomials(5))
    for (int k : g) CHECK(std::abs(k) % 2 == 1);
}

TEST_CASE("property: eval is permutation symmetric and Lambda_I drops (y, -y)") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto monos = ising_monomials(5);
  for (int t = 0; t < 200; ++t) {
    SymLaurent P;
    for (int q = 0; q < 3; ++q) P.add_term(monos[rng() % monos.size()], cplx(U(rng), U(rng)));
    const auto x = random_vars(rng, 1 + t % 5);
    auto y = x;
    std::shuffle(y.begin(), y.end(), rng);
    CHECK(rel(eval(P, x), eval(P, y)) < 1e-12);
    const cplx w = std::exp(cplx(U(rng), 3.0 * U(rng)));
    VariableVector xw = x;
    xw.push_back(w);
    xw.push_back(-w);
    CHECK(std::abs(eval(P, xw) - eval(P, x)) <= 1e-10 * (1.0 + std::abs(eval(P, x))) * 100.0);
  }
}

TEST_CASE("partial derivatives against central differences") {
  const SymLaurent P = SymLaurent::power_sum(1) * SymLaurent::power_sum(-1) + SymLaurent::power_sum(3);
  const std::vector<cplx> z = {cplx(0.2, 0.1), cplx(-0.5, 0.3), cplx(0.4, -0.2)};
  const double h = 1e-5;
  auto f = [&](std::vector<cplx> w) {
    VariableVector x(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) x[i] = std::exp(w[i]);
    return eval(P, x);
  };
  auto zp = z, zm = z;
  zp[1] += h;
  zm[1] -= h;
  const cplx fd = (f(zp) - f(zm)) / (2.0 * h);
  CHECK(rel(partial_derivative_eval(P, {1}, z), fd) < 1e-8);
}

TEST_CASE("JSON round trip") {
  const SymLaurent P = SymLaurent::power_sum(1) * SymLaurent::power_sum(-3) * cplx(0.5, -2.0) + SymLaurent::constant(1.0);
  const SymLaurent Q = SymLaurent::from_json(P.to_json());
  CHECK(Q.terms() == P.terms());
  CHECK_THROWS_AS(SymLaurent::from_json(nlohmann::json{{"terms", 3}}), InvalidArgument);
}

TEST_CASE("approximation error is non-increasing in the degree") {
  std::vector<ApproxTarget> targets = {{1, [](const std::vector<double>& t) { return cplx(std::exp(2.0 * t[0])); }}};
  double prev = 1e300;
  for (int d = 1; d <= 5; d += 2) {
    const auto r = approximate_on_box(targets, d, 1.0);
    CHECK(r.sup_error <= prev * (1.0 + 1e-12));
    prev = r.sup_error;
  }
}
