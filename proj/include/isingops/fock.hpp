#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isingops/errors.hpp"
#include "isingops/grid.hpp"
#include "isingops/testfunction.hpp"

namespace isingops {

using GridPtr = std::shared_ptr<const RapidityGrid>;
GridPtr make_grid(int nodes, double cutoff);

// Truncated S = -1 Fock vector on a rapidity grid. Sector n is a totally
// antisymmetric function on grid^n; only its values on strictly increasing
// index tuples are stored (colex order, see combinatorics.hpp), so antisymmetry
// holds by construction. The norm is the plain L^2 norm of each sector:
//   ||psi_n||^2 = sum over all grid^n of w |psi_n|^2 = n! sum over ordered tuples.
class FockVector {
public:
  FockVector() = default;
  FockVector(GridPtr grid, int nmax);

  static FockVector vacuum(GridPtr grid, int nmax);
  // Independent complex normal values on ordered tuples of sectors 0..top.
  static FockVector random(GridPtr grid, int nmax, std::mt19937_64& rng, int top = -1);
  // Sector n filled with f evaluated at increasing rapidity tuples.
  static FockVector from_function(GridPtr grid, int nmax, int n,
                                  const std::function<cplx(const std::vector<double>&)>& f);

  const RapidityGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int nmax() const { return nmax_; }
  std::size_t sector_size(int n) const;
  std::vector<cplx>& sector(int n) { return sectors_.at(n); }
  const std::vector<cplx>& sector(int n) const { return sectors_.at(n); }

  // Value at an arbitrary index tuple (antisymmetric extension; 0 on repeated indices).
  cplx at(std::vector<int> idx) const;
  // Sector n as a dense grid^n array in lexicographic multi-index order.
  std::vector<cplx> full_sector(int n) const;

  double norm() const;
  double sector_norm(int n) const;

  FockVector operator+(const FockVector& o) const;
  FockVector operator-(const FockVector& o) const;
  FockVector operator*(cplx c) const;

  // Estimated norm of components dropped by truncation, and interpolation warnings.
  double truncation_loss = 0.0;
  std::vector<std::string> warnings;

  nlohmann::json metadata() const;
  // Binary layout: int32 N, int32 grid size, float64 Theta, then every sector as a dense
  // grid^n array of little-endian complex64 (float32 real, float32 imaginary).
  void write_binary(std::ostream& os) const;
  static FockVector read_binary(std::istream& is);

  void check_compatible(const FockVector& o) const;

private:
  GridPtr grid_;
  int nmax_ = 0;
  std::vector<std::vector<cplx>> sectors_;
};

// Ordered-tuple weight prod_j w_{c_j}.
double tuple_weight(const RapidityGrid& g, const int* c, int k);

cplx inner_product(const FockVector& psi, const FockVector& chi);

// Grid values of a one-particle function.
std::vector<cplx> grid_values(const RapidityGrid& g, const std::function<cplx(double)>& h);
// f^{+-} at the grid nodes.
std::vector<cplx> grid_transform(const TestFunction2D& f, const RapidityGrid& g, int sign,
                                 const ModelParams& model);

// (z^dagger(h) psi)_n = sqrt(n) Antisym(h (x) psi_{n-1}); sector N_max + 1 is dropped and its
// norm added to truncation_loss.
FockVector z_dagger_apply(const std::vector<cplx>& h, const FockVector& psi);
// (z(h) psi)_n(x) = sqrt(n+1) sum_k w_k h_k psi_{n+1}(theta_k, x).
FockVector z_apply(const std::vector<cplx>& h, const FockVector& psi);

// Dense kernel on grid^m x grid^n, row-major with the theta multi-index (lexicographic)
// as the slow index.
struct DenseKernel {
  int m = 0;
  int n = 0;
  int G = 0;
  std::vector<cplx> data;

  DenseKernel() = default;
  DenseKernel(int m, int n, int G);
  std::size_t rows() const;
  std::size_t cols() const;
  cplx& operator()(std::size_t row, std::size_t col) { return data[row * cols() + col]; }
  cplx operator()(std::size_t row, std::size_t col) const { return data[row * cols() + col]; }
};

// z^{dagger m} z^n(K) psi = int K(theta, eta) z^dagger(theta_1)..z^dagger(theta_m) z(eta_1)..z(eta_n) psi.
FockVector monomial_apply(const DenseKernel& K, const FockVector& psi);

// phi(f) = z^dagger(f^+) + z(f^-).
FockVector phi_apply(const TestFunction2D& f, const FockVector& psi, const ModelParams& model);

// Multiplies sector n by exp(sign * omega(E)) with E = sum_j cosh theta_j (E = 0 on the vacuum).
FockVector omega_weight(const FockVector& psi, const Indicatrix& omega, int sign);

// (U(x, lambda) psi)_n(theta) = e^{i p(theta).x} psi_n(theta_1 - lambda, ..., theta_n - lambda),
// with cubic interpolation in each variable. Points leaving [-Theta, Theta] are set to zero and
// reported in `warnings`.
FockVector poincare_transform(const FockVector& psi, const Point2& x, double lambda,
                              const ModelParams& model);

// Spacetime reflection j: (U(j) psi)_n(theta_1, ..., theta_n) = conj psi_n(theta_n, ..., theta_1).
FockVector reflect(const FockVector& psi);

// <psi, H psi> with H = mu * sum_j cosh theta_j on each sector.
double energy_expectation(const FockVector& psi, const ModelParams& model);

// Slater determinant of Hermite-Gaussian orbitals centered at `center` with width `width`:
// psi_n(theta) = det[ h_a(theta_b) ]_{a,b < n}, normalized over the grid, with orbital
// coefficients drawn from rng for variety.
FockVector gaussian_state(GridPtr grid, int nmax, int n, double center, double width,
                          std::mt19937_64& rng);

}  // namespace isingops
