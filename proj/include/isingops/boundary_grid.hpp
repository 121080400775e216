#pragma once

#include <cstddef>
#include <vector>

#include "isingops/fock.hpp"
#include "isingops/formfactors.hpp"

namespace isingops {

// The boundary kernel f_{mn} on ordered grid tuples I (theta) and J (eta), as used in
// matrix elements and operator norms. Cross entries coth((theta - eta + i0)/2) of the
// Pfaffian are replaced by the discretized distribution
//   B_ij = C_ji / w_i - 2 pi i delta_ij / w_i      (C = pv_coth_matrix of the grid),
// so that sum_ij w_i w_j a_i B_ij b_j approximates int a(theta) coth((theta - eta + i0)/2) b(eta).
// Each pairing term then carries its principal-value part and all delta terms at once.
// Requires a spline (or zero) localizing function g, whose transform is closed-form.
class GridKernel {
public:
  GridKernel(const CoefficientFamily& fam, int m, int n, GridPtr grid);

  int m() const { return m_; }
  int n() const { return n_; }
  bool is_zero() const { return zero_; }
  const RapidityGrid& grid() const { return *grid_; }
  std::size_t rows() const;
  std::size_t cols() const;

  // K(I, J) for increasing index tuples I (length m) and J (length n).
  cplx entry(const int* I, const int* J) const;
  // out[rank(J)] = K(I, J) for all J.
  void fill_row(const int* I, cplx* out) const;
  // out[rank(I)] = K(I, J) for all I.
  void fill_col(const int* J, cplx* out) const;

private:
  struct Partial;
  void start(Partial& p, const int* idx, int count, bool eta) const;
  cplx finish(const Partial& pi, const Partial& pj, const int* I, const int* J, cplx* buf) const;

  CoefficientFamily fam_;
  PreparedLaurent prep_;
  GridPtr grid_;
  int m_ = 0;
  int n_ = 0;
  int G_ = 0;
  bool zero_ = false;
  cplx constant_ = 0.0;
  std::vector<double> ch_, sh_;
  std::vector<cplx> xpow_;   // [slot * G + i] = e^{k_slot t_i}
  std::vector<double> inner_;  // tanh or sinh of (t_i - t_j)/2
  std::vector<cplx> cross_;  // B or -i cosh((t_i - t_j)/2)
};

}  // namespace isingops
