#pragma once

#include <vector>

#include "isingops/boundary_grid.hpp"
#include "isingops/fock.hpp"

namespace isingops {

// <left, (1/m!n!) z^{dagger m} z^n(f_mn) right> on the grid. With ordered-tuple storage:
//   sum_s sqrt(a! b!) (-1)^{n(n-1)/2} sum_{I, J, Xi} W_I W_J W_Xi conj L_a(I, Xi) K(I, J) R_b(J, Xi)
// where a = m + s, b = n + s and Xi runs over ordered spectator tuples.
struct StatePair {
  const FockVector* left = nullptr;
  const FockVector* right = nullptr;
};

// One pass over the kernel rows serves every pair. OpenMP over rows when `parallel`.
std::vector<cplx> block_elements(const GridKernel& K, const std::vector<StatePair>& pairs, bool parallel = true);

// Naive reference: loops over all tuples with FockVector::at and GridKernel::entry.
std::vector<cplx> block_elements_serial(const GridKernel& K, const std::vector<StatePair>& pairs);

struct FormElement {
  cplx value = 0.0;
  double abs_sum = 0.0;  // sum over (m, n) blocks of |block contribution|
  std::vector<std::pair<int, int>> blocks;
  std::vector<cplx> block_values;
};

// Sum over all (m, n) blocks reachable inside the truncations of the pair members.
std::vector<FormElement> quadratic_form_elements(const CoefficientFamily& fam, const std::vector<StatePair>& pairs,
                                                 bool parallel = true);
cplx quadratic_form_element(const CoefficientFamily& fam, const FockVector& psi, const FockVector& chi,
                            bool parallel = true);

}  // namespace isingops
