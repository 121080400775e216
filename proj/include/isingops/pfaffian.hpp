#pragma once

#include <Eigen/Dense>

#include "isingops/errors.hpp"

namespace isingops {

// Pfaffian of a complex antisymmetric matrix by Parlett-Reid elimination
// with partial pivoting. Odd dimension gives 0; the empty matrix gives 1.
cplx pfaffian(Eigen::MatrixXcd A);

// Same algorithm on a dense row-major n x n buffer, which is overwritten.
// Used in the inner loops where an Eigen temporary per call is too costly.
cplx pfaffian_inplace(cplx* A, int n);

}  // namespace isingops
