#include "isingops/pfaffian.hpp"

#include <cmath>
#include <vector>

namespace isingops {

cplx pfaffian_inplace(cplx* A, int n) {
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;
  auto at = [A, n](int i, int j) -> cplx& { return A[i * n + j]; };
  cplx pf = 1.0;
  cplx tau[64];
  for (int k = 0; k < n - 1; k += 2) {
    int kp = k + 1;
    double best = std::abs(at(k + 1, k));
    for (int i = k + 2; i < n; ++i)
      if (std::abs(at(i, k)) > best) {
        best = std::abs(at(i, k));
        kp = i;
      }
    if (kp != k + 1) {
      for (int j = 0; j < n; ++j) std::swap(at(k + 1, j), at(kp, j));
      for (int i = 0; i < n; ++i) std::swap(at(i, k + 1), at(i, kp));
      pf = -pf;
    }
    if (at(k + 1, k) == 0.0) return 0.0;
    pf *= at(k, k + 1);
    if (k + 2 < n) {
      const cplx piv = at(k, k + 1);
      for (int i = k + 2; i < n; ++i) tau[i] = at(k, i) / piv;
      for (int i = k + 2; i < n; ++i)
        for (int j = k + 2; j < n; ++j) at(i, j) += tau[i] * at(j, k + 1) - at(i, k + 1) * tau[j];
    }
  }
  return pf;
}

cplx pfaffian(Eigen::MatrixXcd A) {
  if (A.rows() != A.cols()) throw InvalidArgument("Pfaffian needs a square matrix");
  const int n = static_cast<int>(A.rows());
  if (n > 64) throw ResourceLimit("Pfaffian size guard (64) exceeded");
  std::vector<cplx> buf(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) buf[i * n + j] = A(i, j);
  return pfaffian_inplace(buf.data(), n);
}

}  // namespace isingops
