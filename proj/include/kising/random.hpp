#pragma once

// Seeded generators for property tests and the verify mode.

#include <cstdint>
#include <random>

#include <Eigen/QR>

#include "kising/symspace.hpp"
#include "kising/types.hpp"

namespace kising {

using Rng = std::mt19937_64;

template <typename Real = double>
CVector<Real> random_complex_vector(Eigen::Index size, Rng& rng) {
  std::normal_distribution<Real> g(0, 1);
  CVector<Real> v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = Complex<Real>(g(rng), g(rng));
  return v;
}

/// Haar-like random state in the symmetric subspace.
template <typename Real = double>
SymmetricState<Real> random_symmetric_state(int n_qubits, Rng& rng) {
  require_system_size(n_qubits, "random_symmetric_state");
  return SymmetricState<Real>::normalized(random_complex_vector<Real>(n_qubits + 1, rng));
}

/// Haar-distributed unitary: QR of a Ginibre matrix with R's diagonal phases
/// moved into Q.
template <typename Real = double>
CMatrix<Real> random_unitary(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<Real> g(0, 1);
  CMatrix<Real> z(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) z(r, c) = Complex<Real>(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix<Real>> qr(z);
  CMatrix<Real> q = qr.householderQ();
  const CMatrix<Real>& rr = qr.matrixQR();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Real mag = std::abs(rr(i, i));
    if (mag > Real(0)) q.col(i) *= rr(i, i) / mag;
  }
  return q;
}

}  // namespace kising
