#pragma once

// One- and two-qubit reduced density matrices of symmetric states, read off
// the Dicke coefficients in O(N), and the entanglement measures built on them.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "kising/floquet.hpp"
#include "kising/parallel.hpp"
#include "kising/symspace.hpp"
#include "kising/types.hpp"

namespace kising {

namespace detail {

template <typename Matrix>
void check_density_matrix(const Matrix& m, const char* what, double tol) {
  const double herm = static_cast<double>((m - m.adjoint()).cwiseAbs().maxCoeff());
  if (herm > tol) throw std::invalid_argument(std::string(what) + ": not Hermitian (" + std::to_string(herm) + ")");
  const double tr = std::abs(static_cast<double>(m.trace().real()) - 1.0);
  if (tr > tol) throw std::invalid_argument(std::string(what) + ": trace differs from 1 by " + std::to_string(tr));
}

}  // namespace detail

template <typename Real = double>
class SingleQubitRDM {
 public:
  using Matrix = Eigen::Matrix<Complex<Real>, 2, 2>;

  explicit SingleQubitRDM(const Matrix& m, double tol = 1e-10) : m_(m) {
    detail::check_density_matrix(m_, "SingleQubitRDM", tol);
  }
  const Matrix& matrix() const { return m_; }
  Complex<Real> operator()(int r, int c) const { return m_(r, c); }

  /// Eigenvalues ascending, clamped to [0, 1].
  std::array<Real, 2> eigenvalues() const {
    const Real a = m_(0, 0).real();
    const Real d = m_(1, 1).real();
    const Real t = (a + d) / 2;
    const Real r = std::sqrt((a - d) * (a - d) / 4 + std::norm(m_(0, 1)));
    return {std::clamp(t - r, Real(0), Real(1)), std::clamp(t + r, Real(0), Real(1))};
  }

 private:
  Matrix m_;
};

/// Basis |00>, |01>, |10>, |11> with the first label on the first kept qubit.
template <typename Real = double>
class TwoQubitRDM {
 public:
  using Matrix = Eigen::Matrix<Complex<Real>, 4, 4>;

  explicit TwoQubitRDM(const Matrix& m, double tol = 1e-10) : m_(m) {
    detail::check_density_matrix(m_, "TwoQubitRDM", tol);
  }
  const Matrix& matrix() const { return m_; }
  Complex<Real> operator()(int r, int c) const { return m_(r, c); }

 private:
  Matrix m_;
};

template <typename Real>
SingleQubitRDM<Real> rdm1(const SymmetricState<Real>& state) {
  const int n = state.n_qubits();
  const auto& c = state.coeffs();
  // Row a holds the amplitudes of |a> (x) |D^{N-1}_m>, m = 0..N-1.
  Eigen::Matrix<Complex<Real>, 2, Eigen::Dynamic> amp(2, n);
  for (int m = 0; m < n; ++m) {
    amp(0, m) = c[m] * std::sqrt(Real(n - m) / Real(n));
    amp(1, m) = c[m + 1] * std::sqrt(Real(m + 1) / Real(n));
  }
  return SingleQubitRDM<Real>(amp * amp.adjoint());
}

template <typename Real>
TwoQubitRDM<Real> rdm2(const SymmetricState<Real>& state) {
  const int n = state.n_qubits();
  if (n < 2) throw std::invalid_argument("rdm2: need N >= 2, got N=" + std::to_string(n));
  const auto& c = state.coeffs();
  const Real norm = Real(n) * Real(n - 1);
  // Row ab holds the amplitudes of |ab> (x) |D^{N-2}_m>, m = 0..N-2.
  Eigen::Matrix<Complex<Real>, 4, Eigen::Dynamic> amp(4, n - 1);
  for (int m = 0; m <= n - 2; ++m) {
    amp(0, m) = c[m] * std::sqrt(Real(n - m) * Real(n - m - 1) / norm);
    amp(1, m) = c[m + 1] * std::sqrt(Real(m + 1) * Real(n - m - 1) / norm);
    amp(2, m) = amp(1, m);
    amp(3, m) = c[m + 2] * std::sqrt(Real(m + 1) * Real(m + 2) / norm);
  }
  return TwoQubitRDM<Real>(amp * amp.adjoint());
}

/// 1 - tr(rho^2).
template <typename Real>
Real linear_entropy(const SingleQubitRDM<Real>& rdm) {
  return Real(1) - rdm.matrix().cwiseAbs2().sum();
}

/// -sum lambda ln lambda, in nats.
template <typename Real>
Real von_neumann_entropy(const SingleQubitRDM<Real>& rdm) {
  Real s = 0;
  for (Real l : rdm.eigenvalues())
    if (l > Real(0)) s -= l * std::log(l);
  return s;
}

namespace detail {

template <typename Real>
Eigen::Matrix<Real, 4, 4> sigma_yy() {
  Eigen::Matrix<Real, 4, 4> y = Eigen::Matrix<Real, 4, 4>::Zero();
  y(0, 3) = -1;
  y(1, 2) = 1;
  y(2, 1) = 1;
  y(3, 0) = -1;
  return y;
}

inline constexpr double kInvalidEigenvalue = -1e-8;
inline constexpr double kClampEigenvalue = 1e-12;
// Eigenvalues of rho below this are treated as exact zeros when forming
// rho = W W^dagger; double-precision noise sits near 1e-16.
inline constexpr double kRankCutoff = 1e-13;

}  // namespace detail

/// Eigenvalues of R = (Y)(rho*)(Y)(rho), descending, from the non-Hermitian
/// product directly. Values in [-1e-12, 0) are clamped to zero.
template <typename Real>
std::array<Real, 4> concurrence_eigenvalues_direct(const TwoQubitRDM<Real>& rdm) {
  using M4 = typename TwoQubitRDM<Real>::Matrix;
  const M4 y = detail::sigma_yy<Real>().template cast<Complex<Real>>();
  const M4 r = y * rdm.matrix().conjugate() * y * rdm.matrix();
  Eigen::ComplexEigenSolver<M4> es(r, false);
  std::array<Real, 4> out{};
  for (int i = 0; i < 4; ++i) {
    const Real v = es.eigenvalues()[i].real();
    if (v < Real(detail::kInvalidEigenvalue))
      throw std::domain_error("concurrence: R has eigenvalue " + std::to_string(static_cast<double>(v)) +
                              "; input is not a valid density matrix");
    out[i] = v < Real(detail::kClampEigenvalue) && v < Real(0) ? Real(0) : v;
  }
  std::sort(out.begin(), out.end(), std::greater<Real>());
  return out;
}

/// Square roots of the eigenvalues of R, descending, as singular values of
/// tau = W^T Y W with rho = W W^dagger. This avoids taking square roots of
/// eigenvalues that are zero up to rounding.
template <typename Real>
std::array<Real, 4> concurrence_singular_values(const TwoQubitRDM<Real>& rdm) {
  using M4 = typename TwoQubitRDM<Real>::Matrix;
  Eigen::SelfAdjointEigenSolver<M4> es(rdm.matrix());
  const auto& p = es.eigenvalues();
  if (p.minCoeff() < Real(detail::kInvalidEigenvalue))
    throw std::domain_error("concurrence: density matrix has eigenvalue " +
                            std::to_string(static_cast<double>(p.minCoeff())));
  std::vector<int> kept;
  for (int i = 0; i < 4; ++i)
    if (p[i] > Real(detail::kRankCutoff)) kept.push_back(i);
  std::array<Real, 4> out{};
  if (kept.empty()) return out;

  CMatrix<Real> w(4, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) w.col(j) = es.eigenvectors().col(kept[j]) * std::sqrt(p[kept[j]]);
  const CMatrix<Real> tau = w.transpose() * detail::sigma_yy<Real>().template cast<Complex<Real>>() * w;
  Eigen::JacobiSVD<CMatrix<Real>> svd(tau);
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) out[i] = svd.singularValues()[i];
  std::sort(out.begin(), out.end(), std::greater<Real>());
  return out;
}

/// Eigenvalues of R, descending, computed as squared singular values.
template <typename Real>
std::array<Real, 4> concurrence_eigenvalues(const TwoQubitRDM<Real>& rdm) {
  auto s = concurrence_singular_values(rdm);
  for (Real& v : s) v *= v;
  return s;
}

/// Wootters concurrence max(0, s1 - s2 - s3 - s4).
template <typename Real>
Real concurrence(const TwoQubitRDM<Real>& rdm) {
  const auto s = concurrence_singular_values(rdm);
  return std::max(Real(0), s[0] - s[1] - s[2] - s[3]);
}

struct EntanglementRecord {
  long long step = 0;
  double linear_entropy = 0;
  double von_neumann = 0;
  double concurrence = 0;
};

template <typename Real>
EntanglementRecord entanglement_record(const SymmetricState<Real>& state, long long step) {
  const auto r1 = rdm1(state);
  return {step, static_cast<double>(linear_entropy(r1)), static_cast<double>(von_neumann_entropy(r1)),
          static_cast<double>(concurrence(rdm2(state)))};
}

/// Records for n = 0..n_max; every step is evaluated independently from the
/// block eigenphases, so the loop is spread over `threads` workers.
template <typename Real>
std::vector<EntanglementRecord> entanglement_series(const FloquetOperator<Real>& op,
                                                    const SymmetricState<Real>& state0, long long n_max,
                                                    unsigned threads = 0) {
  if (n_max < 0) throw std::invalid_argument("entanglement_series: n_max must be >= 0");
  if (op.n_qubits() < 2) throw std::invalid_argument("entanglement_series: need N >= 2");
  const SpectralState<Real> spectral(op, state0);
  std::vector<EntanglementRecord> out(static_cast<std::size_t>(n_max + 1));
  parallel_for(out.size(), [&](std::size_t i) {
    const auto n = static_cast<long long>(i);
    out[i] = entanglement_record(n == 0 ? state0 : spectral.at(n), n);
  }, threads);
  return out;
}

}  // namespace kising
