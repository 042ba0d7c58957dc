#pragma once

// Floquet operator U = exp(-i J tau sum_{l<l'} s^z_l s^z_l') exp(-i tau sum_l s^y_l)
// in the Dicke basis, with its parity blocks and block eigensystems.
//
// No global phase is attached: the kicked-top form differs from this U by
// exp(-i N J tau), which shifts every quasi-energy equally.

#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "kising/symspace.hpp"
#include "kising/types.hpp"

namespace kising {

inline constexpr double kStructuralTolerance = 1e-10;

template <typename Real = double>
struct ModelParams {
  int n_qubits = 1;
  Real coupling = Real(0.5);
  Real kick = pi_v<Real> / 4;

  void validate() const {
    require_system_size(n_qubits, "ModelParams");
    if (!std::isfinite(static_cast<double>(coupling)))
      throw std::invalid_argument("ModelParams: coupling J must be finite");
    if (!std::isfinite(static_cast<double>(kick)))
      throw std::invalid_argument("ModelParams: kick tau must be finite");
  }
};

/// Eigenphases and orthonormal eigenvectors (columns) of one unitary block.
template <typename Real = double>
struct BlockEigensystem {
  RVector<Real> angles;
  CMatrix<Real> vectors;
};

namespace detail {

template <typename Real>
Real max_abs(const CMatrix<Real>& m) {
  return m.size() == 0 ? Real(0) : m.cwiseAbs().maxCoeff();
}

/// Diagonal of the Ising factor: exp(-i J tau ((N-2k)^2 - N)/2).
template <typename Real>
CVector<Real> ising_phases(const ModelParams<Real>& p) {
  const int n = p.n_qubits;
  CVector<Real> d(n + 1);
  for (int k = 0; k <= n; ++k) {
    const long long s = n - 2LL * k;
    const long long pairs = (s * s - n) / 2;  // sum_{l<l'} z_l z_l'
    d[k] = std::polar(Real(1), -p.coupling * p.kick * Real(pairs));
  }
  return d;
}

/// exp(-i tau sum_l s^y_l) via the real Jacobi form: with S = diag(i^k),
/// S^dagger (sum s^y) S is real symmetric tridiagonal with spectrum N-2m.
template <typename Real>
CMatrix<Real> kick_matrix(int n, Real tau) {
  const RVector<Real> off = ladder_magnitudes<Real>(n);
  const RVector<Real> diag = RVector<Real>::Zero(n + 1);
  Eigen::SelfAdjointEigenSolver<RMatrix<Real>> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericalError("kick_matrix: tridiagonal solver failed", 1.0, 0.0);

  const RMatrix<Real>& v = es.eigenvectors();
  CVector<Real> phase(n + 1);
  for (int m = 0; m <= n; ++m) phase[m] = std::polar(Real(1), -tau * Real(-n + 2 * m));

  const CMatrix<Real> vc = v.template cast<Complex<Real>>();
  CMatrix<Real> k = (vc * phase.asDiagonal()) * vc.transpose();
  for (int c = 0; c <= n; ++c)
    for (int r = 0; r <= n; ++r) k(r, c) *= i_pow<Real>(r - c);
  return k;
}

template <typename Real>
BlockEigensystem<Real> unitary_eigensystem(const CMatrix<Real>& block, const char* label) {
  BlockEigensystem<Real> out;
  const Eigen::Index d = block.rows();
  out.angles.resize(d);
  if (d == 0) return out;
  Eigen::ComplexSchur<CMatrix<Real>> schur(block);
  if (schur.info() != Eigen::Success)
    throw NumericalError(std::string("Schur decomposition failed for block ") + label, 1.0, 0.0);
  const CMatrix<Real>& t = schur.matrixT();
  // A unitary block is normal, so T must be diagonal with unit-modulus entries;
  // the Frobenius distance to that form is the reconstruction error.
  Real err2 = 0;
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < c; ++r) err2 += std::norm(t(r, c));
    err2 += std::norm(t(c, c) - t(c, c) / std::abs(t(c, c)));
    out.angles[c] = std::arg(t(c, c));
  }
  const double err = std::sqrt(static_cast<double>(err2));
  if (err > kStructuralTolerance)
    throw NumericalError(std::string("block ") + label + " eigensystem is not unitary-diagonal", err,
                         kStructuralTolerance);
  out.vectors = schur.matrixU();
  return out;
}

}  // namespace detail

template <typename Real = double>
class FloquetOperator {
 public:
  explicit FloquetOperator(const ModelParams<Real>& params) : params_(params) {
    params_.validate();
    const int n = params_.n_qubits;

    const CVector<Real> ising = detail::ising_phases(params_);
    matrix_ = ising.asDiagonal() * detail::kick_matrix<Real>(n, params_.kick);

    CMatrix<Real> gram = matrix_.adjoint() * matrix_;
    gram.diagonal().array() -= Complex<Real>(1);
    unitarity_residual_ = static_cast<double>(detail::max_abs(gram));
    if (!(unitarity_residual_ < kStructuralTolerance))
      throw NumericalError("Floquet operator for N=" + std::to_string(n) + " is not unitary",
                           unitarity_residual_, kStructuralTolerance);

    basis_ = parity_basis<Real>(n);
    const int dp = basis_.dim_plus;
    const int dm = basis_.dim_minus;
    block_plus_ = basis_.block(matrix_, 0, dp, 0, dp);
    block_minus_ = basis_.block(matrix_, dp, dm, dp, dm);
    Real off = 0;
    for (int a = 0; a < dp; ++a)
      for (int b = dp; b < dp + dm; ++b)
        off = std::max({off, std::abs(basis_.element(matrix_, a, b)), std::abs(basis_.element(matrix_, b, a))});
    block_residual_ = static_cast<double>(off);
    if (!(block_residual_ < kStructuralTolerance))
      throw NumericalError("Floquet operator for N=" + std::to_string(n) + " leaks between parity blocks",
                           block_residual_, kStructuralTolerance);

    lazy_ = std::make_shared<Lazy>();
  }

  const ModelParams<Real>& params() const { return params_; }
  int n_qubits() const { return params_.n_qubits; }
  int dimension() const { return params_.n_qubits + 1; }
  const CMatrix<Real>& matrix() const { return matrix_; }
  const CMatrix<Real>& block_plus() const { return block_plus_; }
  const CMatrix<Real>& block_minus() const { return block_minus_; }
  const ParityBasis<Real>& basis() const { return basis_; }
  double unitarity_residual() const { return unitarity_residual_; }
  double block_residual() const { return block_residual_; }

  const BlockEigensystem<Real>& eigensystem_plus() const { return eigensystems().first; }
  const BlockEigensystem<Real>& eigensystem_minus() const { return eigensystems().second; }

  /// All N+1 eigenphases, positive block first (unsorted).
  RVector<Real> eigenphases() const {
    const auto& [p, m] = eigensystems();
    RVector<Real> out(dimension());
    out << p.angles, m.angles;
    return out;
  }

 private:
  struct Lazy {
    std::once_flag once;
    std::pair<BlockEigensystem<Real>, BlockEigensystem<Real>> value;
  };

  const std::pair<BlockEigensystem<Real>, BlockEigensystem<Real>>& eigensystems() const {
    std::call_once(lazy_->once, [this] {
      lazy_->value.first = detail::unitary_eigensystem<Real>(block_plus_, "U+");
      lazy_->value.second = detail::unitary_eigensystem<Real>(block_minus_, "U-");
    });
    return lazy_->value;
  }

  ModelParams<Real> params_;
  CMatrix<Real> matrix_;
  CMatrix<Real> block_plus_;
  CMatrix<Real> block_minus_;
  ParityBasis<Real> basis_;
  double unitarity_residual_ = 0;
  double block_residual_ = 0;
  std::shared_ptr<Lazy> lazy_;
};

template <typename Real>
FloquetOperator<Real> build_floquet(const ModelParams<Real>& params) {
  return FloquetOperator<Real>(params);
}

/// A state expressed in the block eigenbases, so that U^n is a phase per
/// component. Evaluating at many n costs O(N^2) each, with no accumulation.
template <typename Real = double>
class SpectralState {
 public:
  SpectralState(const FloquetOperator<Real>& op, const SymmetricState<Real>& state) : op_(&op) {
    if (state.n_qubits() != op.n_qubits())
      throw std::invalid_argument("evolve: state has N=" + std::to_string(state.n_qubits()) +
                                  " but operator has N=" + std::to_string(op.n_qubits()));
    const CVector<Real> w = op.basis().to_parity(state.coeffs());
    const int dp = op.basis().dim_plus;
    const int dm = op.basis().dim_minus;
    plus_ = op.eigensystem_plus().vectors.adjoint() * w.head(dp);
    minus_ = op.eigensystem_minus().vectors.adjoint() * w.tail(dm);
  }

  SymmetricState<Real> at(long long n) const {
    const auto& ep = op_->eigensystem_plus();
    const auto& em = op_->eigensystem_minus();
    CVector<Real> w(op_->dimension());
    w.head(plus_.size()) = ep.vectors * advance(plus_, ep.angles, n);
    w.tail(minus_.size()) = em.vectors * advance(minus_, em.angles, n);
    return SymmetricState<Real>(op_->basis().from_parity(w));
  }

 private:
  static CVector<Real> advance(const CVector<Real>& x, const RVector<Real>& angles, long long n) {
    CVector<Real> out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = std::polar(Real(1), Real(n) * angles[i]) * x[i];
    return out;
  }

  const FloquetOperator<Real>* op_;
  CVector<Real> plus_;
  CVector<Real> minus_;
};

/// U^n |psi>, computed from block eigenphases.
template <typename Real>
SymmetricState<Real> evolve(const FloquetOperator<Real>& op, const SymmetricState<Real>& state, long long n) {
  if (n < 0) throw std::invalid_argument("evolve: n must be non-negative");
  if (state.n_qubits() != op.n_qubits())
    throw std::invalid_argument("evolve: dimension mismatch");
  if (n == 0) return state;
  return SpectralState<Real>(op, state).at(n);
}

namespace detail {

template <typename Real>
CMatrix<Real> block_power(const BlockEigensystem<Real>& es, long long n) {
  CVector<Real> ph(es.angles.size());
  for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::polar(Real(1), Real(n) * es.angles[i]);
  return es.vectors * ph.asDiagonal() * es.vectors.adjoint();
}

}  // namespace detail

/// U^n in the Dicke basis via per-block eigenphase exponentiation.
template <typename Real>
CMatrix<Real> operator_power(const FloquetOperator<Real>& op, long long n) {
  if (n < 0) throw std::invalid_argument("operator_power: n must be non-negative");
  const int dp = op.basis().dim_plus;
  const int dm = op.basis().dim_minus;
  CMatrix<Real> blocks = CMatrix<Real>::Zero(op.dimension(), op.dimension());
  blocks.topLeftCorner(dp, dp) = detail::block_power(op.eigensystem_plus(), n);
  blocks.bottomRightCorner(dm, dm) = detail::block_power(op.eigensystem_minus(), n);
  const CMatrix<Real>& p = op.basis().transform;
  return p * blocks * p.adjoint();
}

/// Block powers U+^n and U-^n in the parity basis.
template <typename Real>
std::pair<CMatrix<Real>, CMatrix<Real>> block_powers(const FloquetOperator<Real>& op, long long n) {
  return {detail::block_power(op.eigensystem_plus(), n), detail::block_power(op.eigensystem_minus(), n)};
}

/// ||A_n - A||_F^2 / (2N) for explicit matrices.
template <typename Derived1, typename Derived2>
double frobenius_deviation(const Eigen::MatrixBase<Derived1>& power_n, const Eigen::MatrixBase<Derived2>& base,
                           int n_qubits) {
  return static_cast<double>((power_n - base).squaredNorm()) / (2.0 * n_qubits);
}

/// delta(n) = ||U^n - U||_F^2 / (2N). Computed from eigenphases, which is
/// exact by unitary invariance of the Frobenius norm.
template <typename Real>
double deviation(const FloquetOperator<Real>& op, long long n) {
  if (n < 1) throw std::invalid_argument("deviation: n must be >= 1");
  const RVector<Real> th = op.eigenphases();
  Real acc = 0;
  for (Eigen::Index i = 0; i < th.size(); ++i)
    acc += std::norm(std::polar(Real(1), Real(n) * th[i]) - std::polar(Real(1), th[i]));
  return static_cast<double>(acc) / (2.0 * op.n_qubits());
}

struct DeviationSeries {
  std::vector<long long> n;
  std::vector<double> delta;
};

template <typename Real>
DeviationSeries deviation_series(const FloquetOperator<Real>& op, long long n_max) {
  DeviationSeries s;
  for (long long n = 1; n <= n_max; ++n) {
    s.n.push_back(n);
    s.delta.push_back(deviation(op, n));
  }
  return s;
}

/// Smallest T <= t_max with U^T = I, i.e. every eigenphase within tol of a
/// multiple of 2 pi / T.
template <typename Real>
std::optional<long long> find_period(const FloquetOperator<Real>& op, long long t_max, double tol) {
  if (t_max < 1) throw std::invalid_argument("find_period: t_max must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("find_period: tol must be > 0");
  const RVector<Real> th = op.eigenphases();
  const Real two_pi = 2 * pi_v<Real>;
  for (long long t = 1; t <= t_max; ++t) {
    bool ok = true;
    for (Eigen::Index i = 0; i < th.size() && ok; ++i) {
      using std::remainder;
      const Real miss = std::abs(remainder(Real(t) * th[i], two_pi)) / Real(t);
      ok = static_cast<double>(miss) < tol;
    }
    if (ok) return t;
  }
  return std::nullopt;
}

}  // namespace kising
