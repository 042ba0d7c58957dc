#pragma once

// Permutation-symmetric (Dicke) representation of N qubits.
//
// Basis ordering is k ascending, where k counts qubits in |1>. All objects
// here are built by pure functions and are immutable afterwards.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kising/types.hpp"

namespace kising {

struct DickeIndex {
  int n_qubits;
  int k;

  DickeIndex(int n, int k_) : n_qubits(n), k(k_) {
    if (n < 1) throw std::invalid_argument("DickeIndex: n_qubits must be >= 1");
    if (k_ < 0 || k_ > n) throw std::out_of_range("DickeIndex: k outside [0, N]");
  }
  int dimension() const { return n_qubits + 1; }
  /// Collective spin j = N/2.
  double spin() const { return 0.5 * n_qubits; }
  /// Index of the spin-flipped partner |N-k>.
  int partner() const { return n_qubits - k; }
};

inline void require_system_size(int n_qubits, const char* where) {
  if (n_qubits < 1)
    throw std::invalid_argument(std::string(where) + ": invalid system size N=" +
                                std::to_string(n_qubits));
}

/// Exact binomial coefficient; valid for n <= 60 (no overflow up to C(60,30)).
inline std::uint64_t binomial_exact(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (n > 60) throw std::overflow_error("binomial_exact: n > 60");
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

template <typename Real = double>
Real log_binomial(int n, int k) {
  using std::lgamma;
  return lgamma(Real(n + 1)) - lgamma(Real(k + 1)) - lgamma(Real(n - k + 1));
}

/// Unit-norm state in the (N+1)-dimensional symmetric subspace.
template <typename Real = double>
class SymmetricState {
 public:
  static constexpr double kNormTolerance = 1e-10;

  explicit SymmetricState(CVector<Real> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 2)
      throw std::invalid_argument("SymmetricState: need at least 2 coefficients (N >= 1)");
    const double dev = std::abs(static_cast<double>(coeffs_.squaredNorm()) - 1.0);
    if (dev > kNormTolerance)
      throw std::invalid_argument("SymmetricState: coefficients not unit norm (|1-norm^2| = " +
                                  std::to_string(dev) + ")");
  }

  /// Normalizes an arbitrary nonzero vector.
  static SymmetricState normalized(CVector<Real> v) {
    const Real nrm = v.norm();
    if (!(nrm > Real(0))) throw std::invalid_argument("SymmetricState: zero vector");
    v /= nrm;
    return SymmetricState(std::move(v));
  }

  int n_qubits() const { return static_cast<int>(coeffs_.size()) - 1; }
  const CVector<Real>& coeffs() const { return coeffs_; }
  Complex<Real> operator[](Eigen::Index k) const { return coeffs_[k]; }

 private:
  CVector<Real> coeffs_;
};

/// SU(2) coherent state, every qubit in cos(t/2)|0> + e^{-i p} sin(t/2)|1>.
template <typename Real = double>
SymmetricState<Real> coherent_state(int n_qubits, Real theta0, Real phi0) {
  require_system_size(n_qubits, "coherent_state");
  using std::cos;
  using std::sin;
  const int n = n_qubits;
  const Real c = cos(theta0 / 2);
  const Real s = sin(theta0 / 2);
  CVector<Real> out(n + 1);

  if (n <= 60) {
    for (int k = 0; k <= n; ++k) {
      const Real mag = std::sqrt(static_cast<Real>(binomial_exact(n, k))) *
                       std::pow(c, n - k) * std::pow(s, k);
      out[k] = std::polar(Real(1), -Real(k) * phi0) * mag;
    }
    return SymmetricState<Real>(std::move(out));
  }

  // Log domain for large N; the tiny rounding in lgamma is removed by the
  // final renormalization.
  const Real log_c = std::log(std::abs(c));
  const Real log_s = std::log(std::abs(s));
  for (int k = 0; k <= n; ++k) {
    if ((c == Real(0) && k < n) || (s == Real(0) && k > 0)) {
      out[k] = 0;
      continue;
    }
    Real lg = Real(0.5) * log_binomial<Real>(n, k);
    if (n - k > 0) lg += Real(n - k) * log_c;
    if (k > 0) lg += Real(k) * log_s;
    Real sign = 1;
    if (c < 0 && (n - k) % 2 == 1) sign = -sign;
    if (s < 0 && k % 2 == 1) sign = -sign;
    out[k] = std::polar(sign * std::exp(lg), -Real(k) * phi0);
  }
  return SymmetricState<Real>::normalized(std::move(out));
}

/// Entry k is the eigenvalue N - 2k of sum_l sigma^z_l on |k>.
template <typename Real = double>
RVector<Real> collective_sz_eigenvalues(int n_qubits) {
  require_system_size(n_qubits, "collective_sz_eigenvalues");
  RVector<Real> out(n_qubits + 1);
  for (int k = 0; k <= n_qubits; ++k) out[k] = Real(n_qubits - 2 * k);
  return out;
}

namespace detail {

/// sqrt((k+1)(N-k)), k = 0..N-1: magnitude of the Dicke ladder elements.
template <typename Real>
RVector<Real> ladder_magnitudes(int n) {
  RVector<Real> out(n);
  for (int k = 0; k < n; ++k) out[k] = std::sqrt(Real(k + 1) * Real(n - k));
  return out;
}

}  // namespace detail

/// sum_l sigma^y_l restricted to the symmetric subspace. With sigma^y|0> = i|1>,
/// <k+1|.|k> = i sqrt((k+1)(N-k)).
template <typename Real = double>
CMatrix<Real> collective_sy_matrix(int n_qubits) {
  require_system_size(n_qubits, "collective_sy_matrix");
  const int n = n_qubits;
  const RVector<Real> mag = detail::ladder_magnitudes<Real>(n);
  CMatrix<Real> m = CMatrix<Real>::Zero(n + 1, n + 1);
  for (int k = 0; k < n; ++k) {
    m(k + 1, k) = Complex<Real>(0, mag[k]);
    m(k, k + 1) = Complex<Real>(0, -mag[k]);
  }
  return m;
}

/// Closed action of the parity operator (x)_l sigma^y_l on Dicke states:
/// |k> -> i^N (-1)^k |N-k>.
template <typename Real = double>
CMatrix<Real> parity_operator(int n_qubits) {
  require_system_size(n_qubits, "parity_operator");
  const int n = n_qubits;
  CMatrix<Real> m = CMatrix<Real>::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) m(n - k, k) = i_pow<Real>(n) * Real(k % 2 == 0 ? 1 : -1);
  return m;
}

/// Parity-adapted basis. Columns are |phi^+> states (pairs by ascending q, then
/// the unpaired middle state for even N), followed by the |phi^-> states.
template <typename Real = double>
struct ParityBasis {
  /// Column with support on at most two Dicke states.
  struct Column {
    int lo;
    int hi;  // -1 when the column is a single Dicke state
    Complex<Real> w_lo;
    Complex<Real> w_hi;
  };

  int n_qubits = 0;
  int dim_plus = 0;
  int dim_minus = 0;
  CMatrix<Real> transform;
  std::vector<Column> columns;

  int dimension() const { return dim_plus + dim_minus; }

  /// P^dagger v.
  CVector<Real> to_parity(const CVector<Real>& v) const {
    CVector<Real> out(dimension());
    for (int a = 0; a < dimension(); ++a) {
      const Column& c = columns[a];
      Complex<Real> acc = std::conj(c.w_lo) * v[c.lo];
      if (c.hi >= 0) acc += std::conj(c.w_hi) * v[c.hi];
      out[a] = acc;
    }
    return out;
  }

  /// P w.
  CVector<Real> from_parity(const CVector<Real>& w) const {
    CVector<Real> out = CVector<Real>::Zero(dimension());
    for (int a = 0; a < dimension(); ++a) {
      const Column& c = columns[a];
      out[c.lo] += c.w_lo * w[a];
      if (c.hi >= 0) out[c.hi] += c.w_hi * w[a];
    }
    return out;
  }

  /// (P^dagger M P)(a, b) for columns a, b, in O(1).
  Complex<Real> element(const CMatrix<Real>& m, int a, int b) const {
    const Column& ca = columns[a];
    const Column& cb = columns[b];
    Complex<Real> acc = std::conj(ca.w_lo) * (m(ca.lo, cb.lo) * cb.w_lo);
    if (cb.hi >= 0) acc += std::conj(ca.w_lo) * (m(ca.lo, cb.hi) * cb.w_hi);
    if (ca.hi >= 0) {
      acc += std::conj(ca.w_hi) * (m(ca.hi, cb.lo) * cb.w_lo);
      if (cb.hi >= 0) acc += std::conj(ca.w_hi) * (m(ca.hi, cb.hi) * cb.w_hi);
    }
    return acc;
  }

  /// P^dagger M P restricted to the rows/columns [row0, row0+rows) x [col0, col0+cols).
  CMatrix<Real> block(const CMatrix<Real>& m, int row0, int rows, int col0, int cols) const {
    CMatrix<Real> out(rows, cols);
    for (int b = 0; b < cols; ++b)
      for (int a = 0; a < rows; ++a) out(a, b) = element(m, row0 + a, col0 + b);
    return out;
  }
};

template <typename Real = double>
ParityBasis<Real> parity_basis(int n_qubits) {
  require_system_size(n_qubits, "parity_basis");
  using Column = typename ParityBasis<Real>::Column;
  const int n = n_qubits;
  const Real h = Real(1) / std::sqrt(Real(2));

  ParityBasis<Real> pb;
  pb.n_qubits = n;
  std::vector<Column> plus;
  std::vector<Column> minus;

  if (n % 2 == 0) {
    const int j = n / 2;
    for (int r = 0; r < j; ++r) {
      const Complex<Real> s((j - r) % 2 == 0 ? 1 : -1, 0);
      plus.push_back({r, n - r, Complex<Real>(h), s * h});
      minus.push_back({r, n - r, Complex<Real>(h), -s * h});
    }
    plus.push_back({j, -1, Complex<Real>(1), Complex<Real>(0)});
  } else {
    for (int q = 0; q <= (n - 1) / 2; ++q) {
      const Complex<Real> s = i_pow<Real>(n - 2 * q);
      plus.push_back({q, n - q, Complex<Real>(h), s * h});
      minus.push_back({q, n - q, Complex<Real>(h), -s * h});
    }
  }

  pb.dim_plus = static_cast<int>(plus.size());
  pb.dim_minus = static_cast<int>(minus.size());
  pb.columns = plus;
  pb.columns.insert(pb.columns.end(), minus.begin(), minus.end());

  pb.transform = CMatrix<Real>::Zero(n + 1, n + 1);
  for (int a = 0; a <= n; ++a) {
    const Column& c = pb.columns[a];
    pb.transform(c.lo, a) = c.w_lo;
    if (c.hi >= 0) pb.transform(c.hi, a) = c.w_hi;
  }
  return pb;
}

}  // namespace kising
