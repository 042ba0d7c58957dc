#pragma once

// Brute-force reference in the full 2^N Hilbert space (N <= 12).
//
// Qubit 0 is the most significant bit of a computational-basis index, and
// bit value 0 is |0> (sigma^z = +1).

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kising/floquet.hpp"
#include "kising/symspace.hpp"
#include "kising/types.hpp"

namespace kising::oracle {

inline constexpr int kMaxQubits = 12;

inline void require_oracle_size(int n_qubits, const char* where) {
  require_system_size(n_qubits, where);
  if (n_qubits > kMaxQubits)
    throw std::length_error(std::string(where) + ": oracle limited to N <= 12, got N=" + std::to_string(n_qubits));
}

inline std::size_t full_dimension(int n_qubits) { return std::size_t{1} << n_qubits; }

inline int bit_of(std::size_t x, int qubit, int n_qubits) {
  return static_cast<int>((x >> (n_qubits - 1 - qubit)) & 1u);
}

template <typename Real = double>
class FullState {
 public:
  static constexpr double kNormTolerance = 1e-10;

  FullState(int n_qubits, CVector<Real> amplitudes) : n_(n_qubits), amp_(std::move(amplitudes)) {
    require_oracle_size(n_, "FullState");
    if (static_cast<std::size_t>(amp_.size()) != full_dimension(n_))
      throw std::invalid_argument("FullState: amplitude vector must have length 2^N");
    const double dev = std::abs(static_cast<double>(amp_.squaredNorm()) - 1.0);
    if (dev > kNormTolerance)
      throw std::invalid_argument("FullState: amplitudes not unit norm (|1-norm^2| = " + std::to_string(dev) + ")");
  }

  int n_qubits() const { return n_; }
  const CVector<Real>& amplitudes() const { return amp_; }

 private:
  int n_;
  CVector<Real> amp_;
};

/// (N+1) x 2^N map whose row k is the Dicke state |k> in the full space.
template <typename Real = double>
RMatrix<Real> symmetric_projector(int n_qubits) {
  require_oracle_size(n_qubits, "symmetric_projector");
  const std::size_t dim = full_dimension(n_qubits);
  RMatrix<Real> p = RMatrix<Real>::Zero(n_qubits + 1, static_cast<Eigen::Index>(dim));
  for (std::size_t x = 0; x < dim; ++x) {
    const int k = std::popcount(x);
    p(k, static_cast<Eigen::Index>(x)) = Real(1) / std::sqrt(static_cast<Real>(binomial_exact(n_qubits, k)));
  }
  return p;
}

template <typename Real>
FullState<Real> embed(const SymmetricState<Real>& state) {
  const int n = state.n_qubits();
  require_oracle_size(n, "embed");
  const std::size_t dim = full_dimension(n);
  CVector<Real> amp(static_cast<Eigen::Index>(dim));
  for (std::size_t x = 0; x < dim; ++x) {
    const int k = std::popcount(x);
    amp[static_cast<Eigen::Index>(x)] = state[k] / std::sqrt(static_cast<Real>(binomial_exact(n, k)));
  }
  return FullState<Real>(n, std::move(amp));
}

/// Dicke coefficients of a full state plus the norm of the part outside the
/// symmetric subspace.
template <typename Real = double>
struct Projection {
  CVector<Real> coeffs;
  double leakage;

  /// The projected state, renormalized.
  SymmetricState<Real> state() const { return SymmetricState<Real>::normalized(coeffs); }
};

template <typename Real>
Projection<Real> project_symmetric(const FullState<Real>& full) {
  const int n = full.n_qubits();
  const std::size_t dim = full_dimension(n);
  const auto& a = full.amplitudes();
  CVector<Real> c = CVector<Real>::Zero(n + 1);
  for (std::size_t x = 0; x < dim; ++x) {
    const int k = std::popcount(x);
    c[k] += a[static_cast<Eigen::Index>(x)] / std::sqrt(static_cast<Real>(binomial_exact(n, k)));
  }
  Real outside = 0;
  for (std::size_t x = 0; x < dim; ++x) {
    const int k = std::popcount(x);
    const Complex<Real> back = c[k] / std::sqrt(static_cast<Real>(binomial_exact(n, k)));
    outside += std::norm(a[static_cast<Eigen::Index>(x)] - back);
  }
  return {c, static_cast<double>(std::sqrt(outside))};
}

/// Phases exp(-i J tau sum_{l<l'} z_l z_l') on every basis state.
template <typename Real>
CVector<Real> full_ising_phases(const ModelParams<Real>& params) {
  const int n = params.n_qubits;
  const std::size_t dim = full_dimension(n);
  CVector<Real> d(static_cast<Eigen::Index>(dim));
  for (std::size_t x = 0; x < dim; ++x) {
    long long pairs = 0;
    for (int l = 0; l < n; ++l)
      for (int m = l + 1; m < n; ++m) pairs += bit_of(x, l, n) == bit_of(x, m, n) ? 1 : -1;
    d[static_cast<Eigen::Index>(x)] = std::polar(Real(1), -params.coupling * params.kick * Real(pairs));
  }
  return d;
}

/// (x)_l exp(-i tau sigma^y_l) = (x)_l [[cos, -sin], [sin, cos]].
template <typename Real>
RMatrix<Real> full_kick(int n_qubits, Real tau) {
  Eigen::Matrix<Real, 2, 2> r;
  r << std::cos(tau), -std::sin(tau), std::sin(tau), std::cos(tau);
  RMatrix<Real> k = RMatrix<Real>::Ones(1, 1);
  for (int l = 0; l < n_qubits; ++l) {
    const Eigen::Index d = k.rows();
    RMatrix<Real> next(2 * d, 2 * d);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) next.block(a * d, b * d, d, d) = r(a, b) * k;
    k.swap(next);
  }
  return k;
}

/// Dense 2^N x 2^N Floquet operator built from the literal pair sum.
template <typename Real>
CMatrix<Real> full_floquet(const ModelParams<Real>& params) {
  params.validate();
  require_oracle_size(params.n_qubits, "full_floquet");
  const CVector<Real> d = full_ising_phases(params);
  const RMatrix<Real> k = full_kick(params.n_qubits, params.kick);
  CMatrix<Real> u(k.rows(), k.cols());
  for (Eigen::Index c = 0; c < k.cols(); ++c) u.col(c) = d.cwiseProduct(k.col(c).template cast<Complex<Real>>());
  return u;
}

/// One Floquet step applied qubit by qubit, without forming the matrix.
template <typename Real>
FullState<Real> apply_floquet(const ModelParams<Real>& params, const FullState<Real>& state) {
  const int n = state.n_qubits();
  if (n != params.n_qubits) throw std::invalid_argument("apply_floquet: dimension mismatch");
  CVector<Real> a = state.amplitudes();
  const Real c = std::cos(params.kick);
  const Real s = std::sin(params.kick);
  const std::size_t dim = full_dimension(n);
  for (int l = 0; l < n; ++l) {
    const std::size_t mask = std::size_t{1} << (n - 1 - l);
    for (std::size_t x = 0; x < dim; ++x) {
      if (x & mask) continue;
      const auto i0 = static_cast<Eigen::Index>(x);
      const auto i1 = static_cast<Eigen::Index>(x | mask);
      const Complex<Real> v0 = a[i0];
      const Complex<Real> v1 = a[i1];
      a[i0] = c * v0 - s * v1;
      a[i1] = s * v0 + c * v1;
    }
  }
  a = full_ising_phases(params).cwiseProduct(a);
  return FullState<Real>(n, std::move(a));
}

template <typename Real>
FullState<Real> evolve(const ModelParams<Real>& params, FullState<Real> state, long long n) {
  if (n < 0) throw std::invalid_argument("oracle::evolve: n must be non-negative");
  for (long long i = 0; i < n; ++i) state = apply_floquet(params, state);
  return state;
}

/// (x)_l sigma^y_l: flips every bit, with i per |0> and -i per |1>.
template <typename Real>
CVector<Real> apply_parity(const CVector<Real>& amp, int n_qubits) {
  const std::size_t dim = full_dimension(n_qubits);
  CVector<Real> out(amp.size());
  for (std::size_t x = 0; x < dim; ++x) {
    const int ones = std::popcount(x);
    const Complex<Real> ph = i_pow<Real>(n_qubits - ones) * i_pow<Real>(-ones);
    out[static_cast<Eigen::Index>(~x & (dim - 1))] = ph * amp[static_cast<Eigen::Index>(x)];
  }
  return out;
}

/// sum_l sigma^y_l on a full amplitude vector.
template <typename Real>
CVector<Real> apply_sum_sigma_y(const CVector<Real>& amp, int n_qubits) {
  const std::size_t dim = full_dimension(n_qubits);
  CVector<Real> out = CVector<Real>::Zero(amp.size());
  const Complex<Real> i(0, 1);
  for (int l = 0; l < n_qubits; ++l) {
    const std::size_t mask = std::size_t{1} << (n_qubits - 1 - l);
    for (std::size_t x = 0; x < dim; ++x) {
      // sigma^y |0> = i|1>, sigma^y |1> = -i|0>
      const Complex<Real> f = (x & mask) ? -i : i;
      out[static_cast<Eigen::Index>(x ^ mask)] += f * amp[static_cast<Eigen::Index>(x)];
    }
  }
  return out;
}

namespace detail {

/// Restriction of a full-space linear map to the Dicke basis.
template <typename Real, typename Apply>
CMatrix<Real> restrict_to_symmetric(int n_qubits, Apply&& apply) {
  require_oracle_size(n_qubits, "restrict_to_symmetric");
  CMatrix<Real> out(n_qubits + 1, n_qubits + 1);
  for (int k = 0; k <= n_qubits; ++k) {
    CVector<Real> e = CVector<Real>::Zero(n_qubits + 1);
    e[k] = 1;
    const FullState<Real> v = embed(SymmetricState<Real>(e));
    const CVector<Real> w = apply(v.amplitudes());
    const std::size_t dim = full_dimension(n_qubits);
    CVector<Real> c = CVector<Real>::Zero(n_qubits + 1);
    for (std::size_t x = 0; x < dim; ++x) {
      const int m = std::popcount(x);
      c[m] += w[static_cast<Eigen::Index>(x)] / std::sqrt(static_cast<Real>(binomial_exact(n_qubits, m)));
    }
    out.col(k) = c;
  }
  return out;
}

}  // namespace detail

template <typename Real = double>
CMatrix<Real> projected_sum_sigma_y(int n_qubits) {
  return detail::restrict_to_symmetric<Real>(n_qubits,
                                             [n_qubits](const CVector<Real>& a) { return apply_sum_sigma_y<Real>(a, n_qubits); });
}

template <typename Real = double>
CMatrix<Real> projected_parity(int n_qubits) {
  return detail::restrict_to_symmetric<Real>(n_qubits,
                                             [n_qubits](const CVector<Real>& a) { return apply_parity<Real>(a, n_qubits); });
}

/// P U P^T for the dense full operator.
template <typename Real>
CMatrix<Real> project_operator(const CMatrix<Real>& full, int n_qubits) {
  const RMatrix<Real> p = symmetric_projector<Real>(n_qubits);
  const CMatrix<Real> pc = p.template cast<Complex<Real>>();
  return pc * full * pc.transpose();
}

/// max |U Pi - Pi U| for the full parity operator Pi = (x)_l sigma^y_l.
template <typename Real>
double parity_commutator_residual(const CMatrix<Real>& u, int n_qubits) {
  const std::size_t dim = full_dimension(n_qubits);
  const std::size_t all = dim - 1;
  auto phase = [n_qubits](std::size_t x) {
    const int ones = std::popcount(x);
    return i_pow<Real>(n_qubits - ones) * i_pow<Real>(-ones);
  };
  Real worst = 0;
  for (std::size_t b = 0; b < dim; ++b) {
    const auto jb = static_cast<Eigen::Index>(b);
    const auto jbf = static_cast<Eigen::Index>(~b & all);
    const Complex<Real> pb = phase(b);
    for (std::size_t a = 0; a < dim; ++a) {
      const auto ia = static_cast<Eigen::Index>(a);
      const auto iaf = static_cast<Eigen::Index>(~a & all);
      const Complex<Real> lhs = u(ia, jbf) * pb;           // (U Pi)(a, b)
      const Complex<Real> rhs = phase(~a & all) * u(iaf, jb);  // (Pi U)(a, b)
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return static_cast<double>(worst);
}

/// Reduced density matrix on `keep` (one or two distinct qubits). For two
/// qubits the first entry of `keep` labels the high bit of the 4x4 index.
template <typename Real>
CMatrix<Real> partial_trace(const FullState<Real>& state, const std::vector<int>& keep) {
  const int n = state.n_qubits();
  if (keep.empty() || keep.size() > 2) throw std::invalid_argument("partial_trace: keep must hold 1 or 2 qubits");
  for (int q : keep)
    if (q < 0 || q >= n) throw std::out_of_range("partial_trace: qubit index out of range");
  if (keep.size() == 2 && keep[0] == keep[1]) throw std::invalid_argument("partial_trace: repeated qubit");

  const int kept = static_cast<int>(keep.size());
  const int rd = 1 << kept;
  const std::size_t rest_dim = full_dimension(n - kept);
  std::size_t kept_mask = 0;
  for (int q : keep) kept_mask |= std::size_t{1} << (n - 1 - q);

  // Row a of `m` holds psi(a, rest) over the traced-out configurations.
  CMatrix<Real> m = CMatrix<Real>::Zero(rd, static_cast<Eigen::Index>(rest_dim));
  const auto& amp = state.amplitudes();
  const std::size_t dim = full_dimension(n);
  for (std::size_t x = 0; x < dim; ++x) {
    int a = 0;
    for (int q : keep) a = (a << 1) | bit_of(x, q, n);
    // Compress the remaining bits, preserving their order.
    std::size_t r = 0;
    for (int l = 0; l < n; ++l) {
      const std::size_t bit = std::size_t{1} << (n - 1 - l);
      if (kept_mask & bit) continue;
      r = (r << 1) | ((x & bit) ? 1u : 0u);
    }
    m(a, static_cast<Eigen::Index>(r)) = amp[static_cast<Eigen::Index>(x)];
  }
  return m * m.adjoint();
}

}  // namespace kising::oracle
