#pragma once

// Quasi-energy analysis: sorted eigenangles, degeneracy clusters, rational
// classification in units of pi, and angle histograms.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kising/floquet.hpp"
#include "kising/types.hpp"

namespace kising {

inline constexpr double kDegeneracyTolerance = 1e-8;
inline constexpr int kDefaultQMax = 48;
inline constexpr int kDefaultHistogramBins = 16;
inline constexpr double kExactRationalResidual = 1e-8;

/// All N+1 eigenangles in (-pi, pi], ascending.
template <typename Real>
std::vector<double> eigenangles(const FloquetOperator<Real>& op) {
  const RVector<Real> th = op.eigenphases();
  std::vector<double> out(static_cast<std::size_t>(th.size()));
  for (Eigen::Index i = 0; i < th.size(); ++i) out[i] = static_cast<double>(wrap_angle<Real>(th[i]));
  std::sort(out.begin(), out.end());
  return out;
}

struct Cluster {
  double angle;  // circular mean, in (-pi, pi]
  int multiplicity;
};

/// Single-linkage clustering on the circle: neighbours closer than `tol`
/// (including across the -pi/pi seam) share a cluster. Clusters are ordered
/// by representative angle.
inline std::vector<Cluster> degeneracy_clusters(std::vector<double> angles, double tol = kDegeneracyTolerance) {
  if (!(tol > 0)) throw std::invalid_argument("degeneracy_clusters: tol must be > 0");
  std::vector<Cluster> out;
  if (angles.empty()) return out;
  for (double& a : angles) a = wrap_angle(a);
  std::sort(angles.begin(), angles.end());
  const double two_pi = 2 * pi_v<double>;
  const std::size_t n = angles.size();

  // Start scanning just after the widest gap, so no cluster straddles the start.
  std::size_t start = 0;
  double widest = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = i == 0 ? angles[0] + two_pi - angles[n - 1] : angles[i] - angles[i - 1];
    if (gap > widest) {
      widest = gap;
      start = i;
    }
  }
  if (widest <= tol) {
    // Every gap is small: one cluster covering the circle.
    double s = 0, c = 0;
    for (double a : angles) s += std::sin(a), c += std::cos(a);
    out.push_back({wrap_angle(std::atan2(s, c)), static_cast<int>(n)});
    return out;
  }

  double sin_sum = 0, cos_sum = 0;
  int count = 0;
  auto flush = [&] {
    out.push_back({wrap_angle(std::atan2(sin_sum, cos_sum)), count});
    sin_sum = cos_sum = 0;
    count = 0;
  };
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t i = (start + step) % n;
    if (count > 0) {
      const std::size_t prev = (i + n - 1) % n;
      double gap = angles[i] - angles[prev];
      if (gap < 0) gap += two_pi;
      if (gap > tol) flush();
    }
    sin_sum += std::sin(angles[i]);
    cos_sum += std::cos(angles[i]);
    ++count;
  }
  flush();
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) { return a.angle < b.angle; });
  return out;
}

/// theta ~ (p/q) pi with q > 0 and gcd(p, q) = 1.
struct RationalFit {
  long long p = 0;
  long long q = 1;
  double residual = 0;
  bool exact = false;
};

inline RationalFit rational_fit(double theta, int q_max = kDefaultQMax) {
  if (q_max < 1) throw std::invalid_argument("rational_classify: q_max must be >= 1");
  const double pi = pi_v<double>;
  RationalFit best;
  best.residual = INFINITY;
  for (long long q = 1; q <= q_max; ++q) {
    const long long p = std::llround(theta * double(q) / pi);
    const double r = std::abs(theta - double(p) * pi / double(q));
    if (r < best.residual) {
      const long long g = std::gcd(p < 0 ? -p : p, q);
      best = {p / g, q / g, r, false};
    }
  }
  best.exact = best.residual < kExactRationalResidual;
  return best;
}

inline std::vector<RationalFit> rational_classify(const std::vector<double>& angles, int q_max = kDefaultQMax) {
  std::vector<RationalFit> out;
  out.reserve(angles.size());
  for (double a : angles) out.push_back(rational_fit(a, q_max));
  return out;
}

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges from -pi to pi
  std::vector<long long> counts;
};

/// Equal-width bins over (-pi, pi]; bin b covers (edge_b, edge_{b+1}].
inline Histogram angle_histogram(const std::vector<double>& angles, int bins = kDefaultHistogramBins) {
  if (bins < 1) throw std::invalid_argument("angle_histogram: bins must be >= 1");
  const double pi = pi_v<double>;
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (int b = 0; b <= bins; ++b) h.edges.push_back(-pi + 2 * pi * b / bins);
  for (double a : angles) {
    const double w = wrap_angle(a);
    int b = static_cast<int>(std::ceil((w + pi) / (2 * pi) * bins)) - 1;
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[b];
  }
  return h;
}

/// Largest |count - mean| / sqrt(mean) over bins, against a uniform Poisson model.
inline double max_poisson_deviation(const Histogram& h) {
  long long total = 0;
  for (long long c : h.counts) total += c;
  if (total == 0 || h.counts.empty()) return 0;
  const double mean = double(total) / double(h.counts.size());
  double worst = 0;
  for (long long c : h.counts) worst = std::max(worst, std::abs(double(c) - mean) / std::sqrt(mean));
  return worst;
}

struct SpectrumReport {
  std::vector<double> eigenangles;
  std::vector<Cluster> clusters;
  std::vector<RationalFit> rational_fit;
  Histogram histogram;
};

template <typename Real>
SpectrumReport spectrum_report(const FloquetOperator<Real>& op, double tol = kDegeneracyTolerance,
                               int q_max = kDefaultQMax, int bins = kDefaultHistogramBins) {
  SpectrumReport r;
  r.eigenangles = eigenangles(op);
  r.clusters = degeneracy_clusters(r.eigenangles, tol);
  r.rational_fit = rational_classify(r.eigenangles, q_max);
  r.histogram = angle_histogram(r.eigenangles, bins);
  return r;
}

}  // namespace kising
