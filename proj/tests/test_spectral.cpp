#include <algorithm>
#include <cmath>
#include <set>
#include <numbers>

#include "doctest.h"
#include "kising/random.hpp"
#include "kising/spectral.hpp"

using namespace kising;
constexpr double pi = std::numbers::pi;

namespace {

FloquetOperator<double> standard(int n) { return build_floquet(ModelParams<double>{n, 0.5, pi / 4}); }

std::multiset<int> multiplicities(const std::vector<Cluster>& cs) {
  std::multiset<int> out;
  for (const auto& c : cs) out.insert(c.multiplicity);
  return out;
}

}  // namespace

TEST_CASE("six-qubit eigenangles") {
  const auto a = eigenangles(standard(6));
  std::vector<double> expect{pi / 8, 3 * pi / 8, -7 * pi / 8, pi / 4, 3 * pi / 4, -3 * pi / 4, -pi / 4};
  std::sort(expect.begin(), expect.end());
  REQUIRE(a.size() == 7);
  for (int i = 0; i < 7; ++i) CHECK(std::abs(a[i] - expect[i]) < 1e-12);
  CHECK(std::is_sorted(a.begin(), a.end()));
}

TEST_CASE("eight-qubit positive block angles") {
  const auto op = standard(8);
  std::vector<double> plus;
  for (double t : op.eigensystem_plus().angles) plus.push_back(wrap_angle(t));
  for (double want : {pi / 2, -5 * pi / 6, -pi / 6, -3 * pi / 4, pi / 4}) {
    const bool found = std::any_of(plus.begin(), plus.end(), [&](double t) { return std::abs(t - want) < 1e-10; });
    CHECK(found);
  }
}

TEST_CASE("identity spectrum") {
  const auto a = eigenangles(build_floquet(ModelParams<double>{9, 0.0, 0.0}));
  for (double t : a) CHECK(std::abs(t) < 1e-14);
  const auto cs = degeneracy_clusters(a, 1e-8);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].multiplicity == 10);
}

TEST_CASE("clustering basics") {
  CHECK(degeneracy_clusters({}, 1e-8).empty());
  CHECK_THROWS_AS(degeneracy_clusters({0.1}, 0.0), std::invalid_argument);
  const auto single = degeneracy_clusters({0.1, 0.5, 1.0, -2.0}, 1e-8);
  CHECK(single.size() == 4);
  // Neighbours across the seam at pi join one cluster.
  const auto seam = degeneracy_clusters({pi - 1e-10, -pi + 1e-10, 0.0}, 1e-8);
  REQUIRE(seam.size() == 2);
  CHECK(multiplicities(seam) == std::multiset<int>{1, 2});
  const auto seam_cluster = std::find_if(seam.begin(), seam.end(), [](const Cluster& c) { return c.multiplicity == 2; });
  CHECK(std::abs(std::abs(seam_cluster->angle) - pi) < 1e-9);
  // Single linkage chains small gaps.
  const auto chain = degeneracy_clusters({0.0, 0.6e-8, 1.2e-8, 1.8e-8, 1.0}, 1e-8);
  CHECK(multiplicities(chain) == std::multiset<int>{1, 4});
}

TEST_CASE("clustering is invariant under permutation and common shifts") {
  Rng rng(12);
  std::uniform_real_distribution<double> ang(-pi, pi);
  std::uniform_int_distribution<int> base(-23, 24);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a;
    for (int i = 0; i < 40; ++i) a.push_back(i % 3 == 0 ? ang(rng) : base(rng) * pi / 24 + 1e-12 * (i % 5));
    const auto ref = multiplicities(degeneracy_clusters(a, 1e-8));
    int total = 0;
    for (int m : ref) total += m;
    CHECK(total == 40);
    std::shuffle(a.begin(), a.end(), rng);
    CHECK(multiplicities(degeneracy_clusters(a, 1e-8)) == ref);
    const double shift = ang(rng);
    std::vector<double> shifted;
    for (double t : a) shifted.push_back(wrap_angle(t + shift));
    CHECK(multiplicities(degeneracy_clusters(shifted, 1e-8)) == ref);
  }
}

TEST_CASE("rational classification") {
  const auto f = rational_fit(pi / 4, 24);
  CHECK(f.p == 1);
  CHECK(f.q == 4);
  CHECK(f.residual < 1e-15);
  CHECK(f.exact);
  const auto g = rational_fit(-7 * pi / 8, 48);
  CHECK(g.p == -7);
  CHECK(g.q == 8);
  const auto z = rational_fit(0.0, 5);
  CHECK(z.p == 0);
  CHECK(z.q == 1);
  CHECK_FALSE(rational_fit(1.0, 24).exact);
  CHECK_THROWS_AS(rational_fit(0.3, 0), std::invalid_argument);

  for (const auto& fit : rational_classify(eigenangles(standard(6)), 8)) {
    CHECK(fit.residual < 1e-10);
    CHECK(fit.exact);
  }
  const auto odd = rational_classify(eigenangles(standard(13)), 24);
  const auto far = std::count_if(odd.begin(), odd.end(), [](const RationalFit& r) { return r.residual > 1e-4; });
  CHECK(2 * far > static_cast<long>(odd.size()));
}

TEST_CASE("histogram") {
  const auto h = angle_histogram({-pi, pi, 0.0, -pi + 1e-9, pi / 2}, 4);
  REQUIRE(h.edges.size() == 5);
  CHECK(h.edges.front() == doctest::Approx(-pi));
  CHECK(h.edges.back() == doctest::Approx(pi));
  // (-pi, -pi/2], (-pi/2, 0], (0, pi/2], (pi/2, pi]; -pi is the same angle as pi.
  CHECK(h.counts == std::vector<long long>{1, 1, 1, 2});
  CHECK_THROWS_AS(angle_histogram({0.0}, 0), std::invalid_argument);
  Histogram flat{{}, {10, 10, 10, 10}};
  CHECK(max_poisson_deviation(flat) == 0.0);
  Histogram skew{{}, {0, 20}};
  CHECK(max_poisson_deviation(skew) == doctest::Approx(10 / std::sqrt(10.0)));
}

TEST_CASE("even sizes sit on multiples of pi/24") {
  for (int n = 6; n <= 64; n += 2) {
    for (double t : eigenangles(standard(n))) {
      const double steps = t / (pi / 24);
      CHECK(std::abs(steps - std::round(steps)) * (pi / 24) < 1e-8);
    }
  }
  const auto hundred = degeneracy_clusters(eigenangles(standard(100)), 1e-8);
  CHECK(hundred.size() <= 24);
}

TEST_CASE("odd sizes spread uniformly") {
  for (int n = 5; n <= 63; n += 2) {
    const auto h = angle_histogram(eigenangles(standard(n)), 16);
    CHECK(max_poisson_deviation(h) <= 5.0);
  }
  const auto cs = degeneracy_clusters(eigenangles(standard(101)), 1e-8);
  CHECK(cs.size() >= 92);  // within 10% of N+1 = 102
}

TEST_CASE("spectrum report") {
  const auto r = spectrum_report(standard(12));
  CHECK(r.eigenangles.size() == 13);
  int total = 0;
  for (const auto& c : r.clusters) total += c.multiplicity;
  CHECK(total == 13);
  CHECK(r.rational_fit.size() == 13);
  long long counted = 0;
  for (auto c : r.histogram.counts) counted += c;
  CHECK(counted == 13);
  for (const auto& f : r.rational_fit) {
    CHECK(f.residual >= 0.0);
    CHECK(f.exact);
    CHECK(48 % f.q == 0);
  }
}
