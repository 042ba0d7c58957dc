// Acceptance report: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "kising/entangle.hpp"
#include "kising/oracle.hpp"
#include "kising/random.hpp"
#include "kising/spectral.hpp"

using namespace kising;
using M = CMatrix<double>;
constexpr double pi = std::numbers::pi;

namespace {

// Pinned tolerances and budgets.
constexpr double kTableTol = 1e-9;
constexpr double kCmaxTol = 1e-6;
constexpr double kFormulaTol = 1e-9;
constexpr double kPeriodTol = 1e-9;
constexpr double kZeroDelta = 1e-8;
constexpr double kGridTol = 1e-8;
constexpr double kPoissonSigma = 5.0;
constexpr double kOracleTol = 1e-10;
constexpr double kConjugationTol = 1e-12;
constexpr double kPatternTol = 1e-8;
constexpr double kInvariantTol = 1e-9;
constexpr double kTableSeconds = 1.0;
constexpr double kPeriodSeconds = 120.0;
constexpr double kScaleSeconds = 60.0;

FloquetOperator<double> standard(int n) { return build_floquet(ModelParams<double>{n, 0.5, pi / 4}); }
SymmetricState<double> zero_state(int n) { return coherent_state(n, 0.0, 0.0); }
SymmetricState<double> plus_y_state(int n) { return coherent_state(n, pi / 2, -pi / 2); }

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> concurrences(int n, const SymmetricState<double>& s, long long n_max) {
  std::vector<double> out;
  for (const auto& r : entanglement_series(standard(n), s, n_max)) out.push_back(r.concurrence);
  return out;
}

// Largest deviation of a computed series from a periodic table over n = 0..n_max.
double table_error(const std::vector<double>& computed, const std::vector<double>& period) {
  double worst = 0;
  for (std::size_t i = 0; i < computed.size(); ++i)
    worst = std::max(worst, std::abs(computed[i] - period[i % period.size()]));
  return worst;
}

std::vector<double> eight_like_zero(double a, double b) {
  return {0, a, a, b, b, 0, 0, 0, 0, a, a, 0, 0, a, a, 0, 0, 0, 0, b, b, a, a, 0};
}
std::vector<double> eight_like_plus(double a, double b) { return {0, a, b, 0, 0, a, 0, a, 0, 0, b, a}; }

const std::vector<double> kSixZero{0, .05618621785, .05618621785, 0, 0, .05618621785, .05618621785, 0};
const std::vector<double> kSixPlus{0, .05618621785, .06698729812, .05618621785};
const std::vector<double> kEightZero = eight_like_zero(.015165042945, .029508497188);
const std::vector<double> kEightPlus = eight_like_plus(.015165042945, .029508497188);
const std::vector<double> kTenZero{0, .003876200145, .003876200145, 0, 0, .003876200145, .003876200145, 0};
const std::vector<double> kTenPlus{0, .003876200145, .003921629176, .003876200145};
const std::vector<double> kTwelveZero = eight_like_zero(.000974662566, .001945554635);
const std::vector<double> kTwelvePlus = eight_like_plus(.000974662566, .001945554635);

Outcome six_qubit_table() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto c = concurrences(6, zero_state(6), 15);
  const double secs = seconds_since(t0);
  const double err = table_error(c, kSixZero);
  o.require(err < kTableTol, fmt("max error %.3g", err));
  o.require(secs < kTableSeconds, fmt("took %.3g s", secs));
  if (o.pass) o.detail = fmt("max error %.2g", err) + fmt(", %.3f s", secs);
  return o;
}

Outcome eight_qubit_table() {
  Outcome o;
  const auto c = concurrences(8, zero_state(8), 48);  // two full periods
  const double err = table_error(c, kEightZero);
  o.require(err < kTableTol, fmt("max error %.3g", err));
  if (o.pass) o.detail = fmt("n <= 48, max error %.2g", err);
  return o;
}

Outcome larger_tables() {
  Outcome o;
  struct Case {
    int n;
    bool plus;
    const std::vector<double>* table;
  };
  const std::vector<Case> cases{{6, true, &kSixPlus},    {8, true, &kEightPlus},     {10, false, &kTenZero},
                                {10, true, &kTenPlus},   {12, false, &kTwelveZero}, {12, true, &kTwelvePlus}};
  double worst = 0;
  for (const auto& cs : cases) {
    const auto c = concurrences(cs.n, cs.plus ? plus_y_state(cs.n) : zero_state(cs.n), 48);
    const double err = table_error(c, *cs.table);
    worst = std::max(worst, err);
    o.require(err < kTableTol, "N=" + std::to_string(cs.n) + (cs.plus ? " |+>" : " |0>") + fmt(" error %.3g", err));
  }
  const double ten = concurrences(10, zero_state(10), 1)[1];
  const double twelve = concurrences(12, zero_state(12), 3)[3];
  o.require(std::abs(ten - 0.003876200145) < kTableTol, fmt("N=10 n=1 gives %.12g", ten));
  o.require(std::abs(twelve - 0.001945554635) < kTableTol, fmt("N=12 n=3 gives %.12g", twelve));
  if (o.pass) o.detail = fmt("6 tables + 2 spot values, max error %.2g", worst);
  return o;
}

Outcome concurrence_maxima() {
  Outcome o;
  const int sizes[4] = {6, 8, 10, 12};
  const int zero_period[4] = {8, 24, 8, 24};
  const int plus_period[4] = {4, 12, 4, 12};
  const double zero_max[4] = {0.05618622, 0.029509, 0.0038762, 0.0019455};
  const double plus_max[4] = {0.0669873, 0.0295085, 0.00392163, 0.0019455};
  double worst = 0;
  for (int i = 0; i < 4; ++i) {
    const int n = sizes[i];
    const auto cz = concurrences(n, zero_state(n), zero_period[i] - 1);
    const auto cp = concurrences(n, plus_y_state(n), plus_period[i] - 1);
    const double ez = std::abs(*std::max_element(cz.begin(), cz.end()) - zero_max[i]);
    const double ep = std::abs(*std::max_element(cp.begin(), cp.end()) - plus_max[i]);
    worst = std::max({worst, ez, ep});
    o.require(ez < kCmaxTol, "N=" + std::to_string(n) + fmt(" |0> error %.3g", ez));
    o.require(ep < kCmaxTol, "N=" + std::to_string(n) + fmt(" |+> error %.3g", ep));
  }
  if (o.pass) o.detail = fmt("max error %.2g", worst);
  return o;
}

Outcome entropy_formulas() {
  Outcome o;
  const double r2 = std::sqrt(2.0);
  struct Formula {
    const char* name;
    int n;
    bool plus;
    std::function<double(double)> s;  // argument x = n pi
  };
  const std::vector<Formula> formulas{
      {"S6+", 6, true,
       [&](double x) {
         const double b = 3 * (1 + std::cos(x)) + r2 * (1 - std::cos(x)) + 10 * std::cos(x / 2);
         return 0.5 - b * b / 512;
       }},
      {"S8+", 8, true,
       [](double x) {
         const double c4 = std::cos(x / 4);
         return 0.5 * (1 - c4 * c4 * std::pow(5 + 7 * std::cos(2 * x / 3), 2) / 144);
       }},
      {"S10+", 10, true,
       [&](double x) {
         const double b = 17 * (1 + std::cos(x)) + r2 * (1 - std::cos(x)) + 30 * std::cos(x / 2);
         return 0.5 * (1 - b * b / 4096);
       }},
      {"S12+", 12, true,
       [](double x) {
         const double b = 11 * std::cos(x / 12) + 10 * std::cos(3 * x / 4) + 11 * std::cos(17 * x / 12);
         return 0.5 - b * b / 2048;
       }},
      {"S10_0", 10, false, [](double x) {
         return 0.37451171875 - 0.21338834765 * std::cos(x / 4) - 0.036611652352 * std::cos(3 * x / 4) +
                0.088388347649 * (std::sin(x / 4) + std::sin(3 * x / 4)) -
                0.12451171875 * (std::cos(x / 2) - std::sin(x / 2));
       }}};
  double worst = 0;
  for (const auto& f : formulas) {
    const auto series = entanglement_series(standard(f.n), f.plus ? plus_y_state(f.n) : zero_state(f.n), 100);
    double err = 0;
    for (const auto& r : series) err = std::max(err, std::abs(r.linear_entropy - f.s(double(r.step) * pi)));
    worst = std::max(worst, err);
    o.require(err < kFormulaTol, std::string(f.name) + fmt(" error %.3g", err));
  }
  if (o.pass) o.detail = fmt("5 closed forms over n <= 100, max error %.2g", worst);
  return o;
}

Outcome operator_periods() {
  Outcome o;
  const auto t0 = Clock::now();
  auto period = [](int n) { return find_period(standard(n), 1000, kPeriodTol); };
  const auto six = period(6);
  o.require(six && *six == 16, "N=6 period " + (six ? std::to_string(*six) : std::string("none")));
  for (int n = 8; n <= 100; n += 2) {
    const auto p = period(n);
    o.require(p && *p == 48, "N=" + std::to_string(n) + " period " + (p ? std::to_string(*p) : std::string("none")));
  }
  double smallest = 1e300;
  for (int n : {5, 7, 9, 11, 101}) {
    const auto op = standard(n);
    for (long long k = 2; k <= 1000; ++k) smallest = std::min(smallest, deviation(op, k));
  }
  o.require(smallest > kZeroDelta, fmt("odd-N deviation reaches %.3g", smallest));
  const double secs = seconds_since(t0);
  o.require(secs < kPeriodSeconds, fmt("took %.3g s", secs));
  if (o.pass) o.detail = fmt("min odd-N delta %.3g", smallest) + fmt(", %.2f s", secs);
  return o;
}

Outcome spectral_degeneracy() {
  Outcome o;
  double grid = 0;
  for (int n = 2; n <= 64; n += 2)
    for (double t : eigenangles(standard(n))) {
      const double steps = t / (pi / 24);
      grid = std::max(grid, std::abs(steps - std::round(steps)) * (pi / 24));
    }
  o.require(grid < kGridTol, fmt("off-grid by %.3g", grid));
  double sigma = 0;
  for (int n = 1; n <= 63; n += 2)
    sigma = std::max(sigma, max_poisson_deviation(angle_histogram(eigenangles(standard(n)), 16)));
  o.require(sigma <= kPoissonSigma, fmt("histogram deviation %.3g sigma", sigma));
  const auto clusters = degeneracy_clusters(eigenangles(standard(100)), kDegeneracyTolerance).size();
  o.require(clusters <= 24, "N=100 has " + std::to_string(clusters) + " clusters");
  if (o.pass)
    o.detail = fmt("grid error %.2g", grid) + fmt(", worst bin %.2f sigma", sigma) +
               ", N=100 clusters " + std::to_string(clusters);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  constexpr int kStates = 100;
  constexpr long long kSteps = 10;
  double op_err = 0, r1_err = 0, r2_err = 0, evo_err = 0;
  for (int n = 2; n <= 12; ++n) {
    const ModelParams<double> p{n, 0.5, pi / 4};
    const auto op = build_floquet(p);
    op_err = std::max(op_err, (oracle::project_operator(oracle::full_floquet(p), n) - op.matrix()).cwiseAbs().maxCoeff());
    Rng rng(1000 + n);
    for (int k = 0; k < kStates; ++k) {
      const auto s = random_symmetric_state(n, rng);
      auto full = oracle::embed(s);
      r1_err = std::max(r1_err, (rdm1(s).matrix() - oracle::partial_trace(full, {0})).cwiseAbs().maxCoeff());
      r2_err = std::max(r2_err, (rdm2(s).matrix() - oracle::partial_trace(full, {0, 1})).cwiseAbs().maxCoeff());
      const SpectralState<double> fast(op, s);
      for (long long step = 1; step <= kSteps; ++step) {
        full = oracle::apply_floquet(p, full);
        const auto proj = oracle::project_symmetric(full);
        evo_err = std::max({evo_err, static_cast<double>(proj.leakage),
                            (proj.coeffs - fast.at(step).coeffs()).cwiseAbs().maxCoeff()});
      }
    }
  }
  o.require(op_err < kOracleTol, fmt("operator error %.3g", op_err));
  o.require(r1_err < kOracleTol, fmt("rdm1 error %.3g", r1_err));
  o.require(r2_err < kOracleTol, fmt("rdm2 error %.3g", r2_err));
  o.require(evo_err < kOracleTol, fmt("evolution error %.3g", evo_err));
  if (o.pass)
    o.detail = fmt("operator %.2g", op_err) + fmt(", rdm1 %.2g", r1_err) + fmt(", rdm2 %.2g", r2_err) +
               fmt(", evolution %.2g", evo_err);
  return o;
}

Outcome conjugation_invariance() {
  Outcome o;
  double worst = 0;
  Rng rng(4242);
  for (int n : {6, 9, 12}) {
    const auto op = standard(n);
    for (int trial = 0; trial < 20; ++trial) {
      const M g = random_unitary<double>(n + 1, rng);
      const M conj = g * op.matrix() * g.adjoint();
      M power = conj;
      for (long long k = 1; k <= 100; ++k) {
        if (k > 1) power = power * conj;
        worst = std::max(worst, std::abs(frobenius_deviation(power, conj, n) - deviation(op, k)));
      }
    }
  }
  o.require(worst < kConjugationTol, fmt("max |delta~ - delta| %.3g", worst));
  if (o.pass) o.detail = fmt("max |delta~ - delta| %.2g", worst);
  return o;
}

Outcome scale_check() {
  Outcome o;
  const auto t0 = Clock::now();
  double pattern = 0, invariants = 0;
  for (const auto& [n, period] : {std::pair{1000, 24}, std::pair{1002, 8}}) {
    const auto op = standard(n);
    invariants = std::max({invariants, op.unitarity_residual(), op.block_residual()});
    const auto s0 = zero_state(n);
    const auto series = entanglement_series(op, s0, 48);
    for (long long k = period; k <= 48; ++k) {
      const auto& a = series[k];
      const auto& b = series[k - period];
      pattern = std::max({pattern, std::abs(a.linear_entropy - b.linear_entropy), std::abs(a.von_neumann - b.von_neumann),
                          std::abs(a.concurrence - b.concurrence)});
    }
    const SpectralState<double> fast(op, s0);
    for (long long k : {1LL, 7LL, 24LL, 48LL}) {
      const auto s = fast.at(k);
      invariants = std::max(invariants, std::abs(s.coeffs().norm() - 1.0));
      const auto r = rdm2(s).matrix();
      invariants = std::max({invariants, (r - r.adjoint()).cwiseAbs().maxCoeff(), std::abs(r.trace() - 1.0)});
    }
  }
  const double secs = seconds_since(t0);
  o.require(pattern < kPatternTol, fmt("pattern mismatch %.3g", pattern));
  o.require(invariants < kInvariantTol, fmt("invariant residual %.3g", invariants));
  o.require(secs < kScaleSeconds, fmt("took %.3g s", secs));
  if (o.pass) o.detail = fmt("pattern %.2g", pattern) + fmt(", invariants %.2g", invariants) + fmt(", %.2f s", secs);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"six-qubit |0> concurrence table", six_qubit_table},
      {"eight-qubit |0> concurrence table", eight_qubit_table},
      {"N=10,12 spot values and |+> tables", larger_tables},
      {"concurrence maxima over one period", concurrence_maxima},
      {"closed-form linear entropies", entropy_formulas},
      {"operator periods and odd-N aperiodicity", operator_periods},
      {"quasi-energy degeneracy", spectral_degeneracy},
      {"brute-force oracle equivalence", oracle_equivalence},
      {"deviation invariance under conjugation", conjugation_invariance},
      {"N=1000/1002 scale check", scale_check}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2zu: %s  %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
