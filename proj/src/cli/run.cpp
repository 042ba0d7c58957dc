#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kising/cli.hpp"
#include "kising/entangle.hpp"
#include "kising/oracle.hpp"
#include "kising/parallel.hpp"
#include "kising/random.hpp"
#include "kising/spectral.hpp"
#include "table.hpp"

namespace kising::cli {
namespace {

constexpr int kVerifyRandomStates = 10;
constexpr std::uint64_t kVerifySeed = 0x6b6973696e67ULL;

ModelParams<double> params_for(const RunConfig& c, int n) { return {n, c.coupling, c.tau}; }

Table evolve_rows(const RunConfig& c, int n, unsigned threads) {
  Table t{{"N", "n", "S_lin", "S_vn", "C"}, {}};
  const auto op = build_floquet(params_for(c, n));
  const auto series = entanglement_series(op, coherent_state(n, c.theta0, c.phi0), c.n_max, threads);
  for (const auto& r : series) t.rows.push_back({Cell{(long long)n}, r.step, r.linear_entropy, r.von_neumann, r.concurrence});
  return t;
}

Table period_rows(const RunConfig& c, int n) {
  Table t{{"N", "period"}, {}};
  const auto p = find_period(build_floquet(params_for(c, n)), c.n_max, c.tol);
  t.rows.push_back({Cell{(long long)n}, p ? Cell{*p} : Cell{std::string("none")}});
  return t;
}

Table deviation_rows(const RunConfig& c, int n) {
  Table t{{"N", "n", "delta"}, {}};
  const auto s = deviation_series(build_floquet(params_for(c, n)), c.n_max);
  for (std::size_t i = 0; i < s.n.size(); ++i) t.rows.push_back({Cell{(long long)n}, s.n[i], s.delta[i]});
  return t;
}

Table spectrum_rows(const RunConfig& c, int n) {
  Table t{{"N", "kind", "index", "angle", "p", "q", "residual", "multiplicity", "count"}, {}};
  const auto r = spectrum_report(build_floquet(params_for(c, n)), c.tol, c.q_max);
  const Cell none{std::string()};
  const Cell big_n{(long long)n};
  for (std::size_t i = 0; i < r.eigenangles.size(); ++i) {
    const auto& f = r.rational_fit[i];
    t.rows.push_back({big_n, std::string("angle"), (long long)i, r.eigenangles[i], (long long)f.p, (long long)f.q,
                      f.residual, none, none});
  }
  for (std::size_t i = 0; i < r.clusters.size(); ++i)
    t.rows.push_back({big_n, std::string("cluster"), (long long)i, r.clusters[i].angle, none, none, none,
                      (long long)r.clusters[i].multiplicity, none});
  // Bins are reported by their upper edge.
  for (std::size_t i = 0; i < r.histogram.counts.size(); ++i)
    t.rows.push_back({big_n, std::string("bin"), (long long)i, r.histogram.edges[i + 1], none, none, none, none,
                      r.histogram.counts[i]});
  return t;
}

Table verify_rows(const RunConfig& c, int n) {
  Table t{{"N", "check", "max_residual", "tolerance", "pass"}, {}};
  const auto params = params_for(c, n);
  const auto op = build_floquet(params);
  const CMatrix<double> full = oracle::full_floquet(params);

  double rdm1_res = 0, rdm2_res = 0, evo_res = 0, leak = 0;
  Rng rng(kVerifySeed + static_cast<std::uint64_t>(n));
  std::vector<SymmetricState<double>> states{coherent_state(n, c.theta0, c.phi0)};
  for (int i = 0; i < kVerifyRandomStates; ++i) states.push_back(random_symmetric_state(n, rng));
  for (const auto& s : states) {
    const SpectralState<double> fast(op, s);
    auto brute = oracle::embed(s);
    for (long long step = 0; step <= c.n_max; ++step) {
      if (step > 0) brute = oracle::apply_floquet(params, brute);
      const auto sym = step == 0 ? s : fast.at(step);
      const auto proj = oracle::project_symmetric(brute);
      leak = std::max(leak, static_cast<double>(proj.leakage));
      evo_res = std::max(evo_res, static_cast<double>((proj.coeffs - sym.coeffs()).cwiseAbs().maxCoeff()));
      if (step % 8 != 0) continue;  // RDMs on a subsample of steps
      rdm1_res = std::max(rdm1_res, static_cast<double>(
                                        (rdm1(sym).matrix() - oracle::partial_trace(brute, {0})).cwiseAbs().maxCoeff()));
      if (n >= 2)
        rdm2_res = std::max(rdm2_res, static_cast<double>((rdm2(sym).matrix() - oracle::partial_trace(brute, {0, 1}))
                                                              .cwiseAbs()
                                                              .maxCoeff()));
    }
  }

  auto row = [&](const char* name, double res) {
    t.rows.push_back({Cell{(long long)n}, std::string(name), res, c.tol, res <= c.tol});
  };
  row("operator", static_cast<double>((oracle::project_operator(full, n) - op.matrix()).cwiseAbs().maxCoeff()));
  row("unitarity", op.unitarity_residual());
  row("block_closure", op.block_residual());
  row("parity", oracle::parity_commutator_residual(full, n));
  row("rdm1", rdm1_res);
  if (n >= 2) row("rdm2", rdm2_res);
  row("evolution", evo_res);
  row("leakage", leak);
  return t;
}

Table rows_for(const RunConfig& c, int n, unsigned inner_threads) {
  switch (c.mode) {
    case Mode::evolve: return evolve_rows(c, n, inner_threads);
    case Mode::period: return period_rows(c, n);
    case Mode::deviation: return deviation_rows(c, n);
    case Mode::spectrum: return spectrum_rows(c, n);
    case Mode::verify: return verify_rows(c, n);
  }
  throw ConfigError("unknown mode");
}

nlohmann::json error_record(const std::string& kind, const std::string& message, int status) {
  return {{"error", {{"kind", kind}, {"message", message}, {"exit_status", status}}}};
}

}  // namespace

int run(const RunConfig& config, std::ostream& out) {
  const auto sizes = config.n_qubits.values();
  std::vector<Table> parts(sizes.size());
  const bool sweep = sizes.size() > 1;
  parallel_for(sizes.size(), [&](std::size_t i) { parts[i] = rows_for(config, sizes[i], sweep ? 1u : config.threads); },
               sweep ? config.threads : 1u);

  Table table{parts.front().columns, {}};
  for (const auto& p : parts) table.append(p);

  const nlohmann::json metadata{{"program", "kising"}, {"config", to_json(config)}, {"overridden", config.overridden}};
  std::ostringstream text;
  if (config.format == Format::csv) write_csv(text, metadata, table);
  else write_json(text, metadata, table);

  if (config.out.empty()) {
    out << text.str();
    out.flush();
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file '" + config.out + "'");
    file << text.str();
    if (!file) throw ConfigError("failed writing output file '" + config.out + "'");
  }

  if (config.mode == Mode::verify) {
    double worst = 0;
    int failed = 0;
    for (const auto& row : table.rows) {
      if (!std::get<bool>(row[4])) {
        ++failed;
        worst = std::max(worst, std::get<double>(row[2]));
      }
    }
    if (failed > 0)
      throw NumericalError("verify: " + std::to_string(failed) + " check(s) exceeded the tolerance", worst, config.tol);
  }
  return kExitOk;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  int status = 1;
  nlohmann::json record;
  try {
    return run(parse_config(args), out);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const ConfigError& e) {
    status = kExitConfig;
    record = error_record("config", e.what(), status);
  } catch (const std::length_error& e) {
    status = kExitConfig;
    record = error_record("dimension", e.what(), status);
  } catch (const std::invalid_argument& e) {
    status = kExitConfig;
    record = error_record("config", e.what(), status);
  } catch (const NumericalError& e) {
    status = kExitNumerical;
    record = error_record("tolerance", e.what(), status);
    record["error"]["residual"] = e.residual();
    record["error"]["tolerance"] = e.tolerance();
  } catch (const std::domain_error& e) {
    status = kExitNumerical;
    record = error_record("numerical", e.what(), status);
  } catch (const std::exception& e) {
    status = 1;
    record = error_record("internal", e.what(), status);
  }
  err << record.dump() << '\n';
  return status;
}

}  // namespace kising::cli
