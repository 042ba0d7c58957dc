#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "kising/cli.hpp"

namespace kising::cli {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::evolve: return "evolve";
    case Mode::period: return "period";
    case Mode::deviation: return "deviation";
    case Mode::spectrum: return "spectrum";
    case Mode::verify: return "verify";
  }
  return "?";
}

std::string to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

std::vector<int> SizeRange::values() const {
  std::vector<int> out;
  for (long long n = first; n <= last; n += step) out.push_back(static_cast<int>(n));
  return out;
}

std::string SizeRange::str() const {
  if (first == last) return std::to_string(first);
  std::string s = std::to_string(first) + ":" + std::to_string(last);
  if (step != 1) s += ":" + std::to_string(step);
  return s;
}

namespace {

/// Recursive-descent evaluator: sums of products of signed numbers, "pi" and
/// parenthesized groups. Juxtaposition ("2pi") multiplies.
class ExpressionParser {
 public:
  explicit ExpressionParser(const std::string& text) : s_(text) {}

  double parse() {
    const double v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("cannot parse number '" + s_ + "': " + why);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool starts_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return c == '(' || c == 'p' || c == 'P' || static_cast<unsigned char>(c) == 0xCF;
  }

  double expr() {
    double v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }

  double term() {
    double v = factor();
    for (;;) {
      if (eat('*')) v *= factor();
      else if (eat('/')) {
        const double d = factor();
        if (d == 0) fail("division by zero");
        v /= d;
      } else if (starts_factor()) v *= factor();
      else return v;
    }
  }

  double factor() {
    skip();
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    if (eat('(')) {
      const double v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (pos_ + 1 < s_.size() && (s_.compare(pos_, 2, "pi") == 0 || s_.compare(pos_, 2, "PI") == 0 ||
                                 s_.compare(pos_, 2, "Pi") == 0 || s_.compare(pos_, 2, "\xCF\x80") == 0)) {
      pos_ += 2;
      return std::numbers::pi;
    }
    if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return v;
    }
    fail(pos_ < s_.size() ? "unexpected '" + s_.substr(pos_) + "'" : "unexpected end");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

long long parse_integer(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{"mode",  "n-qubits", "coupling", "tau", "theta0", "phi0",
                                             "n-max", "tol",      "q-max",    "out", "format", "threads"};
  return keys;
}

std::string normalize_key(std::string key) {
  for (char& c : key)
    if (c == '_') c = '-';
  return key;
}

/// Value as text: strings verbatim, numbers in round-trip form.
std::string value_text(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw ConfigError("config key '" + key + "' must be a string or a number");
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file '" + path + "' must hold a flat JSON object");
  std::map<std::string, std::string> out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string key = normalize_key(it.key());
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("unknown config key '" + it.key() + "'");
    if (out.count(key)) throw ConfigError("config key '" + key + "' given twice");
    out[key] = value_text(key, it.value());
  }
  return out;
}

double parse_finite(const std::string& key, const std::string& text) {
  const double v = parse_number_expression(text);
  if (!std::isfinite(v)) throw ConfigError(key + " must be finite");
  return v;
}

constexpr int kMaxQubits = 16384;

}  // namespace

double parse_number_expression(const std::string& text) { return ExpressionParser(text).parse(); }

SizeRange parse_size_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (!text.empty() && text.back() == ':') parts.push_back("");
  if (parts.empty() || parts.size() > 3) throw ConfigError("n-qubits: expected N or first:last[:step], got '" + text + "'");
  SizeRange r;
  r.first = static_cast<int>(parse_integer("n-qubits", parts[0]));
  r.last = parts.size() > 1 ? static_cast<int>(parse_integer("n-qubits", parts[1])) : r.first;
  r.step = parts.size() > 2 ? static_cast<int>(parse_integer("n-qubits", parts[2])) : 1;
  if (r.first < 1) throw ConfigError("n-qubits: invalid system size N=" + std::to_string(r.first));
  if (r.last < r.first) throw ConfigError("n-qubits: empty range '" + text + "'");
  if (r.step < 1) throw ConfigError("n-qubits: step must be >= 1");
  if (r.last > kMaxQubits) throw ConfigError("n-qubits: N=" + std::to_string(r.last) + " exceeds the limit of 16384");
  return r;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Kicked Ising Floquet dynamics in the permutation-symmetric subspace", "kising"};
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> options;
  const std::map<std::string, std::string> help{
      {"mode", "evolve | period | deviation | spectrum | verify"},
      {"n-qubits", "system size N, or a range first:last[:step]"},
      {"coupling", "Ising coupling J (default 1/2)"},
      {"tau", "kick strength tau (default pi/4)"},
      {"theta0", "coherent-state polar angle (default 0)"},
      {"phi0", "coherent-state azimuth (default 0)"},
      {"n-max", "last step n; period search bound in period mode"},
      {"tol", "tolerance (default 1e-9; 1e-8 clustering gap in spectrum mode)"},
      {"q-max", "largest denominator for rational angle fits (default 48)"},
      {"out", "output file (default stdout)"},
      {"format", "csv | json"},
      {"threads", "worker threads (default: all cores)"}};
  for (const auto& key : known_keys()) options[key] = app.add_option("--" + key, flag_values[key], help.at(key));
  std::string config_path;
  app.add_option("--config", config_path, "flat JSON config file; flags override its values");

  std::vector<const char*> argv{"kising"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  std::map<std::string, std::string> values;
  RunConfig cfg;
  if (!config_path.empty()) {
    values = read_config_file(config_path);
    cfg.config_path = config_path;
  }
  for (const auto& key : known_keys()) {
    if (options[key]->count() == 0) continue;
    auto it = values.find(key);
    if (it != values.end() && it->second != flag_values[key])
      cfg.overridden[key] = {{"file", it->second}, {"flag", flag_values[key]}};
    values[key] = flag_values[key];
  }

  auto has = [&](const char* k) { return values.count(k) > 0; };
  if (!has("mode")) throw ConfigError("missing required key 'mode'");
  const std::string& mode = values["mode"];
  if (mode == "evolve") cfg.mode = Mode::evolve;
  else if (mode == "period") cfg.mode = Mode::period;
  else if (mode == "deviation") cfg.mode = Mode::deviation;
  else if (mode == "spectrum") cfg.mode = Mode::spectrum;
  else if (mode == "verify") cfg.mode = Mode::verify;
  else throw ConfigError("unknown mode '" + mode + "'");

  if (has("n-qubits")) cfg.n_qubits = parse_size_range(values["n-qubits"]);
  else if (cfg.mode == Mode::verify) cfg.n_qubits = {2, 12, 1};
  else throw ConfigError("missing required key 'n-qubits' for mode " + mode);

  cfg.tau = std::numbers::pi / 4;
  if (has("coupling")) cfg.coupling = parse_finite("coupling", values["coupling"]);
  if (has("tau")) cfg.tau = parse_finite("tau", values["tau"]);
  if (has("theta0")) cfg.theta0 = parse_finite("theta0", values["theta0"]);
  if (has("phi0")) cfg.phi0 = parse_finite("phi0", values["phi0"]);

  cfg.n_max = cfg.mode == Mode::period ? 1000 : 48;
  if (has("n-max")) cfg.n_max = parse_integer("n-max", values["n-max"]);
  if (cfg.n_max < 1) throw ConfigError("n-max must be >= 1");

  cfg.tol = cfg.mode == Mode::spectrum ? 1e-8 : 1e-9;
  if (has("tol")) cfg.tol = parse_finite("tol", values["tol"]);
  if (!(cfg.tol > 0)) throw ConfigError("tol must be > 0");

  if (has("q-max")) cfg.q_max = static_cast<int>(parse_integer("q-max", values["q-max"]));
  if (cfg.q_max < 1) throw ConfigError("q-max must be >= 1");

  if (has("threads")) {
    const long long t = parse_integer("threads", values["threads"]);
    if (t < 0 || t > 1024) throw ConfigError("threads must be in [0, 1024]");
    cfg.threads = static_cast<unsigned>(t);
  }
  if (has("out")) cfg.out = values["out"];
  if (has("format")) {
    if (values["format"] == "csv") cfg.format = Format::csv;
    else if (values["format"] == "json") cfg.format = Format::json;
    else throw ConfigError("unknown format '" + values["format"] + "'");
  }

  if (cfg.mode == Mode::evolve && cfg.n_qubits.first < 2)
    throw ConfigError("evolve mode needs N >= 2 for the two-qubit concurrence");
  if (cfg.mode == Mode::verify && cfg.n_qubits.last > 12)
    throw ConfigError("verify mode: oracle dimension overflow, N=" + std::to_string(cfg.n_qubits.last) +
                      " exceeds 12");
  return cfg;
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"mode", to_string(c.mode)}, {"n-qubits", c.n_qubits.str()}, {"coupling", c.coupling},
          {"tau", c.tau},              {"theta0", c.theta0},          {"phi0", c.phi0},
          {"n-max", c.n_max},          {"tol", c.tol},                {"q-max", c.q_max},
          {"format", to_string(c.format)}};
}

}  // namespace kising::cli
