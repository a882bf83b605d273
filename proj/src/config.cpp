#include "platelab/config.hpp"
#include "platelab/counterexample.hpp"
#include "platelab/errors.hpp"
#include "platelab/norms.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace platelab {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"run", {"command", "output"}},
      {"grid", {"d", "n", "L"}},
      {"time", {"T", "m"}},
      {"indices", {"s", "q", "r", "alpha", "beta"}},
      {"ensemble", {"count", "seed"}},
      {"simulate", {"width", "amplitude", "tol", "export"}},
      {"dispersive", {"t_min", "t_max", "samples", "width"}},
      {"strichartz", {"variant", "width_min", "width_max"}},
      {"counterexample", {"margin", "terms", "cross_check"}},
      {"pairs", {"max_den"}},
  };
  return s;
}

// Keys each command needs before it can start.
const std::map<std::string, std::vector<std::string>>& required() {
  static const std::map<std::string, std::vector<std::string>> r{
      {"simulate", {"grid.d", "grid.n", "grid.L", "time.T", "time.m"}},
      {"verify-dispersive", {"grid.d", "grid.n", "grid.L"}},
      {"verify-strichartz", {"grid.d", "grid.n", "grid.L", "time.T", "time.m", "indices.q", "indices.r"}},
      {"kato-ponce", {"grid.d"}},
      {"ground-state", {"grid.d"}},
      {"counterexample", {"grid.d", "indices.s", "indices.alpha", "indices.beta", "indices.q", "indices.r"}},
      {"admissible-pairs", {"grid.d"}},
  };
  return r;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool to_int(const std::string& v, long long& out) {
  try {
    std::size_t pos = 0;
    out = std::stoll(v, &pos);
    return pos == v.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool to_double(const std::string& v, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(v, &pos);
    return pos == v.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

class Reader {
public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}
  std::vector<std::string> errors;

  const ConfigEntry* find(const std::string& sec, const std::string& key) const {
    auto s = raw_.find(sec);
    if (s == raw_.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }
  std::string where(const std::string& sec, const std::string& key) const {
    const ConfigEntry* e = find(sec, key);
    return "[" + sec + "] " + key + (e && e->line > 0 ? " (line " + std::to_string(e->line) + ")" : "");
  }
  template <class T>
  void integer(const std::string& sec, const std::string& key, T& out) {
    const ConfigEntry* e = find(sec, key);
    if (!e) return;
    long long v;
    if (!to_int(e->value, v)) errors.push_back(where(sec, key) + ": expected an integer, got '" + e->value + "'");
    else out = static_cast<T>(v);
  }
  void real(const std::string& sec, const std::string& key, double& out) {
    const ConfigEntry* e = find(sec, key);
    if (!e) return;
    if (!to_double(e->value, out)) errors.push_back(where(sec, key) + ": expected a number, got '" + e->value + "'");
  }
  void text(const std::string& sec, const std::string& key, std::string& out) {
    if (const ConfigEntry* e = find(sec, key)) out = e->value;
  }

private:
  const RawConfig& raw_;
};

std::optional<LebesgueExponent> exponent(Reader& rd, const std::string& key, const std::string& value) {
  try {
    return LebesgueExponent::parse(value);
  } catch (const Error& e) {
    rd.errors.push_back(rd.where("indices", key) + ": " + e.what());
    return std::nullopt;
  }
}

std::optional<Rational> rational(Reader& rd, const std::string& key, const std::string& value) {
  try {
    return Rational::parse(value);
  } catch (const Error& e) {
    rd.errors.push_back(rd.where("indices", key) + ": " + e.what());
    return std::nullopt;
  }
}

} // namespace

double ExperimentConfig::extra_double(const std::string& key, double fallback) const {
  auto it = extra.find(key);
  if (it == extra.end()) return fallback;
  double v;
  if (!to_double(it->second, v)) throw ConfigError(key + ": expected a number, got '" + it->second + "'");
  return v;
}

int ExperimentConfig::extra_int(const std::string& key, int fallback) const {
  auto it = extra.find(key);
  if (it == extra.end()) return fallback;
  long long v;
  if (!to_int(it->second, v)) throw ConfigError(key + ": expected an integer, got '" + it->second + "'");
  return static_cast<int>(v);
}

std::string ExperimentConfig::extra_string(const std::string& key, const std::string& fallback) const {
  auto it = extra.find(key);
  return it == extra.end() ? fallback : it->second;
}

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c{"simulate",   "verify-dispersive", "verify-strichartz", "kato-ponce",
                                          "ground-state", "counterexample",  "admissible-pairs"};
  return c;
}

namespace {

RawConfig parse_raw_impl(const std::string& text, std::vector<std::string>& errors) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string at = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(at + ": malformed section header '" + line + "'");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) errors.push_back(at + ": unknown section [" + section + "]");
      raw[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(at + ": expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (section.empty()) {
      errors.push_back(at + ": key '" + key + "' outside any [section]");
      continue;
    }
    if (key.empty() || value.empty()) {
      errors.push_back(at + ": empty key or value");
      continue;
    }
    auto sit = schema().find(section);
    if (sit != schema().end() && !sit->second.count(key))
      errors.push_back(at + ": unknown key '" + key + "' in [" + section + "]");
    auto& sec = raw[section];
    auto prev = sec.find(key);
    if (prev != sec.end()) {
      errors.push_back("duplicate key '" + key + "' in [" + section + "] at lines " +
                       std::to_string(prev->second.line) + " and " + std::to_string(lineno));
      continue;
    }
    sec[key] = ConfigEntry{value, lineno};
  }
  return raw;
}

} // namespace

RawConfig parse_raw_config(const std::string& text) {
  std::vector<std::string> errors;
  RawConfig raw = parse_raw_impl(text, errors);
  if (!errors.empty()) throw ConfigError(errors);
  return raw;
}

RawConfig parse_raw_config(const std::string& text, std::vector<std::string>& errors) {
  return parse_raw_impl(text, errors);
}

void apply_overrides(RawConfig& raw, const std::vector<std::string>& overrides) {
  std::vector<std::string> errors;
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      errors.push_back("override '" + o + "' is not key=value");
      continue;
    }
    std::string key = trim(o.substr(0, eq)), section;
    const std::string value = trim(o.substr(eq + 1));
    const auto dot = key.find('.');
    if (dot != std::string::npos) {
      section = key.substr(0, dot);
      key = key.substr(dot + 1);
    } else {
      std::vector<std::string> hits;
      for (const auto& [sec, keys] : schema())
        if (keys.count(key)) hits.push_back(sec);
      if (hits.size() != 1) {
        errors.push_back("override key '" + key + "' is " + (hits.empty() ? "unknown" : "ambiguous") +
                         "; use section.key");
        continue;
      }
      section = hits.front();
    }
    auto sit = schema().find(section);
    if (sit == schema().end() || !sit->second.count(key)) {
      errors.push_back("unknown override key '" + section + "." + key + "'");
      continue;
    }
    raw[section][key] = ConfigEntry{value, 0};
  }
  if (!errors.empty()) throw ConfigError(errors);
}

ExperimentConfig build_config(const RawConfig& raw, const std::string& command) {
  Reader rd(raw);
  ExperimentConfig cfg;
  cfg.command = command;
  if (cfg.command.empty()) rd.text("run", "command", cfg.command);
  if (cfg.command.empty()) throw ConfigError("no command given ([run] command or the subcommand)");
  const auto& cmds = known_commands();
  if (std::find(cmds.begin(), cmds.end(), cfg.command) == cmds.end())
    throw ConfigError("unknown command '" + cfg.command + "'");

  for (const std::string& req : required().at(cfg.command)) {
    const auto dot = req.find('.');
    const std::string sec = req.substr(0, dot), key = req.substr(dot + 1);
    if (!raw.count(sec)) {
      const std::string msg = "missing section [" + sec + "] required by " + cfg.command;
      if (std::find(rd.errors.begin(), rd.errors.end(), msg) == rd.errors.end()) rd.errors.push_back(msg);
    } else if (!rd.find(sec, key)) {
      rd.errors.push_back("missing key '" + key + "' in [" + sec + "] required by " + cfg.command);
    }
  }

  rd.text("run", "output", cfg.output);
  rd.integer("grid", "d", cfg.grid.d);
  rd.integer("grid", "n", cfg.grid.n);
  rd.real("grid", "L", cfg.grid.L);
  rd.real("time", "T", cfg.time.T);
  rd.integer("time", "m", cfg.time.m);
  rd.text("indices", "s", cfg.indices.s);
  rd.text("indices", "q", cfg.indices.q);
  rd.text("indices", "r", cfg.indices.r);
  rd.text("indices", "alpha", cfg.indices.alpha);
  rd.text("indices", "beta", cfg.indices.beta);
  rd.integer("ensemble", "count", cfg.ensemble.count);
  rd.integer("ensemble", "seed", cfg.ensemble.seed);
  for (const auto& [sec, keys] : raw)
    if (sec != "run" && sec != "grid" && sec != "time" && sec != "indices" && sec != "ensemble")
      for (const auto& [key, e] : keys) cfg.extra[sec + "." + key] = e.value;

  if (rd.find("grid", "d") && cfg.grid.d < 1) rd.errors.push_back(rd.where("grid", "d") + ": dimension must be >= 1");
  if (rd.find("grid", "n") && (cfg.grid.n < 8 || cfg.grid.n % 2 != 0))
    rd.errors.push_back(rd.where("grid", "n") + ": need an even n >= 8");
  if (rd.find("grid", "L") && !(cfg.grid.L > 0.0)) rd.errors.push_back(rd.where("grid", "L") + ": need L > 0");
  if (rd.find("time", "T") && !(cfg.time.T > 0.0)) rd.errors.push_back(rd.where("time", "T") + ": need T > 0");
  if (rd.find("time", "m") && cfg.time.m < 2) rd.errors.push_back(rd.where("time", "m") + ": need m >= 2");
  if (cfg.ensemble.count < 1) rd.errors.push_back(rd.where("ensemble", "count") + ": need count >= 1");

  const int d = cfg.grid.d;
  const bool d_ok = d >= 1;
  if (cfg.command == "verify-strichartz" && d_ok) {
    auto q = exponent(rd, "q", cfg.indices.q);
    auto r = exponent(rd, "r", cfg.indices.r);
    auto s = rational(rd, "s", cfg.indices.s);
    if (q && r) {
      const Verdict v = is_admissible(*q, *r, d);
      if (!v) rd.errors.push_back("pair (q, r) = (" + q->str() + ", " + r->str() + ") in d = " + std::to_string(d) +
                                  " rejected: " + v.diagnostic);
    }
    if (s && *s < Rational(0)) rd.errors.push_back(rd.where("indices", "s") + ": need s >= 0");
    const std::string variant = cfg.extra_string("strichartz.variant", "schrodinger");
    if (variant != "schrodinger" && variant != "plate-cos" && variant != "plate-sinc")
      rd.errors.push_back("[strichartz] variant: expected schrodinger, plate-cos or plate-sinc, got '" + variant + "'");
  }
  if (cfg.command == "verify-dispersive" && d_ok && rd.find("indices", "r")) exponent(rd, "r", cfg.indices.r);
  if (cfg.command == "counterexample" && d_ok) {
    auto q = exponent(rd, "q", cfg.indices.q);
    auto r = exponent(rd, "r", cfg.indices.r);
    auto s = rational(rd, "s", cfg.indices.s);
    auto a = rational(rd, "alpha", cfg.indices.alpha);
    auto b = rational(rd, "beta", cfg.indices.beta);
    Rational margin(1, 4);
    if (const ConfigEntry* e = rd.find("counterexample", "margin")) {
      try {
        margin = Rational::parse(e->value);
      } catch (const Error& ex) {
        rd.errors.push_back(rd.where("counterexample", "margin") + ": " + ex.what());
      }
    }
    if (q && r && s && a && b) {
      try {
        BlowupSchedule::with_margin(d, *s, *a, *b, margin, Pair{*q, *r});
      } catch (const Error& ex) {
        rd.errors.push_back(std::string("counterexample indices rejected: ") + ex.what());
      }
    }
  }
  if (cfg.command == "kato-ponce" && d_ok && d != 1 && d != 3)
    rd.errors.push_back(rd.where("grid", "d") + ": kato-ponce ensembles exist for d = 1 and d = 3");
  if (cfg.command == "ground-state" && d == 2)
    rd.errors.push_back(rd.where("grid", "d") + ": ground-state supports d = 1 and d >= 3");
  if (!rd.errors.empty()) throw ConfigError(rd.errors);
  return cfg;
}

ExperimentConfig parse_config(const std::string& text, const std::string& command) {
  std::vector<std::string> errors;
  const RawConfig raw = parse_raw_impl(text, errors);
  return build_config(raw, command, std::move(errors));
}

ExperimentConfig build_config(const RawConfig& raw, const std::string& command,
                              std::vector<std::string> errors) {
  try {
    ExperimentConfig cfg = build_config(raw, command);
    if (errors.empty()) return cfg;
  } catch (const ConfigError& e) {
    errors.insert(errors.end(), e.messages.begin(), e.messages.end());
  }
  throw ConfigError(errors);
}

} // namespace platelab
