#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gscnoma/error.hpp"
#include "gscnoma/sweep.hpp"
#include "json.hpp"

namespace gscnoma {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + ": " + what);
}

void check_keys(const json& object, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!object.is_object()) fail(path, "expected an object");
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& item : object.items()) {
    if (!names.count(item.key())) fail(path + "." + item.key(), "unknown field");
  }
}

const json& require(const json& object, const std::string& path, const char* key) {
  if (!object.contains(key)) fail(path + "." + key, "missing required field");
  return object.at(key);
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) fail(path, "expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

long long as_integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) fail(path, "expected an integer");
  return value.get<long long>();
}

std::uint64_t as_unsigned(const json& value, const std::string& path) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer()) fail(path, "must be >= 0");
  fail(path, "expected a non-negative integer");
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) fail(path, "expected a string");
  return value.get<std::string>();
}

const json& as_list(const json& value, const std::string& path) {
  if (!value.is_array()) fail(path, "expected a list");
  if (value.empty()) fail(path, "must not be empty");
  return value;
}

double optional_number(const json& object, const std::string& path, const char* key, double fallback) {
  return object.contains(key) ? as_number(object.at(key), path + "." + key) : fallback;
}

std::vector<double> parse_snr(const json& value, const std::string& path) {
  std::vector<double> out;
  if (value.is_array()) {
    as_list(value, path);
    for (std::size_t i = 0; i < value.size(); ++i) out.push_back(as_number(value[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }
  check_keys(value, path, {"start", "stop", "step"});
  const double start = as_number(require(value, path, "start"), path + ".start");
  const double stop = as_number(require(value, path, "stop"), path + ".stop");
  const double step = as_number(require(value, path, "step"), path + ".step");
  if (!(step > 0.0)) fail(path + ".step", "must be > 0");
  if (stop < start) fail(path + ".stop", "must not be below start");
  if ((stop - start) / step > 1e5) fail(path, "more than 1e5 points");
  for (std::size_t i = 0;; ++i) {
    const double x = std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9;
    if (x > stop + 1e-9) break;
    out.push_back(x);
  }
  return out;
}

SearchSpec parse_search(const json& value, const std::string& path) {
  check_keys(value, path, {"a_min", "a_max", "step", "objective", "evaluator"});
  SearchSpec s;
  s.a_min = optional_number(value, path, "a_min", s.a_min);
  s.a_max = optional_number(value, path, "a_max", s.a_max);
  s.step = optional_number(value, path, "step", s.step);
  try {
    if (value.contains("objective")) s.objective = parse_objective(as_string(value.at("objective"), path + ".objective"));
    if (value.contains("evaluator")) s.evaluator = parse_evaluator(as_string(value.at("evaluator"), path + ".evaluator"));
    s.validate();
  } catch (const ConfigError& e) {
    if (std::string(e.what()).rfind("config:", 0) == 0) throw;
    fail(path, e.what());
  }
  return s;
}

SweepSpec from_json(const json& root) {
  check_keys(root, "$", {"pair", "qos", "snr_db", "theta", "power", "methods", "sim"});
  SweepSpec spec;

  const json& pair = require(root, "$", "pair");
  check_keys(pair, "$.pair", {"N_s", "N_w", "n", "omega_s", "omega_w"});
  spec.pair.antennas_s = static_cast<int>(as_integer(require(pair, "$.pair", "N_s"), "$.pair.N_s"));
  spec.pair.antennas_w = static_cast<int>(as_integer(require(pair, "$.pair", "N_w"), "$.pair.N_w"));
  spec.pair.n.clear();
  const json& n = as_list(require(pair, "$.pair", "n"), "$.pair.n");
  for (std::size_t i = 0; i < n.size(); ++i) {
    spec.pair.n.push_back(static_cast<int>(as_integer(n[i], "$.pair.n[" + std::to_string(i) + "]")));
  }
  spec.pair.omega_s = as_number(require(pair, "$.pair", "omega_s"), "$.pair.omega_s");
  spec.pair.omega_w = as_number(require(pair, "$.pair", "omega_w"), "$.pair.omega_w");

  if (root.contains("qos")) {
    const json& qos = root.at("qos");
    check_keys(qos, "$.qos", {"T", "B"});
    spec.block_length = optional_number(qos, "$.qos", "T", spec.block_length);
    spec.bandwidth = optional_number(qos, "$.qos", "B", spec.bandwidth);
  }

  spec.snr_db = parse_snr(require(root, "$", "snr_db"), "$.snr_db");
  const json& theta = as_list(require(root, "$", "theta"), "$.theta");
  for (std::size_t i = 0; i < theta.size(); ++i) spec.theta.push_back(as_number(theta[i], "$.theta[" + std::to_string(i) + "]"));

  if (root.contains("power")) {
    const json& power = root.at("power");
    check_keys(power, "$.power", {"a_s", "search"});
    if (power.contains("a_s") == power.contains("search")) fail("$.power", "give exactly one of a_s or search");
    if (power.contains("a_s")) {
      spec.power.a_s = as_number(power.at("a_s"), "$.power.a_s");
    } else {
      spec.power.optimize = true;
      spec.power.search = parse_search(power.at("search"), "$.power.search");
    }
  }

  const json& methods = as_list(require(root, "$", "methods"), "$.methods");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const std::string path = "$.methods[" + std::to_string(i) + "]";
    try {
      spec.methods.push_back(parse_sweep_method(as_string(methods[i], path)));
    } catch (const ConfigError& e) {
      if (std::string(e.what()).rfind("config:", 0) == 0) throw;
      fail(path, e.what());
    }
  }

  if (root.contains("sim")) {
    const json& sim = root.at("sim");
    check_keys(sim, "$.sim", {"samples", "seed", "batch"});
    if (sim.contains("samples")) spec.sim.samples = as_unsigned(sim.at("samples"), "$.sim.samples");
    if (sim.contains("seed")) spec.sim.seed = as_unsigned(sim.at("seed"), "$.sim.seed");
    if (sim.contains("batch")) spec.sim.batch = as_unsigned(sim.at("batch"), "$.sim.batch");
  }

  try {
    spec.validate();
  } catch (const ConfigError& e) {
    if (std::string(e.what()).rfind("config:", 0) == 0) throw;
    fail("$", e.what());
  }
  return spec;
}

}  // namespace

std::string to_string(SweepMethod method) {
  switch (method) {
    case SweepMethod::exact:
      return "exact";
    case SweepMethod::high_snr:
      return "high_snr";
    case SweepMethod::low_snr:
      return "low_snr";
    case SweepMethod::oma:
      return "oma";
    case SweepMethod::ergodic:
      return "ergodic";
    case SweepMethod::montecarlo:
      return "montecarlo";
    case SweepMethod::montecarlo_oma:
      return "montecarlo_oma";
    case SweepMethod::montecarlo_ergodic:
      return "montecarlo_ergodic";
  }
  return "unknown";
}

SweepMethod parse_sweep_method(const std::string& name) {
  for (auto m : {SweepMethod::exact, SweepMethod::high_snr, SweepMethod::low_snr, SweepMethod::oma,
                 SweepMethod::ergodic, SweepMethod::montecarlo, SweepMethod::montecarlo_oma,
                 SweepMethod::montecarlo_ergodic}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown method '" + name + "'");
}

UserPairSpec PairTemplate::pair(int combined) const {
  return {{antennas_s, combined, omega_s}, {antennas_w, combined, omega_w}};
}

void SweepSpec::validate() const {
  if (pair.n.empty()) throw ConfigError("pair.n must not be empty");
  for (int n : pair.n) pair.pair(n).validate();
  if (snr_db.empty()) throw ConfigError("snr_db must not be empty");
  if (theta.empty()) throw ConfigError("theta must not be empty");
  if (methods.empty()) throw ConfigError("methods must not be empty");
  for (double db : snr_db) {
    if (!std::isfinite(db) || std::abs(db) > 300.0) throw ConfigError("snr_db values must lie in [-300, 300]");
  }
  for (double t : theta) QosProfile{t, block_length, bandwidth}.validate();
  if (power.optimize) {
    power.search.validate();
  } else {
    PowerSplit{power.a_s}.validate();
  }
  std::set<SweepMethod> seen;
  for (auto m : methods) {
    if (!seen.insert(m).second) throw ConfigError("method " + to_string(m) + " listed twice");
  }
  sim.validate();
}

SweepSpec parse_sweep_spec(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << "config: syntax error at line " << line << ", column " << column << ": " << e.what();
    throw ConfigError(os.str());
  }
  return from_json(root);
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_sweep_spec(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_sweep_spec(const SweepSpec& spec) {
  json root;
  root["pair"] = {{"N_s", spec.pair.antennas_s},
                  {"N_w", spec.pair.antennas_w},
                  {"n", spec.pair.n},
                  {"omega_s", spec.pair.omega_s},
                  {"omega_w", spec.pair.omega_w}};
  root["qos"] = {{"T", spec.block_length}, {"B", spec.bandwidth}};
  root["snr_db"] = spec.snr_db;
  root["theta"] = spec.theta;
  if (spec.power.optimize) {
    const SearchSpec& s = spec.power.search;
    root["power"] = {{"search",
                      {{"a_min", s.a_min},
                       {"a_max", s.a_max},
                       {"step", s.step},
                       {"objective", to_string(s.objective)},
                       {"evaluator", to_string(s.evaluator)}}}};
  } else {
    root["power"] = {{"a_s", spec.power.a_s}};
  }
  json methods = json::array();
  for (auto m : spec.methods) methods.push_back(to_string(m));
  root["methods"] = methods;
  root["sim"] = {{"samples", spec.sim.samples}, {"seed", spec.sim.seed}, {"batch", spec.sim.batch}};
  return root.dump(2) + "\n";
}

}  // namespace gscnoma
