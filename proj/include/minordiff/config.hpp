#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "minordiff/harness.hpp"

namespace minordiff {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
}

}  // namespace detail

inline constexpr const char* kConfigHeader = "minordiff-config v1";

/// Flat key-value experiment configuration with a versioned header.
/// Unknown keys are rejected; every key has a declared type.
inline ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != kConfigHeader)
    throw ConfigError(std::string("config: first line must be '") + kConfigHeader + "'");
  ExperimentConfig cfg;
  std::map<std::string, std::string> seen;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string val = detail::trim(t.substr(eq + 1));
    if (seen.count(key))
      throw ConfigError("config: duplicate key '" + key + "'");
    seen[key] = val;

    if (key == "ensemble") {
      cfg.ensemble = val;
    } else if (key == "ensemble_family") {
      cfg.ensemble_family = val;
    } else if (key.rfind("ensemble_param_", 0) == 0) {
      cfg.ensemble_params[key.substr(15)] = detail::parse_double(key, val);
    } else if (key == "function") {
      cfg.function = val;
    } else if (key == "phi") {
      cfg.phi = detail::parse_double(key, val);
    } else if (key == "d_star") {
      cfg.d_star = detail::parse_double(key, val);
    } else if (key == "N") {
      cfg.n_list.clear();
      for (const auto& item : detail::split(val, ','))
        cfg.n_list.push_back(int(detail::parse_int(key, item)));
      if (cfg.n_list.empty()) throw ConfigError("config: key 'N' expects a nonempty list");
    } else if (key == "trials") {
      cfg.trials = int(detail::parse_int(key, val));
    } else if (key == "seed") {
      cfg.seed = std::uint64_t(detail::parse_int(key, val));
    } else if (key == "eta0") {
      cfg.eta0 = detail::parse_double(key, val);
    } else if (key == "checks") {
      cfg.checks.clear();
      for (const auto& item : detail::split(val, ',')) cfg.checks.insert(item);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const std::exception& ex) {
    throw ConfigError(ex.what());
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Canonical serialization; parse(render(cfg)) reproduces the config.
inline std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << kConfigHeader << "\n";
  if (!cfg.ensemble_family.empty()) {
    out << "ensemble_family = " << cfg.ensemble_family << "\n";
    for (const auto& [k, v] : cfg.ensemble_params) {
      std::ostringstream num;
      num.precision(17);
      num << v;
      out << "ensemble_param_" << k << " = " << num.str() << "\n";
    }
  } else {
    out << "ensemble = " << cfg.ensemble << "\n";
  }
  out << "function = " << cfg.function << "\n";
  out.precision(17);
  out << "phi = " << cfg.phi << "\n";
  out << "d_star = " << cfg.d_star << "\n";
  out << "N = ";
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i)
    out << (i ? "," : "") << cfg.n_list[i];
  out << "\n";
  out << "trials = " << cfg.trials << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "eta0 = " << cfg.eta0 << "\n";
  if (!cfg.checks.empty()) {
    out << "checks = ";
    bool first = true;
    for (const auto& c : cfg.checks) {
      out << (first ? "" : ",") << c;
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace minordiff
