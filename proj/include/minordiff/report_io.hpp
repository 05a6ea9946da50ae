#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

#include "minordiff/config.hpp"
#include "minordiff/harness.hpp"

namespace minordiff {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

inline json to_json(const PredictionReport& p) {
  return json{{"omega_f", p.omega_f},
              {"v_f1", p.v_f1},
              {"v_f2", p.v_f2},
              {"v_sigma2", p.v_sigma2},
              {"v_f", p.v_f},
              {"quadrature_error_estimates",
               json{{"omega", p.omega_err},
                    {"v_f1", p.v_f1_err},
                    {"v_f2", p.v_f2_err},
                    {"v_sigma2", p.v_sigma2_err}}},
              {"regime", p.regime == Regime::Square ? "square" : "rectangular"},
              {"phi", p.phi},
              {"sigma2", json{{"re", p.sigma2.real()}, {"im", p.sigma2.imag()}}},
              {"sigma4", p.sigma4},
              {"zero_variance", p.zero_variance}};
}

inline json to_json(const Verdict& v) {
  return json{{"name", v.name},
              {"value", v.value},
              {"stderr", v.stderr_},
              {"predicted", v.predicted},
              {"status", v.status}};
}

inline json to_json(const ExperimentConfig& cfg) {
  json j{{"ensemble", cfg.ensemble},          {"function", cfg.function},
         {"phi", cfg.phi},                    {"d_star", cfg.d_star},
         {"N", cfg.n_list},                   {"trials", cfg.trials},
         {"seed", cfg.seed},                  {"eta0", cfg.eta0},
         {"checks", std::vector<std::string>(cfg.checks.begin(), cfg.checks.end())}};
  if (!cfg.ensemble_family.empty()) {
    j["ensemble_family"] = cfg.ensemble_family;
    j["ensemble_params"] = cfg.ensemble_params;
  }
  return j;
}

inline json to_json(const MCReport& rep) {
  json per_n = json::array();
  for (const auto& r : rep.per_n) {
    json v = json::array();
    for (const auto& x : r.verdicts) v.push_back(to_json(x));
    per_n.push_back(json{{"N", r.n},
                         {"M", r.m},
                         {"trials", r.trials},
                         {"failed_trials", r.failed},
                         {"replayed_trials", r.replayed},
                         {"mean_fN", r.fn_summary.mean},
                         {"mean_se", r.fn_summary.mean_se},
                         {"var_sqrtN", r.var_sqrt_n},
                         {"var_se", r.var_sqrt_n_se},
                         {"skewness", r.skew},
                         {"skewness_ci", {r.skew_ci.lo, r.skew_ci.hi}},
                         {"kurtosis", r.kurt},
                         {"kurtosis_ci", {r.kurt_ci.lo, r.kurt_ci.hi}},
                         {"moment5", r.fn_summary.m5},
                         {"moment6", r.m6},
                         {"moment6_ci", {r.m6_ci.lo, r.m6_ci.hi}},
                         {"mean_error", r.mean_error},
                         {"var_error", r.var_error},
                         {"checks",
                          json{{"interlacing", r.checks.interlacing},
                               {"trace_identity", r.checks.trace_identity},
                               {"rank1_rel", r.checks.rank1_rel},
                               {"eta_delta", r.checks.eta_delta},
                               {"ward", r.checks.ward}}},
                         {"verdicts", v}});
  }
  return json{{"version", kVersion},
              {"config", to_json(rep.config)},
              {"prediction", to_json(rep.prediction)},
              {"per_N", per_n},
              {"sweep",
               json{{"mean_slope", rep.sweep.mean_slope},
                    {"var_slope", rep.sweep.var_slope},
                    {"mean_monotone", rep.sweep.mean_monotone},
                    {"var_monotone", rep.sweep.var_monotone},
                    {"status", rep.sweep.status}}},
              {"pass", rep.pass}};
}

namespace detail {

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

/// Flat CSV: one row per (N, statistic).
inline std::string to_csv(const MCReport& rep) {
  std::ostringstream out;
  out << "N,statistic,value,stderr,predicted,verdict\n";
  for (const auto& r : rep.per_n)
    for (const auto& v : r.verdicts)
      out << r.n << ',' << v.name << ',' << detail::fmt_double(v.value) << ','
          << detail::fmt_double(v.stderr_) << ',' << detail::fmt_double(v.predicted) << ','
          << v.status << '\n';
  return out.str();
}

/// Write-then-reparse guard: every emitted file must parse back to the
/// same content.
inline void write_json_checked(const std::string& path, const json& j) {
  const std::string text = j.dump(2);
  {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text << '\n';
  }
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  if (json::parse(ss.str()) != j)
    throw std::runtime_error("round-trip validation failed for " + path);
}

inline void write_csv_checked(const std::string& path, const std::string& csv) {
  {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << csv;
  }
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  if (ss.str() != csv) throw std::runtime_error("round-trip validation failed for " + path);
}

}  // namespace minordiff
