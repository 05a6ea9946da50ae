// Command-line front end: deterministic predictions, seeded Monte Carlo
// runs, and the sampling-free analytic verification suite.
//
// Exit codes: 0 on success, 1 on a statistical failure, 2 on a usage or
// configuration error.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <iostream>

#include "minordiff/config.hpp"
#include "minordiff/report_io.hpp"
#include "minordiff/verify.hpp"

namespace {

using namespace minordiff;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int cmd_predict(const std::string& function, double phi, const std::string& ensemble,
                double d_star, const std::string& out_path) {
  const Ratio ratio = make_ratio(phi, d_star);
  const EnsembleSpec& ens = find_ensemble(ensemble);
  const TestFunction& f = find_test_function(function);
  const json j = to_json(predict(f, ratio, ens.sigma2, ens.sigma4));
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json_checked(out_path, j);
  }
  return 0;
}

int cmd_simulate(ExperimentConfig cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string manifest_path = (fs::path(out_dir) / "manifest.json").string();
  const std::string report_path = (fs::path(out_dir) / "report.json").string();
  const std::string csv_path = (fs::path(out_dir) / "report.csv").string();

  // manifest first: outputs reference it and a crashed run leaves a trace
  json manifest{{"version", kVersion},
                {"created_utc", utc_now()},
                {"seed", cfg.seed},
                {"config", to_json(cfg)},
                {"config_text", render_config(cfg)},
                {"outputs", {{"report_json", report_path}, {"report_csv", csv_path}}}};
  write_json_checked(manifest_path, manifest);

  const MCReport rep = run_experiment(cfg);
  json jrep = to_json(rep);
  jrep["manifest"] = manifest_path;
  write_json_checked(report_path, jrep);
  write_csv_checked(csv_path, to_csv(rep));

  std::cout << "report: " << report_path << "\n";
  for (const auto& r : rep.per_n)
    for (const auto& v : r.verdicts)
      if (v.status == "fail")
        std::cout << "FAIL N=" << r.n << " " << v.name << ": value " << v.value
                  << " vs predicted " << v.predicted << "\n";
  if (rep.sweep.status == "fail") std::cout << "FAIL N-sweep monotonicity\n";
  std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_verify(const std::string& grid) {
  VerifyOptions opt;
  if (grid == "fine")
    opt.refine = 2;
  else if (grid != "default")
    throw ConfigError("unknown grid '" + grid + "' (expected default|fine)");
  const VerifyResult res = run_verify_suite(opt);
  for (const auto& c : res.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " (value " << c.value
              << ", bound " << c.threshold << ")\n";
  std::cout << (res.pass ? "PASS" : "FAIL") << " (" << res.checks.size() << " checks)\n";
  return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minor-difference linear eigenvalue statistics of sample covariance matrices"};
  app.require_subcommand(1);

  std::string function = "id", ensemble = "complex-gaussian", out_path;
  double phi = 1.0, d_star = 0.05;
  auto* predict_cmd = app.add_subcommand("predict", "deterministic limit and variance");
  predict_cmd->add_option("-f,--function", function, "test function label");
  predict_cmd->add_option("--phi", phi, "aspect ratio M/N");
  predict_cmd->add_option("--ensemble", ensemble, "entry distribution label");
  predict_cmd->add_option("--d-star", d_star, "rectangular regime threshold");
  predict_cmd->add_option("--out", out_path, "write JSON here instead of stdout");

  std::string config_path, out_dir = "out";
  std::vector<int> n_override;
  int trials_override = -1;
  std::int64_t seed_override = -1;
  double eta0_override = -1.0, phi_override = -1e300;
  std::string fn_override, ens_override, checks_override;
  auto* sim = app.add_subcommand("simulate", "seeded Monte Carlo verification run");
  sim->add_option("-c,--config", config_path, "experiment config file");
  sim->add_option("--out", out_dir, "output directory");
  sim->add_option("--N", n_override, "override: list of N values");
  sim->add_option("--trials", trials_override, "override: trials per N");
  sim->add_option("--seed", seed_override, "override: master seed");
  sim->add_option("--eta0", eta0_override, "override: contour cut height");
  sim->add_option("--phi", phi_override, "override: aspect ratio");
  sim->add_option("--function", fn_override, "override: test function");
  sim->add_option("--ensemble", ens_override, "override: ensemble label");
  sim->add_option("--checks", checks_override, "override: comma list of per-draw checks");

  std::string grid = "default";
  auto* ver = app.add_subcommand("verify", "sampling-free analytic property suite");
  ver->add_option("--grid", grid, "default|fine");

  try {
    app.parse(argc, argv);
    if (predict_cmd->parsed()) return cmd_predict(function, phi, ensemble, d_star, out_path);
    if (sim->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty()) cfg = load_config(config_path);
      if (!n_override.empty()) cfg.n_list = n_override;
      if (trials_override > 0) cfg.trials = trials_override;
      if (seed_override >= 0) cfg.seed = std::uint64_t(seed_override);
      if (eta0_override > 0) cfg.eta0 = eta0_override;
      if (phi_override > -1e299) cfg.phi = phi_override;
      if (!fn_override.empty()) cfg.function = fn_override;
      if (!ens_override.empty()) cfg.ensemble = ens_override;
      if (!checks_override.empty()) {
        cfg.checks.clear();
        for (const auto& c : detail::split(checks_override, ',')) cfg.checks.insert(c);
      }
      cfg.validate();
      return cmd_simulate(cfg, out_dir);
    }
    return cmd_verify(grid);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const RegimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
