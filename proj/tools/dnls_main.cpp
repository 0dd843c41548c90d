#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dnls/harness.hpp"
#include "json.hpp"

using namespace dnls;

namespace {

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
  ExperimentConfig cfg;
  if (!path.empty()) cfg = config::load_file(path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override must be key=value, got '" + kv + "'");
    config::apply_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "INF") return norm_inf;
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw ConfigError("bad exponent '" + s + "'");
  return v;
}

int cmd_converge(const ExperimentConfig& cfg, int jobs) {
  const harness::ConvergenceReport report = harness::run_convergence_study(cfg, jobs);
  const std::string csv = harness::report_csv(report);
  io::write_text(cfg.output_dir + "/convergence.csv", csv);
  io::write_text(cfg.output_dir + "/convergence.json", harness::report_json(report) + "\n");
  std::fputs(csv.c_str(), stdout);
  for (const auto& r : report.rows)
    std::printf("# h=%s agree_gap=%s window_leak=%s\n", io::g17(r.h).c_str(),
                io::g17(r.agree_gap).c_str(), io::g17(r.window_leak).c_str());
  std::printf("wrote %s and %s\n", (cfg.output_dir + "/convergence.csv").c_str(),
              (cfg.output_dir + "/convergence.json").c_str());
  return 0;
}

int cmd_single(const ExperimentConfig& cfg, double h) {
  const harness::RunPaths paths = harness::run_single(cfg, h);
  std::printf("run directory: %s\n", paths.dir.c_str());
  std::printf("manifest:      %s\n", paths.manifest.c_str());
  std::printf("diagnostics:   %s\n", paths.diagnostics.c_str());
  std::printf("field files:   %zu\n", paths.fields.size());
  return 0;
}

int cmd_acl(const ExperimentConfig& cfg, double h) {
  const diag::DriftCurve curve = harness::acl_run(cfg, h);
  std::printf("kappa,drift,measurable\n");
  for (std::size_t i = 0; i < curve.kappas.size(); ++i)
    std::printf("%s,%s,%d\n", io::g17(curve.kappas[i]).c_str(),
                io::g17(curve.drifts[i]).c_str(), curve.measurable[i] ? 1 : 0);
  std::printf("# mass0=%s floor=%s fitted_exponent=%s assumption_ratio=%s\n",
              io::g17(curve.mass0).c_str(), io::g17(curve.floor).c_str(),
              io::g17(curve.fitted_exponent).c_str(),
              io::g17(curve.assumption_ratio).c_str());
  return 0;
}

int cmd_bilinear(std::size_t m, double K, const std::vector<double>& Ls, int trials,
                 double window, std::uint64_t seed) {
  const diag::BilinearResult res = diag::bilinear_ratio_experiment(m, K, Ls, trials, window, seed);
  std::printf("L,median_lhs,median_ratio,max_ratio\n");
  for (std::size_t i = 0; i < res.Ls.size(); ++i)
    std::printf("%s,%s,%s,%s\n", io::g17(res.Ls[i]).c_str(),
                io::g17(res.median_lhs[i]).c_str(), io::g17(res.median_ratio[i]).c_str(),
                io::g17(res.max_ratio[i]).c_str());
  std::printf("# K=%s trials=%d fitted_slope=%s\n", io::g17(res.K).c_str(), trials,
              io::g17(res.fitted_slope).c_str());
  return 0;
}

int cmd_nonres(const ExperimentConfig& cfg) {
  const auto rows = harness::nonres_sweep(cfg);
  std::printf("h,psi_osc,psi_ctrl,phi_osc,phi_ctrl\n");
  for (const auto& r : rows)
    std::printf("%s,%s,%s,%s,%s\n", io::g17(r.h).c_str(), io::g17(r.psi_osc).c_str(),
                io::g17(r.psi_ctrl).c_str(), io::g17(r.phi_osc).c_str(),
                io::g17(r.phi_ctrl).c_str());
  return 0;
}

int cmd_norms(const std::string& run_dir, const std::string& q_s, const std::string& p_s) {
  const NormSpec spec{parse_exponent(q_s), parse_exponent(p_s)};
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(io::read_text(run_dir + "/manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad manifest in " + run_dir + ": " + e.what());
  }
  SnapshotSeries series;
  for (const auto& snap : manifest.at("snapshots")) {
    series.taus.push_back(snap.at("tau").get<double>());
    const io::FieldRecord rec =
        io::read_field_csv(run_dir + "/" + snap.at("u").get<std::string>());
    series.states.push_back(LatticeField{make_grid(rec.m, rec.spacing), rec.values});
  }
  if (series.states.empty()) throw IoError("no snapshots listed in " + run_dir);
  const double value = diag::spacetime_norm(series, spec);
  std::printf("L^%s ell^%s norm over %zu snapshots: %s\n", q_s.c_str(), p_s.c_str(),
              series.states.size(), io::g17(value).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete cubic NLS lattice experiments"};
  app.require_subcommand(1);
  // --h is a real option below, so help must not claim the short -h
  app.set_help_flag("--help", "print help and exit");

  std::string cfg_path;
  std::vector<std::string> overrides;
  int jobs = 1;
  double h = 0.05;
  std::string h_list_s, sign_s;

  auto add_common = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print help and exit");
    sub->add_option("--config", cfg_path, "key=value config file");
    sub->add_option("overrides", overrides, "config overrides as key=value");
  };

  CLI::App* converge =
      app.add_subcommand("converge", "h-sweep reconstruction errors vs the coupled reference");
  add_common(converge);
  converge->add_option("--jobs", jobs, "parallel h jobs")->check(CLI::PositiveNumber);
  converge->add_option("--h-list", h_list_s, "comma separated h values");
  converge->add_option("--sign", sign_s, "defocusing or focusing");

  CLI::App* single = app.add_subcommand("single", "one lattice run with stored fields");
  add_common(single);
  single->add_option("--h", h, "lattice spacing")->required();

  CLI::App* acl = app.add_subcommand("acl", "truncated-mass drift across cutoffs");
  add_common(acl);
  acl->add_option("--h", h, "lattice spacing");
  std::string kappas_s;
  acl->add_option("--kappas", kappas_s, "comma separated cutoff frequencies");

  CLI::App* bilinear = app.add_subcommand("bilinear", "shell-to-shell product norm ratios");
  bilinear->set_help_flag("--help", "print help and exit");
  double K = 1.0 / 64.0, window = 50.0;
  std::vector<double> Ls{0.125, 0.25, 0.5, 1.0};
  int trials = 32;
  std::uint64_t seed = 1;
  std::size_t bil_m = 4096;
  bilinear->add_option("--K", K, "low shell scale");
  bilinear->add_option("--L-list", Ls, "high shell scales")->delimiter(',');
  bilinear->add_option("--trials", trials, "random trials per shell pair");
  bilinear->add_option("--seed", seed, "base seed");
  bilinear->add_option("--window", window, "time window per trial");
  bilinear->add_option("--m", bil_m, "lattice size");

  CLI::App* nonres = app.add_subcommand("nonres", "oscillatory mixed-cubic integrals per h");
  add_common(nonres);

  CLI::App* norms = app.add_subcommand("norms", "space-time norm of a stored run");
  norms->set_help_flag("--help", "print help and exit");
  std::string run_dir, q_s = "6", p_s = "6";
  norms->add_option("--run", run_dir, "run directory with manifest.json")->required();
  norms->add_option("--q", q_s, "time exponent (number or inf)");
  norms->add_option("--p", p_s, "space exponent (number or inf)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (converge->parsed()) {
      ExperimentConfig cfg = load_config(cfg_path, overrides);
      if (!h_list_s.empty()) config::apply_kv(cfg, "h_list", h_list_s);
      if (!sign_s.empty()) config::apply_kv(cfg, "sign", sign_s);
      return cmd_converge(cfg, jobs);
    }
    if (single->parsed()) return cmd_single(load_config(cfg_path, overrides), h);
    if (acl->parsed()) {
      ExperimentConfig cfg = load_config(cfg_path, overrides);
      if (!kappas_s.empty()) config::apply_kv(cfg, "kappas", kappas_s);
      return cmd_acl(cfg, h);
    }
    if (bilinear->parsed()) return cmd_bilinear(bil_m, K, Ls, trials, window, seed);
    if (nonres->parsed()) return cmd_nonres(load_config(cfg_path, overrides));
    if (norms->parsed()) return cmd_norms(run_dir, q_s, p_s);
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  }
}
