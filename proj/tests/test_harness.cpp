#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "dnls/config.hpp"
#include "dnls/harness.hpp"
#include "dnls/io.hpp"
#include "dnls/profiles.hpp"
#include "dnls/spectral.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace dnls;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("default config validates and resolves derived quantities") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(config::validate(cfg));
  CHECK(cfg.dt_ref_resolved() == 0.05 / 16.0);
  cfg.dt_ref = 1e-3;
  CHECK(cfg.dt_ref_resolved() == 1e-3);

  CHECK(config::site_count(cfg, 0.2) == 256);
  CHECK(config::site_count(cfg, 0.1) == 512);
  CHECK(config::site_count(cfg, 0.025) == 2048);
  CHECK_THROWS_AS(config::site_count(cfg, 0.15), ConfigError);
  CHECK_THROWS_AS(config::site_count(cfg, 0.3), ConfigError);
}

TEST_CASE("apply_kv covers every key and rejects unknown ones") {
  ExperimentConfig cfg;
  config::apply_kv(cfg, "T", "2.5");
  config::apply_kv(cfg, "gamma", "0.4");
  config::apply_kv(cfg, "sign", "focusing");
  config::apply_kv(cfg, "torus_length", "25.6");
  config::apply_kv(cfg, "m_ref", "2048");
  config::apply_kv(cfg, "dt", "0.025");
  config::apply_kv(cfg, "dt_ref", "0.001");
  config::apply_kv(cfg, "h0", "0.3");
  config::apply_kv(cfg, "snapshot_count", "9");
  config::apply_kv(cfg, "seed", "7");
  config::apply_kv(cfg, "h_list", "0.2,0.1");
  config::apply_kv(cfg, "kappas", "2,4");
  config::apply_kv(cfg, "data_psi", "sech(amplitude=1.0)");
  config::apply_kv(cfg, "data_phi", "plane_wave(mode=3,amplitude=0.5)");
  config::apply_kv(cfg, "output_dir", "elsewhere");
  config::apply_kv(cfg, "linear_only", "true");
  config::apply_kv(cfg, "fast_reference", "true");
  config::apply_kv(cfg, "nonres_T", "0.1");

  CHECK(cfg.T == 2.5);
  CHECK(cfg.gamma == 0.4);
  CHECK(cfg.sign == Sign::focusing);
  CHECK(cfg.torus_length == 25.6);
  CHECK(cfg.m_ref == 2048);
  CHECK(cfg.dt == 0.025);
  CHECK(cfg.dt_ref_resolved() == 0.001);
  CHECK(cfg.h0 == 0.3);
  CHECK(cfg.snapshot_count == 9);
  CHECK(cfg.seed == 7);
  CHECK(cfg.h_list == std::vector<double>{0.2, 0.1});
  CHECK(cfg.kappas == std::vector<double>{2.0, 4.0});
  CHECK(cfg.data_psi == "sech(amplitude=1.0)");
  CHECK(cfg.output_dir == "elsewhere");
  CHECK(cfg.linear_only);
  CHECK(cfg.fast_reference);
  CHECK(cfg.nonres_T == 0.1);

  CHECK_THROWS_AS(config::apply_kv(cfg, "misspelled", "1"), ConfigError);
  CHECK_THROWS_WITH_AS(config::apply_kv(cfg, "hzero", "0.2"),
                       doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_AS(config::apply_kv(cfg, "T", "abc"), ConfigError);
  CHECK_THROWS_AS(config::apply_kv(cfg, "sign", "defocus"), ConfigError);
  CHECK_THROWS_AS(config::apply_kv(cfg, "h_list", ""), ConfigError);
}

TEST_CASE("config files parse with comments and report bad lines by number") {
  const std::string good = temp_path("dnls_cfg_good.cfg");
  io::write_text(good,
                 "# experiment setup\n"
                 "\n"
                 "T = 2.0\n"
                 "h_list = 0.2, 0.1\n"
                 "sign=focusing  \n");
  const ExperimentConfig cfg = config::load_file(good);
  CHECK(cfg.T == 2.0);
  CHECK(cfg.h_list == std::vector<double>{0.2, 0.1});
  CHECK(cfg.sign == Sign::focusing);
  CHECK(cfg.snapshot_count == 17);  // untouched keys keep defaults

  const std::string bad = temp_path("dnls_cfg_bad.cfg");
  io::write_text(bad, "T=1.0\n# fine\nnot a key value line\n");
  CHECK_THROWS_WITH_AS(config::load_file(bad), doctest::Contains(":3"), ConfigError);

  CHECK_THROWS_AS(config::load_file(temp_path("dnls_cfg_missing.cfg")), ConfigError);
  fs::remove(good);
  fs::remove(bad);
}

TEST_CASE("canonical string ignores output_dir and the hash tracks content") {
  ExperimentConfig a, b;
  a.output_dir = "runs_a";
  b.output_dir = "runs_b";
  CHECK(config::canonical_string(a) == config::canonical_string(b));
  CHECK(config::config_hash(a) == config::config_hash(b));
  CHECK(config::config_hash(a).size() == 16);

  b.h_list = {0.2, 0.1};
  CHECK(config::config_hash(a) != config::config_hash(b));
  b = a;
  b.seed = 2;
  CHECK(config::config_hash(a) != config::config_hash(b));
}

TEST_CASE("validate rejects out-of-range configurations") {
  const auto broken = [](auto&& patch) {
    ExperimentConfig cfg;
    patch(cfg);
    return cfg;
  };
  CHECK_THROWS_AS(config::validate(broken([](auto& c) { c.T = 0.0; })), ConfigError);
  CHECK_THROWS_AS(config::validate(broken([](auto& c) { c.gamma = 1.0; })), ConfigError);
  CHECK_THROWS_AS(config::validate(broken([](auto& c) { c.gamma = 0.0; })), ConfigError);
  CHECK_THROWS_AS(config::validate(broken([](auto& c) { c.dt = 0.6; })), ConfigError);
  CHECK_THROWS_AS(config::validate(broken([](auto& c) { c.dt_ref = 0.0; })), ConfigError);
  CHECK_THROWS_AS(config::validate(broken([](auto& c) { c.snapshot_count = 1; })),
                  ConfigError);
  CHECK_THROWS_AS(config::validate(broken([](auto& c) { c.h_list.clear(); })), ConfigError);
  CHECK_THROWS_AS(config::validate(broken([](auto& c) { c.h_list = {0.3}; })), ConfigError);
  CHECK_THROWS_AS(config::validate(broken([](auto& c) { c.m_ref = 3000; })), ConfigError);
  CHECK_THROWS_AS(config::validate(broken([](auto& c) { c.m_ref = 256; })), ConfigError);
  CHECK_THROWS_AS(config::validate(broken([](auto& c) { c.nonres_T = 0.0; })), ConfigError);
  CHECK_THROWS_AS(config::validate(broken([](auto& c) { c.data_psi = "nope(x=1)"; })),
                  std::invalid_argument);
}

TEST_CASE("profile families evaluate their closed forms") {
  const TorusGrid g = make_grid(256, 0.1);

  const auto psi = profiles::evaluate("gaussian(amplitude=0.75,width=3.0,center=0.5)", g);
  for (std::size_t j : {std::size_t{0}, std::size_t{17}, std::size_t{200}}) {
    const double x = centered_coord(j, g);
    const double want = 0.75 * std::exp(-((x - 0.5) / 3.0) * ((x - 0.5) / 3.0));
    CHECK(std::abs(psi.values[j] - cplx(want, 0.0)) < 1e-15);
  }

  const auto sech = profiles::evaluate("sech(amplitude=2.0)", g);  // width defaults to 1
  for (std::size_t j : {std::size_t{3}, std::size_t{128}}) {
    const double x = centered_coord(j, g);
    CHECK(std::abs(sech.values[j] - cplx(2.0 / std::cosh(x), 0.0)) < 1e-15);
  }

  const auto pw = profiles::evaluate("plane_wave(mode=3,amplitude=0.5)", g);
  const double xi = 2.0 * std::numbers::pi * 3.0 / g.length();
  for (std::size_t j : {std::size_t{40}, std::size_t{250}}) {
    const double x = centered_coord(j, g);
    CHECK(std::abs(pw.values[j] - 0.5 * std::exp(cplx(0.0, xi * x))) < 1e-14);
  }

  const auto tb = profiles::evaluate("two_bump(amplitude=1.5,width=2.0,sep=6.0)", g);
  for (std::size_t j : {std::size_t{10}, std::size_t{100}}) {
    const double x = centered_coord(j, g);
    const double want = 1.5 * (std::exp(-((x - 3.0) / 2.0) * ((x - 3.0) / 2.0)) +
                               std::exp(-((x + 3.0) / 2.0) * ((x + 3.0) / 2.0)));
    CHECK(std::abs(tb.values[j] - cplx(want, 0.0)) < 1e-15);
  }
}

TEST_CASE("profile parsing rejects malformed text") {
  CHECK_THROWS_AS(profiles::parse_profile("gaussian"), std::invalid_argument);
  CHECK_THROWS_AS(profiles::parse_profile("gaussian(width:3)"), std::invalid_argument);
  CHECK_THROWS_AS(profiles::parse_profile("gaussian(width=abc)"), std::invalid_argument);
  const TorusGrid g = make_grid(64, 0.1);
  CHECK_THROWS_AS(profiles::evaluate("vortex(width=1)", g), std::invalid_argument);
  CHECK_THROWS_AS(profiles::evaluate("gaussian(amplitude=1)", g),
                  std::invalid_argument);  // width required
  CHECK_THROWS_AS(profiles::evaluate("plane_wave(mode=1.5,amplitude=1)", g),
                  std::invalid_argument);
  CHECK_THROWS_AS(profiles::evaluate("two_bump(amplitude=1,width=1)", g),
                  std::invalid_argument);  // sep required
}

TEST_CASE("g17 round-trips doubles and field csv preserves records") {
  for (double v : {1.0 / 3.0, -2.718281828459045e-7, 51.2, 0.0, 1e17, -0.049999999999999996}) {
    CHECK(std::stod(io::g17(v)) == v);
  }

  io::FieldRecord rec;
  rec.kind = "lattice";
  rec.component = "u";
  rec.m = 16;
  rec.spacing = 0.2;
  rec.tau = 12.566370614359172;
  rec.has_tau = true;
  rec.values = oracles::random_cvec(16, 99);

  const std::string path = temp_path("dnls_field_roundtrip.csv");
  io::write_field_csv(path, rec);
  const io::FieldRecord back = io::read_field_csv(path);
  CHECK(back.kind == rec.kind);
  CHECK(back.component == rec.component);
  CHECK(back.m == rec.m);
  CHECK(back.spacing == rec.spacing);
  CHECK(back.has_tau);
  CHECK(back.tau == rec.tau);
  REQUIRE(back.values.size() == rec.values.size());
  CHECK(oracles::max_diff(back.values, rec.values) == 0.0);
  fs::remove(path);

  CHECK_THROWS_AS(io::read_field_csv(temp_path("dnls_field_missing.csv")), IoError);
}

TEST_CASE("convergence reports serialize with a pinned schema") {
  harness::ConvergenceReport rep;
  CHECK_THROWS_AS(harness::report_csv(rep), std::invalid_argument);
  CHECK_THROWS_AS(harness::report_json(rep), std::invalid_argument);

  harness::ConvergenceEntry r0;
  r0.h = 0.2;
  r0.err_psi = 1.0 / 3.0;
  r0.err_phi = 2.0 / 7.0;
  r0.longwave_err = 0.3333333333333333;
  r0.ref_check = 4.9e-12;
  r0.seconds = 1.25;
  harness::ConvergenceEntry r1 = r0;
  r1.h = 0.1;
  r1.err_psi /= 4.0;
  rep.rows = {r0, r1};

  const std::string csv = harness::report_csv(rep);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "h,err_psi,err_phi,longwave_err,ref_check,seconds");
  CHECK(csv.find("0.20000000000000001,0.33333333333333331") != std::string::npos);

  const auto j = nlohmann::json::parse(harness::report_json(rep));
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("kind") == "convergence_report");
  REQUIRE(j.at("rows").size() == 2);
  const auto& jr = j.at("rows").at(0);
  CHECK(jr.at("h").get<double>() == r0.h);
  CHECK(jr.at("err_psi").get<double>() == r0.err_psi);
  CHECK(jr.at("err_phi").get<double>() == r0.err_phi);
  CHECK(jr.at("longwave_err").get<double>() == r0.longwave_err);
  CHECK(jr.at("ref_check").get<double>() == r0.ref_check);
  CHECK(jr.at("seconds").get<double>() == r0.seconds);
  CHECK(j.at("rows").at(1).at("err_psi").get<double>() == r1.err_psi);
}

TEST_CASE("sampled initial data matches the hand-assembled pipeline") {
  ExperimentConfig cfg;
  const double h = 0.2;
  const LatticeField direct = harness::sampled_initial(cfg, h);

  const CoupledState raw = harness::initial_profiles(cfg);
  const CoupledState tr = harness::truncated_profiles(raw, h, cfg);
  const std::size_t m = config::site_count(cfg, h);
  const cvec ps = spectral::sample_to_lattice(tr.psi, m);
  const cvec qs = spectral::sample_to_lattice(tr.phi, m);
  REQUIRE(direct.values.size() == m);
  cvec manual(m);
  for (std::size_t n = 0; n < m; ++n) {
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    manual[n] = h * (ps[n] + sgn * qs[n]);
  }
  CHECK(oracles::max_diff(direct.values, manual) < 1e-12 * max_abs(direct.values));
}

TEST_CASE("conservation check reports drift-free mass on a short window") {
  ExperimentConfig cfg;
  cfg.T = 0.2;
  const auto res = harness::conservation_check(cfg, 0.2);
  CHECK(res.lattice_mass_drift <= 1e-11);
  CHECK(res.coupled_mass_drift <= 1e-11);
  CHECK(std::isfinite(res.lattice_energy_ratio));
  CHECK(std::isfinite(res.continuum_energy_ratio));
  CHECK(res.lattice_energy_drift_half < res.lattice_energy_drift);
  CHECK(res.continuum_energy_drift_half < res.continuum_energy_drift);
}

TEST_CASE("linear flow h-sweep hits the sampling accuracy floor") {
  ExperimentConfig cfg;
  cfg.linear_only = true;
  cfg.T = 0.05;
  cfg.snapshot_count = 3;
  cfg.h_list = {0.2, 0.0125};
  cfg.data_psi = "gaussian(amplitude=0.75,width=8.0,center=0.0)";
  cfg.data_phi = "gaussian(amplitude=0.5,width=7.0,center=0.0)";

  const auto seq = harness::run_convergence_study(cfg, 1);
  REQUIRE(seq.rows.size() == 2);
  CHECK(seq.rows[0].h == 0.2);
  CHECK(seq.rows[1].h == 0.0125);

  MESSAGE("linear sweep h=0.2: err_psi=" << seq.rows[0].err_psi
                                         << " err_phi=" << seq.rows[0].err_phi);
  CHECK(seq.rows[1].err_psi <= 1e-8);
  CHECK(seq.rows[1].err_phi <= 1e-8);
  CHECK(seq.rows[1].longwave_err <= 1e-8);
  for (const auto& row : seq.rows) CHECK(row.agree_gap <= 1e-9);

  // worker-pool execution reproduces the sequential rows exactly
  const auto par = harness::run_convergence_study(cfg, 2);
  REQUIRE(par.rows.size() == seq.rows.size());
  for (std::size_t i = 0; i < seq.rows.size(); ++i) {
    CHECK(par.rows[i].h == seq.rows[i].h);
    CHECK(par.rows[i].err_psi == seq.rows[i].err_psi);
    CHECK(par.rows[i].err_phi == seq.rows[i].err_phi);
    CHECK(par.rows[i].longwave_err == seq.rows[i].longwave_err);
    CHECK(par.rows[i].ref_check == seq.rows[i].ref_check);
  }
}

TEST_CASE("single runs are byte-identical across repeats") {
  ExperimentConfig cfg;
  cfg.T = 0.2;
  cfg.snapshot_count = 3;
  cfg.h_list = {0.2};

  const std::string base = temp_path("dnls_single_det");
  fs::remove_all(base + "_a");
  fs::remove_all(base + "_b");
  cfg.output_dir = base + "_a";
  const auto a = harness::run_single(cfg, 0.2);
  cfg.output_dir = base + "_b";
  const auto b = harness::run_single(cfg, 0.2);

  REQUIRE(a.fields.size() == b.fields.size());
  CHECK(io::read_text(a.manifest) == io::read_text(b.manifest));
  CHECK(io::read_text(a.diagnostics) == io::read_text(b.diagnostics));
  for (std::size_t i = 0; i < a.fields.size(); ++i)
    CHECK(io::read_text(a.fields[i]) == io::read_text(b.fields[i]));

  const auto manifest = nlohmann::json::parse(io::read_text(a.manifest));
  CHECK(manifest.at("config_hash") == config::config_hash(cfg));
  CHECK(manifest.at("kind") == "single_run");
  CHECK(manifest.at("h").get<double>() == 0.2);
  REQUIRE(manifest.at("snapshots").size() == 3);

  // every referenced field file parses back
  const auto rec = io::read_field_csv(a.fields.front());
  CHECK(rec.m > 0);
  CHECK(rec.values.size() == rec.m);

  fs::remove_all(base + "_a");
  fs::remove_all(base + "_b");
}
