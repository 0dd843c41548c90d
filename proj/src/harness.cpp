#include "dnls/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <thread>

namespace dnls {
namespace harness {

using std::numbers::pi;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

// short deterministic path label for one h, e.g. 0.05 -> "0p05"
std::string h_label(double h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", h);
  std::string s = buf;
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return s;
}

std::string idx4(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04zu", i);
  return buf;
}

double l2_diff(const ContinuumField& a, const ContinuumField& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) s += std::norm(a.values[j] - b.values[j]);
  return std::sqrt(a.grid.h * s);
}

double combined_diff(const CoupledState& a, const CoupledState& b) {
  const double dp = l2_diff(a.psi, b.psi);
  const double dq = l2_diff(a.phi, b.phi);
  return std::hypot(dp, dq);
}

// snapshot times -T..T, snapshot_count of them, split into a forward run (t >= 0,
// ascending) and a backward run (t < 0, |t| ascending)
void split_times(const ExperimentConfig& cfg, std::vector<double>& fwd,
                 std::vector<double>& bwd) {
  const int n = cfg.snapshot_count;
  for (int j = 0; j < n; ++j) {
    const double t = -cfg.T + 2.0 * cfg.T * static_cast<double>(j) / (n - 1);
    (t >= 0.0 ? fwd : bwd).push_back(t);
  }
  std::sort(fwd.begin(), fwd.end());
  std::sort(bwd.begin(), bwd.end(), std::greater<>());
}

}  // namespace

TorusGrid fine_grid(const ExperimentConfig& cfg) {
  return make_grid(cfg.m_ref, cfg.torus_length / static_cast<double>(cfg.m_ref));
}

CoupledState initial_profiles(const ExperimentConfig& cfg) {
  const TorusGrid g = fine_grid(cfg);
  return CoupledState{profiles::evaluate(cfg.data_psi, g),
                      profiles::evaluate(cfg.data_phi, g)};
}

CoupledState truncated_profiles(const CoupledState& raw, double h,
                                const ExperimentConfig& cfg) {
  const double n_cut = 0.5 * std::pow(h, cfg.gamma - 1.0);
  return CoupledState{spectral::smooth_lowpass(raw.psi, n_cut),
                      spectral::smooth_lowpass(raw.phi, n_cut)};
}

LatticeField sampled_initial(const ExperimentConfig& cfg, double h) {
  const CoupledState raw = initial_profiles(cfg);
  const spectral::SamplingSpec sp{h, cfg.gamma, cfg.h0};
  return spectral::sample_initial_data(raw.psi, raw.phi, sp);
}

namespace {

ConvergenceEntry run_one_h(const ExperimentConfig& cfg, double h) {
  const auto t_start = clock_type::now();
  ConvergenceEntry e;
  e.h = h;

  const std::size_t m = config::site_count(cfg, h);
  const TorusGrid fine = fine_grid(cfg);
  const TorusGrid lat = make_grid(m, cfg.torus_length / static_cast<double>(m));

  const CoupledState raw = initial_profiles(cfg);
  const spectral::SamplingSpec sp{h, cfg.gamma, cfg.h0};
  const LatticeField u0 = spectral::sample_initial_data(raw.psi, raw.phi, sp);
  const CoupledState ref0 =
      cfg.fast_reference ? raw : truncated_profiles(raw, h, cfg);

  std::vector<double> fwd_t, bwd_t;
  split_times(cfg, fwd_t, bwd_t);

  // reference solve at dt_ref/2 (kept) and dt_ref (Richardson gap)
  std::map<double, CoupledState> ref_states;
  {
    const CoupledParams fine_p{cfg.sign, 0.5 * cfg.dt_ref_resolved(),
                                          cfg.linear_only};
    for (const auto* dir : {&fwd_t, &bwd_t})
      continuum::nls_evolve_visit(ref0, fine_p, *dir,
                                  [&](double t, const CoupledState& s) {
                                    ref_states.emplace(t, s);
                                  });
    const CoupledParams coarse_p{cfg.sign, cfg.dt_ref_resolved(),
                                            cfg.linear_only};
    for (const auto* dir : {&fwd_t, &bwd_t})
      continuum::nls_evolve_visit(ref0, coarse_p, *dir,
                                  [&](double t, const CoupledState& s) {
                                    e.ref_check =
                                        std::max(e.ref_check, combined_diff(s, ref_states.at(t)));
                                  });
  }

  // spectral mass of the reference beyond the reconstruction window |xi| < pi/2h
  for (const auto& [t, s] : ref_states)
    e.window_leak =
        std::max(e.window_leak, std::sqrt(diag::frequency_tail(s, 0.5 * pi / h)));

  // lattice runs, compared snapshot by snapshot
  const DnlsParams lat_p{cfg.sign, cfg.dt, cfg.linear_only};
  FftEngine lat_eng(m), fine_eng(fine.m);
  double combined_sup = 0.0;
  const cplx i_unit{0.0, 1.0};

  auto run_direction = [&](const std::vector<double>& t_list) {
    std::vector<double> taus(t_list.size());
    for (std::size_t j = 0; j < t_list.size(); ++j) taus[j] = t_list[j] / (h * h);
    std::size_t idx = 0;
    lattice::evolve_visit(u0, lat_p, taus, [&](double tau, const LatticeField& u) {
      const double t = t_list[idx++];
      const CoupledState rec = spectral::reconstruct_pair(u, tau, fine, lat_eng, fine_eng);
      const CoupledState& rf = ref_states.at(t);
      const double ep = l2_diff(rec.psi, rf.psi);
      const double eq = l2_diff(rec.phi, rf.phi);
      e.err_psi = std::max(e.err_psi, ep);
      e.err_phi = std::max(e.err_phi, eq);
      const double comb = std::hypot(ep, eq);
      combined_sup = std::max(combined_sup, comb);

      // long-wave route: h^{1/2} || u_n/h - psi(hn) - e^{-4i tau}(-1)^n phi(hn) ||
      const cvec ps = spectral::sample_to_lattice(rf.psi, m);
      const cvec qs = spectral::sample_to_lattice(rf.phi, m);
      const cplx rot = std::exp(-4.0 * tau * i_unit);
      double s = 0.0;
      for (std::size_t n = 0; n < m; ++n) {
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        s += std::norm(u.values[n] / h - ps[n] - rot * sgn * qs[n]);
      }
      const double lw = std::sqrt(h * s);
      e.longwave_err = std::max(e.longwave_err, lw);
      e.agree_gap = std::max(e.agree_gap, std::abs(comb - lw));
    });
  };
  run_direction(fwd_t);
  run_direction(bwd_t);

  if (combined_sup > 0.0 && e.ref_check * 10.0 > combined_sup)
    throw NumericalError("convergence: reference under-resolved at h=" + io::g17(h) +
                         " (ref_check=" + io::g17(e.ref_check) +
                         ", measured=" + io::g17(combined_sup) + "); lower dt_ref");

  (void)lat;
  e.seconds = seconds_since(t_start);
  return e;
}

}  // namespace

ConvergenceReport run_convergence_study(const ExperimentConfig& cfg, int jobs) {
  config::validate(cfg);
  std::vector<double> hs = cfg.h_list;
  std::sort(hs.begin(), hs.end(), std::greater<>());

  ConvergenceReport report;
  report.rows.resize(hs.size());
  const int nworkers = std::max(1, std::min<int>(jobs, static_cast<int>(hs.size())));

  if (nworkers == 1) {
    for (std::size_t i = 0; i < hs.size(); ++i) report.rows[i] = run_one_h(cfg, hs[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= hs.size()) return;
          try {
            report.rows[i] = run_one_h(cfg, hs[i]);
          } catch (...) {
            std::lock_guard<std::mutex> lk(error_mu);
            if (!error) error = std::current_exception();
            return;
          }
        }
      });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  return report;
}

std::string report_csv(const ConvergenceReport& report) {
  if (report.rows.empty()) throw std::invalid_argument("report: no rows to emit");
  std::string s = "h,err_psi,err_phi,longwave_err,ref_check,seconds\n";
  for (const auto& r : report.rows) {
    s += io::g17(r.h) + "," + io::g17(r.err_psi) + "," + io::g17(r.err_phi) + "," +
         io::g17(r.longwave_err) + "," + io::g17(r.ref_check) + "," + io::g17(r.seconds) +
         "\n";
  }
  return s;
}

std::string report_json(const ConvergenceReport& report) {
  if (report.rows.empty()) throw std::invalid_argument("report: no rows to emit");
  std::string s = "{\"schema_version\":1,\"kind\":\"convergence_report\",\"rows\":[";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    if (i) s += ",";
    s += "{\"h\":" + io::g17(r.h) + ",\"err_psi\":" + io::g17(r.err_psi) +
         ",\"err_phi\":" + io::g17(r.err_phi) +
         ",\"longwave_err\":" + io::g17(r.longwave_err) +
         ",\"ref_check\":" + io::g17(r.ref_check) + ",\"seconds\":" + io::g17(r.seconds) +
         "}";
  }
  s += "]}";
  return s;
}

RunPaths run_single(const ExperimentConfig& cfg, double h) {
  config::validate(cfg);
  const std::size_t m = config::site_count(cfg, h);
  const TorusGrid fine = fine_grid(cfg);
  const LatticeField u0 = sampled_initial(cfg, h);

  const double horizon = cfg.T / (h * h);
  const int intervals = cfg.snapshot_count - 1;
  const auto per_interval = static_cast<std::size_t>(
      std::ceil((horizon / intervals) / (pi / 40.0)));
  const std::size_t nsteps = per_interval * static_cast<std::size_t>(intervals);
  std::vector<double> taus(nsteps + 1);
  for (std::size_t j = 0; j <= nsteps; ++j)
    taus[j] = horizon * static_cast<double>(j) / static_cast<double>(nsteps);

  diag::SpacetimeAccumulator l66(NormSpec{6.0, 6.0}, 1.0);
  diag::SpacetimeAccumulator l4i(NormSpec{4.0, norm_inf}, 1.0);
  std::vector<double> coarse_taus;
  std::vector<LatticeField> coarse_states;

  const DnlsParams p{cfg.sign, cfg.dt, cfg.linear_only};
  std::size_t idx = 0;
  lattice::evolve_visit(u0, p, taus, [&](double tau, const LatticeField& u) {
    l66.add(tau, u.values);
    l4i.add(tau, u.values);
    if (idx % per_interval == 0) {
      coarse_taus.push_back(tau);
      coarse_states.push_back(u);
    }
    ++idx;
  });

  const double init_l2 = lattice_l2(u0);
  const double kappa_tail = 8.0;
  const double R_tail = 0.25 * cfg.torus_length;

  const std::string dir = cfg.output_dir + "/single_h" + h_label(h);
  RunPaths paths;
  paths.dir = dir;

  // fields + per-snapshot diagnostics
  FftEngine lat_eng(m), fine_eng(fine.m);
  std::string snap_json;
  std::string mass_json, energy_json, ftail_json, stail_json;
  for (std::size_t j = 0; j < coarse_taus.size(); ++j) {
    const double tau = coarse_taus[j];
    const LatticeField& u = coarse_states[j];
    const CoupledState rec = spectral::reconstruct_pair(u, tau, fine, lat_eng, fine_eng);

    const std::string fu = "fields/u_" + idx4(j) + ".csv";
    const std::string fp = "fields/psi_" + idx4(j) + ".csv";
    const std::string fq = "fields/phi_" + idx4(j) + ".csv";
    io::write_field_csv(dir + "/" + fu,
                        io::FieldRecord{"lattice", "u", m, u.grid.h, tau, true, u.values});
    io::write_field_csv(dir + "/" + fp,
                        io::FieldRecord{"continuum", "psi", fine.m, fine.h, tau, true,
                                        rec.psi.values});
    io::write_field_csv(dir + "/" + fq,
                        io::FieldRecord{"continuum", "phi", fine.m, fine.h, tau, true,
                                        rec.phi.values});
    paths.fields.push_back(dir + "/" + fu);
    paths.fields.push_back(dir + "/" + fp);
    paths.fields.push_back(dir + "/" + fq);

    if (j) {
      snap_json += ",";
      mass_json += ",";
      energy_json += ",";
      ftail_json += ",";
      stail_json += ",";
    }
    snap_json += "{\"tau\":" + io::g17(tau) + ",\"t\":" + io::g17(tau * h * h) +
                 ",\"u\":" + io::jstr(fu) + ",\"psi\":" + io::jstr(fp) +
                 ",\"phi\":" + io::jstr(fq) + "}";
    mass_json += "[" + io::g17(tau) + "," + io::g17(lattice::mass(u)) + "]";
    energy_json += "[" + io::g17(tau) + "," + io::g17(lattice::energy(u, cfg.sign)) + "]";
    ftail_json += "[" + io::g17(tau) + "," + io::g17(diag::frequency_tail(rec, kappa_tail)) + "]";
    stail_json += "[" + io::g17(tau) + "," + io::g17(diag::spatial_tail(rec, R_tail)) + "]";
  }

  const double n_cut = 0.5 * std::pow(h, cfg.gamma - 1.0);
  std::string manifest = "{\"schema_version\":1,\"kind\":\"single_run\",";
  manifest += "\"config_hash\":" + io::jstr(config::config_hash(cfg)) + ",";
  manifest += "\"config_text\":" + io::jstr(config::canonical_string(cfg)) + ",";
  manifest += "\"h\":" + io::g17(h) + ",\"m\":" + std::to_string(m) + ",";
  manifest += "\"n_cut\":" + io::g17(n_cut) + ",";
  manifest += "\"tau_horizon\":" + io::g17(horizon) + ",";
  manifest += "\"snapshots\":[" + snap_json + "]}";
  manifest += "\n";
  paths.manifest = dir + "/manifest.json";
  io::write_text(paths.manifest, manifest);

  std::string diagnostics = "{\"schema_version\":1,\"kind\":\"single_run_diagnostics\",";
  diagnostics += "\"h\":" + io::g17(h) + ",";
  diagnostics += "\"mass\":[" + mass_json + "],";
  diagnostics += "\"energy\":[" + energy_json + "],";
  diagnostics += "\"strichartz\":{\"l6l6\":" + io::g17(l66.value()) +
                 ",\"l4linf\":" + io::g17(l4i.value()) +
                 ",\"initial_l2\":" + io::g17(init_l2) +
                 ",\"ratio_l6l6\":" + io::g17(l66.value() / init_l2) +
                 ",\"ratio_l4linf\":" + io::g17(l4i.value() / init_l2) + "},";
  diagnostics += "\"frequency_tail\":{\"kappa\":" + io::g17(kappa_tail) +
                 ",\"values\":[" + ftail_json + "]},";
  diagnostics += "\"spatial_tail\":{\"R\":" + io::g17(R_tail) + ",\"values\":[" +
                 stail_json + "]}}";
  diagnostics += "\n";
  paths.diagnostics = dir + "/diagnostics.json";
  io::write_text(paths.diagnostics, diagnostics);

  return paths;
}

ConservationResult conservation_check(const ExperimentConfig& cfg, double h) {
  config::validate(cfg);
  ConservationResult res;
  const LatticeField u0 = sampled_initial(cfg, h);
  const double horizon = cfg.T / (h * h);
  std::vector<double> taus(cfg.snapshot_count);
  for (int j = 0; j < cfg.snapshot_count; ++j)
    taus[j] = horizon * static_cast<double>(j) / (cfg.snapshot_count - 1);

  const double m0 = lattice::mass(u0);
  const double e0 = lattice::energy(u0, cfg.sign);
  auto lattice_drift = [&](double dt, double& mass_drift, double& energy_drift) {
    const DnlsParams p{cfg.sign, dt, cfg.linear_only};
    mass_drift = 0.0;
    energy_drift = 0.0;
    lattice::evolve_visit(u0, p, taus, [&](double, const LatticeField& u) {
      mass_drift = std::max(mass_drift, std::abs(lattice::mass(u) - m0) / m0);
      energy_drift = std::max(energy_drift, std::abs(lattice::energy(u, cfg.sign) - e0));
    });
  };
  double md_half = 0.0;
  lattice_drift(cfg.dt, res.lattice_mass_drift, res.lattice_energy_drift);
  lattice_drift(0.5 * cfg.dt, md_half, res.lattice_energy_drift_half);
  res.lattice_energy_ratio = res.lattice_energy_drift / res.lattice_energy_drift_half;

  const CoupledState s0 = truncated_profiles(initial_profiles(cfg), h, cfg);
  std::vector<double> ts(cfg.snapshot_count);
  for (int j = 0; j < cfg.snapshot_count; ++j)
    ts[j] = cfg.T * static_cast<double>(j) / (cfg.snapshot_count - 1);
  const auto [mp0, mq0] = continuum::coupled_mass(s0);
  const double ce0 = continuum::coupled_energy(s0, cfg.sign);
  auto continuum_drift = [&](double dt, double& mass_drift, double& energy_drift) {
    const CoupledParams p{cfg.sign, dt, cfg.linear_only};
    mass_drift = 0.0;
    energy_drift = 0.0;
    continuum::nls_evolve_visit(s0, p, ts, [&](double, const CoupledState& s) {
      const auto [mp, mq] = continuum::coupled_mass(s);
      mass_drift = std::max({mass_drift, std::abs(mp - mp0) / mp0, std::abs(mq - mq0) / mq0});
      energy_drift =
          std::max(energy_drift, std::abs(continuum::coupled_energy(s, cfg.sign) - ce0));
    });
  };
  double cmd_half = 0.0;
  continuum_drift(cfg.dt_ref_resolved(), res.coupled_mass_drift, res.continuum_energy_drift);
  continuum_drift(0.5 * cfg.dt_ref_resolved(), cmd_half, res.continuum_energy_drift_half);
  res.continuum_energy_ratio = res.continuum_energy_drift / res.continuum_energy_drift_half;
  return res;
}

std::vector<StrichartzRow> strichartz_sweep(const ExperimentConfig& cfg) {
  config::validate(cfg);
  std::vector<double> hs = cfg.h_list;
  std::sort(hs.begin(), hs.end(), std::greater<>());
  std::vector<StrichartzRow> rows;

  for (double h : hs) {
    const LatticeField u0 = sampled_initial(cfg, h);
    const double horizon = cfg.T / (h * h);
    const auto nsteps = static_cast<std::size_t>(std::ceil(horizon / (pi / 40.0)));
    const DnlsParams p{cfg.sign, cfg.dt, cfg.linear_only};

    double i66 = 0.0, i4i = 0.0;
    for (const double dir : {1.0, -1.0}) {
      std::vector<double> taus(nsteps + 1);
      for (std::size_t j = 0; j <= nsteps; ++j)
        taus[j] = dir * horizon * static_cast<double>(j) / static_cast<double>(nsteps);
      diag::SpacetimeAccumulator a66(NormSpec{6.0, 6.0}, 1.0);
      diag::SpacetimeAccumulator a4i(NormSpec{4.0, norm_inf}, 1.0);
      lattice::evolve_visit(u0, p, taus, [&](double tau, const LatticeField& u) {
        a66.add(tau, u.values);
        a4i.add(tau, u.values);
      });
      i66 += a66.raw();
      i4i += a4i.raw();
    }

    StrichartzRow row;
    row.h = h;
    row.rec.l6l6 = std::pow(i66, 1.0 / 6.0);
    row.rec.l4linf = std::pow(i4i, 1.0 / 4.0);
    row.rec.initial_l2 = lattice_l2(u0);
    row.rec.ratio_l6l6 = row.rec.l6l6 / row.rec.initial_l2;
    row.rec.ratio_l4linf = row.rec.l4linf / row.rec.initial_l2;
    rows.push_back(row);
  }
  return rows;
}

diag::DriftCurve acl_run(const ExperimentConfig& cfg, double h) {
  config::validate(cfg);
  const LatticeField u0 = sampled_initial(cfg, h);
  const DnlsParams p{cfg.sign, cfg.dt, cfg.linear_only};
  return diag::acl_drift_curve(u0, h, cfg.T, cfg.kappas, p);
}

std::vector<NonresRow> nonres_sweep(const ExperimentConfig& cfg) {
  config::validate(cfg);
  std::vector<double> hs = cfg.h_list;
  std::sort(hs.begin(), hs.end(), std::greater<>());
  const TorusGrid fine = fine_grid(cfg);
  std::vector<NonresRow> rows;

  for (double h : hs) {
    const LatticeField u0 = sampled_initial(cfg, h);
    const double horizon = cfg.nonres_T / (h * h);
    const auto nsteps = static_cast<std::size_t>(std::ceil(horizon / (pi / 80.0)));
    std::vector<double> taus(nsteps + 1);
    for (std::size_t j = 0; j <= nsteps; ++j)
      taus[j] = horizon * static_cast<double>(j) / static_cast<double>(nsteps);
    const DnlsParams p{cfg.sign, cfg.dt, cfg.linear_only};
    const SnapshotSeries series = lattice::evolve(u0, p, taus);

    NonresRow row;
    row.h = h;
    row.psi_osc = diag::nonresonance_integral(series, h, diag::MixedMode::psi_mixed, fine);
    row.psi_ctrl =
        diag::nonresonance_integral(series, h, diag::MixedMode::psi_mixed, fine, true);
    row.phi_osc = diag::nonresonance_integral(series, h, diag::MixedMode::phi_mixed, fine);
    row.phi_ctrl =
        diag::nonresonance_integral(series, h, diag::MixedMode::phi_mixed, fine, true);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace harness
}  // namespace dnls
