#pragma once

#include "dnls/config.hpp"
#include "dnls/diagnostics.hpp"
#include "dnls/io.hpp"
#include "dnls/profiles.hpp"

namespace dnls {
namespace harness {

// Fine reference grid of a configuration.
TorusGrid fine_grid(const ExperimentConfig& cfg);

// (psi0, phi0) evaluated from the configured profile specs on the fine grid.
CoupledState initial_profiles(const ExperimentConfig& cfg);

// Smooth low-pass truncation of both profiles at this h's n_cut.
CoupledState truncated_profiles(const CoupledState& raw, double h,
                                const ExperimentConfig& cfg);

// Lattice initial data for one h (profiles, truncation, sampling).
LatticeField sampled_initial(const ExperimentConfig& cfg, double h);

// One row of the h-sweep. err_psi/err_phi/longwave_err are sups over the shared
// snapshot times in [-T, T]; ref_check is the reference solver's own Richardson
// gap; agree_gap and window_leak are diagnostics behind the
// "L2 error equals long-wave error" identity.
struct ConvergenceEntry {
  double h = 0.0;
  double err_psi = 0.0;
  double err_phi = 0.0;
  double longwave_err = 0.0;
  double ref_check = 0.0;
  double seconds = 0.0;
  double agree_gap = 0.0;
  double window_leak = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceEntry> rows;  // ordered by decreasing h
};

ConvergenceReport run_convergence_study(const ExperimentConfig& cfg, int jobs = 1);

// Pinned column order h,err_psi,err_phi,longwave_err,ref_check,seconds.
std::string report_csv(const ConvergenceReport& report);
std::string report_json(const ConvergenceReport& report);

// One h end to end: sample, evolve, reconstruct, diagnose, serialize. Returns
// the paths written. Bytes are a pure function of (config, h).
struct RunPaths {
  std::string dir;
  std::string manifest;
  std::string diagnostics;
  std::vector<std::string> fields;
};
RunPaths run_single(const ExperimentConfig& cfg, double h);

// Mass/energy drift behavior of both solvers under dt halving.
struct ConservationResult {
  double lattice_mass_drift = 0.0;    // relative, at cfg.dt
  double coupled_mass_drift = 0.0;    // relative, worse component
  double lattice_energy_drift = 0.0;  // absolute, at cfg.dt
  double lattice_energy_drift_half = 0.0;
  double continuum_energy_drift = 0.0;
  double continuum_energy_drift_half = 0.0;
  double lattice_energy_ratio = 0.0;  // drift(dt) / drift(dt/2)
  double continuum_energy_ratio = 0.0;
};
ConservationResult conservation_check(const ExperimentConfig& cfg, double h);

struct StrichartzRow {
  double h = 0.0;
  diag::StrichartzRecord rec;
};
std::vector<StrichartzRow> strichartz_sweep(const ExperimentConfig& cfg);

diag::DriftCurve acl_run(const ExperimentConfig& cfg, double h);

struct NonresRow {
  double h = 0.0;
  double psi_osc = 0.0;
  double psi_ctrl = 0.0;
  double phi_osc = 0.0;
  double phi_ctrl = 0.0;
};
std::vector<NonresRow> nonres_sweep(const ExperimentConfig& cfg);

}  // namespace harness
}  // namespace dnls
