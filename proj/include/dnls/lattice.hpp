#pragma once

#include <functional>
#include <vector>

#include "dnls/spectral.hpp"

namespace dnls {

enum class Sign { defocusing, focusing };

// +1 for the defocusing nonlinearity, -1 for focusing.
inline double sign_value(Sign s) { return s == Sign::defocusing ? 1.0 : -1.0; }

// Parameters of one lattice evolution: i u_t = -(Delta_d u) +- 2|u|^2 u in lattice
// time tau. dt is capped at 0.5 (splitting accuracy); linear_only disables the
// nonlinear substeps for free-flow diagnostics.
struct DnlsParams {
  Sign sign = Sign::defocusing;
  double dt = 0.05;
  bool linear_only = false;
};

// Snapshots of one run, in the order visited.
struct SnapshotSeries {
  std::vector<double> taus;
  std::vector<LatticeField> states;
};

namespace lattice {

double mass(const LatticeField& u);

// E[u] = sum_n |u_{n+1} - u_n|^2 +- |u_n|^4 (periodic wrap; + defocusing).
double energy(const LatticeField& u, Sign sign);

// Mass of the sharp low-frequency projection, computed spectrally:
// (1/m) * sum_{|sin theta_k| < lambda} |u_hat_k|^2.
double truncated_mass(const LatticeField& u, const spectral::CutoffSpec& cutoff);

// Exact free flow over time tau: u_hat(theta_k) *= e^{-4 i tau sin^2(theta_k/2)}.
LatticeField linear_propagate(const LatticeField& u, double tau);

// Exact nonlinear flow over time tau: u_n *= e^{-+ 2 i |u_n|^2 tau}.
LatticeField nonlinear_propagate(const LatticeField& u, double tau, Sign sign);

// One Strang step N(dt/2) L(dt) N(dt/2).
LatticeField strang_step(const LatticeField& u, double dt, Sign sign);

// Evolve from u0, visiting each snapshot tau in order (see stepping.hpp for the
// admissible shapes of snapshot_taus). Aborts with NumericalError on non-finite
// values or relative mass drift beyond 1e-11.
void evolve_visit(const LatticeField& u0, const DnlsParams& p,
                  const std::vector<double>& snapshot_taus,
                  const std::function<void(double, const LatticeField&)>& visit);

SnapshotSeries evolve(const LatticeField& u0, const DnlsParams& p,
                      const std::vector<double>& snapshot_taus);

}  // namespace lattice
}  // namespace dnls
