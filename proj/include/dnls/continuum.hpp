#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "dnls/lattice.hpp"

namespace dnls {

// Parameters of the coupled limit system
//   i psi_t = -psi_xx +- 2(|psi|^2 + 2|phi|^2) psi
//   i phi_t = +phi_xx +- 2(|phi|^2 + 2|psi|^2) phi
// (+ defocusing). dt is the continuum-time step.
struct CoupledParams {
  Sign sign = Sign::defocusing;
  double dt = 1e-3;
  bool linear_only = false;
};

struct CoupledSeries {
  std::vector<double> times;
  std::vector<CoupledState> states;
};

namespace continuum {

// (integral |psi|^2, integral |phi|^2) with the grid quadrature weight.
std::pair<double, double> coupled_mass(const CoupledState& s);

// integral of |psi_x|^2 - |phi_x|^2 +- (|psi|^4 + |phi|^4 + 4 |psi|^2 |phi|^2);
// derivatives are spectral.
double coupled_energy(const CoupledState& s, Sign sign);

// Exact linear flow over time t: psi_hat *= e^{-i t xi^2}, phi_hat *= e^{+i t xi^2}.
CoupledState nls_linear_step(const CoupledState& s, double t);

// Exact nonlinear flow over time t (moduli are pointwise invariant):
// psi *= e^{-+ 2 i (|psi|^2 + 2|phi|^2) t}, phi *= e^{-+ 2 i (|phi|^2 + 2|psi|^2) t}.
CoupledState nls_nonlinear_step(const CoupledState& s, double t, Sign sign);

CoupledState nls_strang_step(const CoupledState& s, double dt, Sign sign);

// Evolve from s0, visiting each snapshot time in order. Aborts with
// NumericalError on non-finite values or per-component mass drift beyond 1e-11.
void nls_evolve_visit(const CoupledState& s0, const CoupledParams& p,
                      const std::vector<double>& snapshot_times,
                      const std::function<void(double, const CoupledState&)>& visit);

CoupledSeries nls_evolve(const CoupledState& s0, const CoupledParams& p,
                         const std::vector<double>& snapshot_times);

}  // namespace continuum
}  // namespace dnls
