#include "dnls/continuum.hpp"

#include <cmath>
#include <limits>

#include "dnls/stepping.hpp"

namespace dnls {
namespace continuum {

std::pair<double, double> coupled_mass(const CoupledState& s) {
  return {s.psi.grid.h * l2_norm_sq(s.psi.values), s.phi.grid.h * l2_norm_sq(s.phi.values)};
}

double coupled_energy(const CoupledState& s, Sign sign) {
  const TorusGrid& g = s.psi.grid;
  FftEngine eng(g.m);
  cvec psi_hat = spectral::continuum_spectrum(s.psi, eng);
  cvec phi_hat = spectral::continuum_spectrum(s.phi, eng);
  double kinetic = 0.0;
  for (std::size_t k = 0; k < g.m; ++k) {
    const double xi2 = xi_node(k, g) * xi_node(k, g);
    kinetic += xi2 * (std::norm(psi_hat[k]) - std::norm(phi_hat[k]));
  }
  kinetic /= g.length();

  double quartic = 0.0;
  for (std::size_t j = 0; j < g.m; ++j) {
    const double a2 = std::norm(s.psi.values[j]);
    const double b2 = std::norm(s.phi.values[j]);
    quartic += a2 * a2 + b2 * b2 + 4.0 * a2 * b2;
  }
  return kinetic + sign_value(sign) * g.h * quartic;
}

namespace {

void check_grids(const CoupledState& s) {
  if (!(s.psi.grid == s.phi.grid))
    throw std::invalid_argument("nls: psi and phi grids differ");
}

class NlsEvolver {
 public:
  NlsEvolver(const TorusGrid& grid, const CoupledParams& p)
      : grid_(grid), p_(p), eng_(grid.m), xi2_(grid.m) {
    for (std::size_t k = 0; k < grid.m; ++k) {
      const double xi = xi_node(k, grid);
      xi2_[k] = xi * xi;
    }
  }

  void linear(cvec& psi, cvec& phi, double t) {
    if (t != cached_dt_) {
      cached_dt_ = t;
      phase_.resize(grid_.m);
      for (std::size_t k = 0; k < grid_.m; ++k)
        phase_[k] = std::exp(cplx{0.0, -xi2_[k] * t});
    }
    eng_.forward(psi, spec_);
    for (std::size_t k = 0; k < grid_.m; ++k) spec_[k] *= phase_[k];
    eng_.backward(spec_, psi);
    eng_.forward(phi, spec_);
    for (std::size_t k = 0; k < grid_.m; ++k) spec_[k] *= std::conj(phase_[k]);
    eng_.backward(spec_, phi);
    const double inv_m = 1.0 / static_cast<double>(grid_.m);
    for (cplx& z : psi) z *= inv_m;
    for (cplx& z : phi) z *= inv_m;
  }

  void nonlinear(cvec& psi, cvec& phi, double t) const {
    const double c = -2.0 * sign_value(p_.sign) * t;
    for (std::size_t j = 0; j < psi.size(); ++j) {
      const double a2 = std::norm(psi[j]);
      const double b2 = std::norm(phi[j]);
      psi[j] *= std::exp(cplx{0.0, c * (a2 + 2.0 * b2)});
      phi[j] *= std::exp(cplx{0.0, c * (b2 + 2.0 * a2)});
    }
  }

  void strang(cvec& psi, cvec& phi, double dt) {
    if (p_.linear_only) {
      linear(psi, phi, dt);
      return;
    }
    nonlinear(psi, phi, 0.5 * dt);
    linear(psi, phi, dt);
    nonlinear(psi, phi, 0.5 * dt);
  }

 private:
  TorusGrid grid_;
  CoupledParams p_;
  FftEngine eng_;
  std::vector<double> xi2_;
  cvec spec_;
  cvec phase_;
  double cached_dt_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace

CoupledState nls_linear_step(const CoupledState& s, double t) {
  check_grids(s);
  CoupledState out = s;
  NlsEvolver ev(s.psi.grid, CoupledParams{});
  ev.linear(out.psi.values, out.phi.values, t);
  return out;
}

CoupledState nls_nonlinear_step(const CoupledState& s, double t, Sign sign) {
  check_grids(s);
  CoupledState out = s;
  NlsEvolver ev(s.psi.grid, CoupledParams{sign, 1e-3, false});
  ev.nonlinear(out.psi.values, out.phi.values, t);
  return out;
}

CoupledState nls_strang_step(const CoupledState& s, double dt, Sign sign) {
  check_grids(s);
  CoupledState out = s;
  NlsEvolver ev(s.psi.grid, CoupledParams{sign, std::abs(dt), false});
  ev.strang(out.psi.values, out.phi.values, dt);
  return out;
}

void nls_evolve_visit(const CoupledState& s0, const CoupledParams& p,
                      const std::vector<double>& snapshot_times,
                      const std::function<void(double, const CoupledState&)>& visit) {
  check_grids(s0);
  if (!(p.dt > 0.0)) throw std::invalid_argument("nls: dt must be positive");
  if (!all_finite(s0.psi.values) || !all_finite(s0.phi.values))
    throw NumericalError("nls: non-finite initial data");

  CoupledState s = s0;
  NlsEvolver ev(s.psi.grid, p);
  const auto [mp0, mq0] = coupled_mass(s0);

  drive_snapshots(
      p.dt, snapshot_times,
      [&](double dt) { ev.strang(s.psi.values, s.phi.values, dt); },
      [&](double t) {
        if (!all_finite(s.psi.values) || !all_finite(s.phi.values))
          throw NumericalError("nls: non-finite state at t=" + std::to_string(t));
        const auto [mp, mq] = coupled_mass(s);
        if ((mp0 > 0.0 && std::abs(mp - mp0) > 1e-11 * mp0) ||
            (mq0 > 0.0 && std::abs(mq - mq0) > 1e-11 * mq0))
          throw NumericalError("nls: mass drift beyond 1e-11 at t=" + std::to_string(t));
        visit(t, s);
      });
}

CoupledSeries nls_evolve(const CoupledState& s0, const CoupledParams& p,
                         const std::vector<double>& snapshot_times) {
  CoupledSeries out;
  out.times.reserve(snapshot_times.size());
  out.states.reserve(snapshot_times.size());
  nls_evolve_visit(s0, p, snapshot_times, [&](double t, const CoupledState& s) {
    out.times.push_back(t);
    out.states.push_back(s);
  });
  return out;
}

}  // namespace continuum
}  // namespace dnls
