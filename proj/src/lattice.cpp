#include "dnls/lattice.hpp"

#include <cmath>
#include <limits>

#include "dnls/stepping.hpp"

namespace dnls {
namespace lattice {

double mass(const LatticeField& u) { return l2_norm_sq(u.values); }

double energy(const LatticeField& u, Sign sign) {
  const std::size_t m = u.grid.m;
  const double s = sign_value(sign);
  double e = 0.0;
  for (std::size_t n = 0; n < m; ++n) {
    const cplx diff = u.values[(n + 1) % m] - u.values[n];
    const double a2 = std::norm(u.values[n]);
    e += std::norm(diff) + s * a2 * a2;
  }
  return e;
}

double truncated_mass(const LatticeField& u, const spectral::CutoffSpec& cutoff) {
  SpectrumField s = spectral::dft(u);
  SpectrumField p = spectral::sharp_cutoff(s, cutoff);
  return l2_norm_sq(p.coeffs) / static_cast<double>(u.grid.m);
}

namespace {

// Dispersion relation of the discrete Laplacian: omega(theta) = 4 sin^2(theta/2).
double omega_d(double theta) {
  const double s = std::sin(0.5 * theta);
  return 4.0 * s * s;
}

// Stateful stepper owning the FFT engine and a phase table cached per dt.
class Evolver {
 public:
  Evolver(const TorusGrid& grid, const DnlsParams& p)
      : grid_(grid), p_(p), eng_(grid.m), omega_(grid.m) {
    for (std::size_t k = 0; k < grid.m; ++k) omega_[k] = omega_d(theta_node(k, grid.m));
  }

  void linear(cvec& v, double tau) {
    eng_.forward(v, spec_);
    if (tau != cached_dt_) {
      cached_dt_ = tau;
      phase_.resize(grid_.m);
      for (std::size_t k = 0; k < grid_.m; ++k)
        phase_[k] = std::exp(cplx{0.0, -omega_[k] * tau});
    }
    for (std::size_t k = 0; k < grid_.m; ++k) spec_[k] *= phase_[k];
    eng_.backward(spec_, v);
    const double inv_m = 1.0 / static_cast<double>(grid_.m);
    for (cplx& z : v) z *= inv_m;
  }

  void nonlinear(cvec& v, double tau) const {
    const double c = -2.0 * sign_value(p_.sign) * tau;
    for (cplx& z : v) z *= std::exp(cplx{0.0, c * std::norm(z)});
  }

  void strang(cvec& v, double dt) {
    if (p_.linear_only) {
      linear(v, dt);
      return;
    }
    nonlinear(v, 0.5 * dt);
    linear(v, dt);
    nonlinear(v, 0.5 * dt);
  }

 private:
  TorusGrid grid_;
  DnlsParams p_;
  FftEngine eng_;
  std::vector<double> omega_;
  cvec spec_;
  cvec phase_;
  double cached_dt_ = std::numeric_limits<double>::quiet_NaN();
};

void validate_params(const DnlsParams& p) {
  if (!(p.dt > 0.0) || p.dt > 0.5)
    throw std::invalid_argument("dnls: dt must lie in (0, 0.5]");
}

}  // namespace

LatticeField linear_propagate(const LatticeField& u, double tau) {
  LatticeField out = u;
  Evolver ev(u.grid, DnlsParams{});
  ev.linear(out.values, tau);
  return out;
}

LatticeField nonlinear_propagate(const LatticeField& u, double tau, Sign sign) {
  LatticeField out = u;
  Evolver ev(u.grid, DnlsParams{sign, 0.05, false});
  ev.nonlinear(out.values, tau);
  return out;
}

LatticeField strang_step(const LatticeField& u, double dt, Sign sign) {
  DnlsParams p{sign, std::min(std::abs(dt), 0.5), false};
  LatticeField out = u;
  Evolver ev(u.grid, p);
  ev.strang(out.values, dt);
  return out;
}

void evolve_visit(const LatticeField& u0, const DnlsParams& p,
                  const std::vector<double>& snapshot_taus,
                  const std::function<void(double, const LatticeField&)>& visit) {
  validate_params(p);
  if (!all_finite(u0.values)) throw NumericalError("dnls: non-finite initial data");

  LatticeField u = u0;
  Evolver ev(u.grid, p);
  const double m0 = mass(u0);

  drive_snapshots(
      p.dt, snapshot_taus, [&](double dt) { ev.strang(u.values, dt); },
      [&](double tau) {
        if (!all_finite(u.values))
          throw NumericalError("dnls: non-finite state at tau=" + std::to_string(tau));
        if (m0 > 0.0 && std::abs(mass(u) - m0) > 1e-11 * m0)
          throw NumericalError("dnls: mass drift beyond 1e-11 at tau=" + std::to_string(tau));
        visit(tau, u);
      });
}

SnapshotSeries evolve(const LatticeField& u0, const DnlsParams& p,
                      const std::vector<double>& snapshot_taus) {
  SnapshotSeries out;
  out.taus.reserve(snapshot_taus.size());
  out.states.reserve(snapshot_taus.size());
  evolve_visit(u0, p, snapshot_taus, [&](double tau, const LatticeField& u) {
    out.taus.push_back(tau);
    out.states.push_back(u);
  });
  return out;
}

}  // namespace lattice
}  // namespace dnls
