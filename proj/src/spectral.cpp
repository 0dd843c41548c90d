#include "dnls/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dnls {
namespace spectral {

using std::numbers::pi;

SpectrumField dft(const LatticeField& u, FftEngine& eng) {
  SpectrumField s{u.grid, {}};
  eng.forward(u.values, s.coeffs);
  return s;
}

SpectrumField dft(const LatticeField& u) {
  FftEngine eng(u.grid.m);
  return dft(u, eng);
}

LatticeField idft(const SpectrumField& s, FftEngine& eng) {
  LatticeField u{s.grid, {}};
  eng.backward(s.coeffs, u.values);
  const double inv_m = 1.0 / static_cast<double>(s.grid.m);
  for (cplx& z : u.values) z *= inv_m;
  return u;
}

LatticeField idft(const SpectrumField& s) {
  FftEngine eng(s.grid.m);
  return idft(s, eng);
}

cvec continuum_spectrum(const ContinuumField& f, FftEngine& eng) {
  cvec fhat;
  eng.forward(f.values, fhat);
  for (cplx& z : fhat) z *= f.grid.h;
  return fhat;
}

cvec continuum_spectrum(const ContinuumField& f) {
  FftEngine eng(f.grid.m);
  return continuum_spectrum(f, eng);
}

ContinuumField continuum_synthesis(const cvec& fhat, const TorusGrid& grid, FftEngine& eng) {
  if (fhat.size() != grid.m) throw std::invalid_argument("synthesis: size mismatch");
  ContinuumField f{grid, {}};
  eng.backward(fhat, f.values);
  const double inv_len = 1.0 / grid.length();
  for (cplx& z : f.values) z *= inv_len;
  return f;
}

ContinuumField continuum_synthesis(const cvec& fhat, const TorusGrid& grid) {
  FftEngine eng(grid.m);
  return continuum_synthesis(fhat, grid, eng);
}

double spectrum_l2(const cvec& fhat, const TorusGrid& grid) {
  return std::sqrt(l2_norm_sq(fhat) / grid.length());
}

double lowpass_weight(double abs_xi, double n_cut) {
  if (abs_xi <= n_cut) return 1.0;
  if (abs_xi >= 2.0 * n_cut) return 0.0;
  const double c = std::cos(0.5 * pi * (abs_xi / n_cut - 1.0));
  return c * c;
}

ContinuumField smooth_lowpass(const ContinuumField& f, double n_cut) {
  if (!(n_cut > 0.0)) throw std::invalid_argument("smooth_lowpass: n_cut must be positive");
  FftEngine eng(f.grid.m);
  cvec fhat = continuum_spectrum(f, eng);
  for (std::size_t k = 0; k < fhat.size(); ++k)
    fhat[k] *= lowpass_weight(std::abs(xi_node(k, f.grid)), n_cut);
  return continuum_synthesis(fhat, f.grid, eng);
}

SpectrumField sharp_cutoff(const SpectrumField& s, const CutoffSpec& spec,
                           bool keep_outside) {
  if (!(spec.lambda > 0.0)) throw std::invalid_argument("sharp_cutoff: lambda must be positive");
  SpectrumField out{s.grid, s.coeffs};
  for (std::size_t k = 0; k < out.coeffs.size(); ++k) {
    // lambda >= 1 is the identity: |sin| never reaches it, grid nodes at
    // theta = +-pi/2 included.
    const bool inside =
        spec.lambda >= 1.0 || std::abs(std::sin(theta_node(k, s.grid.m))) < spec.lambda;
    if (inside == keep_outside) out.coeffs[k] = 0.0;
  }
  return out;
}

namespace {

// Fold a continuum-normalized fine spectrum onto lattice frequency slots mod m.
// Fine node j carries theta = 2*pi*j/length * h = 2*pi*j/m, so it lands on
// lattice slot j mod m.
cvec fold_spectrum(const cvec& fhat, std::size_t m_fine, std::size_t m) {
  cvec folded(m, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < m_fine; ++k) {
    const long long j = signed_index(k, m_fine);
    const long long r = ((j % static_cast<long long>(m)) + static_cast<long long>(m)) %
                        static_cast<long long>(m);
    folded[static_cast<std::size_t>(r)] += fhat[k];
  }
  return folded;
}

}  // namespace

cvec sample_to_lattice(const ContinuumField& f, std::size_t m) {
  if (!is_power_of_two(m)) throw std::invalid_argument("sample_to_lattice: m not a power of two");
  FftEngine fine(f.grid.m);
  cvec fhat = continuum_spectrum(f, fine);
  cvec folded = fold_spectrum(fhat, f.grid.m, m);
  // values at h*n: (1/length) * backward transform of the folded coefficients
  FftEngine coarse(m);
  cvec vals;
  coarse.backward(folded, vals);
  const double inv_len = 1.0 / f.grid.length();
  for (cplx& z : vals) z *= inv_len;
  return vals;
}

LatticeField sample_initial_data(const ContinuumField& psi0, const ContinuumField& phi0,
                                 const SamplingSpec& spec) {
  if (!(psi0.grid == phi0.grid))
    throw std::invalid_argument("sample_initial_data: profiles on different grids");
  if (!(spec.h > 0.0) || spec.h >= spec.h0)
    throw std::invalid_argument("sample_initial_data: need 0 < h < h0");
  if (!(spec.gamma > 0.0) || !(spec.gamma < 1.0))
    throw std::invalid_argument("sample_initial_data: gamma outside (0,1)");

  const double len = psi0.grid.length();
  const double m_real = len / spec.h;
  const auto m = static_cast<std::size_t>(std::llround(m_real));
  if (std::abs(m_real - static_cast<double>(m)) > 1e-9 * m_real || !is_power_of_two(m))
    throw std::invalid_argument("sample_initial_data: length/h is not a power-of-two site count");

  const double n_cut = spec.n_cut();
  if (spec.h * 2.0 * n_cut >= 0.5 * pi)
    throw std::invalid_argument("sample_initial_data: data band reaches pi/2");
  // The fine grid must resolve the multiplier's full support |xi| < 2*n_cut.
  const double fine_nyquist = pi / psi0.grid.h;
  if (2.0 * n_cut > fine_nyquist)
    throw NumericalError("sample_initial_data: fine grid aliases the 2*n_cut band");

  FftEngine fine(psi0.grid.m);
  cvec psi_hat = continuum_spectrum(psi0, fine);
  cvec phi_hat = continuum_spectrum(phi0, fine);
  for (std::size_t k = 0; k < psi0.grid.m; ++k) {
    const double w = lowpass_weight(std::abs(xi_node(k, psi0.grid)), n_cut);
    psi_hat[k] *= w;
    phi_hat[k] *= w;
  }

  cvec low = fold_spectrum(psi_hat, psi0.grid.m, m);
  cvec high = fold_spectrum(phi_hat, phi0.grid.m, m);

  // u_hat(theta_k) = psi0_hat(theta_k/h) + phi0_hat((theta_k - pi)/h): the h factor of
  // the sampling and the 1/h of the lattice transform cancel, and (-1)^n shifts the
  // second component by half the spectrum.
  SpectrumField uhat{make_grid(m, len / static_cast<double>(m)), cvec(m)};
  const std::size_t half = m / 2;
  for (std::size_t k = 0; k < m; ++k) uhat.coeffs[k] = low[k] + high[(k + half) % m];
  return idft(uhat);
}

ContinuumField reconstruct(const LatticeField& u, double tau, Component c,
                           const TorusGrid& fine) {
  const std::size_t m = u.grid.m;
  if (std::abs(fine.length() - u.grid.length()) > 1e-9 * fine.length())
    throw std::invalid_argument("reconstruct: fine grid length mismatch");
  if (fine.m <= m / 2) throw std::invalid_argument("reconstruct: fine grid too coarse");

  SpectrumField uhat = dft(u);
  cvec fhat(fine.m, cplx{0.0, 0.0});
  const cplx phase = (c == Component::high)
                         ? std::exp(cplx{0.0, 4.0 * tau})
                         : cplx{1.0, 0.0};
  // Fine node j matches lattice node j (theta_j = 2*pi*j/m); keep |theta| < pi/2
  // strictly, i.e. signed |j| < m/4. The high component reads the half-shifted slot.
  const long long quarter = static_cast<long long>(m) / 4;
  for (long long j = -quarter + 1; j < quarter; ++j) {
    const std::size_t fine_slot =
        static_cast<std::size_t>((j + static_cast<long long>(fine.m)) %
                                 static_cast<long long>(fine.m));
    std::size_t lat_slot =
        static_cast<std::size_t>((j + static_cast<long long>(m)) % static_cast<long long>(m));
    if (c == Component::high) lat_slot = (lat_slot + m / 2) % m;
    fhat[fine_slot] = phase * uhat.coeffs[lat_slot];
  }
  return continuum_synthesis(fhat, fine);
}

CoupledState reconstruct_pair(const LatticeField& u, double tau, const TorusGrid& fine,
                              FftEngine& lattice_eng, FftEngine& fine_eng) {
  const std::size_t m = u.grid.m;
  if (fine.m <= m / 2) throw std::invalid_argument("reconstruct: fine grid too coarse");
  SpectrumField uhat = dft(u, lattice_eng);
  cvec low(fine.m, cplx{0.0, 0.0}), high(fine.m, cplx{0.0, 0.0});
  const cplx phase = std::exp(cplx{0.0, 4.0 * tau});
  const long long quarter = static_cast<long long>(m) / 4;
  for (long long j = -quarter + 1; j < quarter; ++j) {
    const std::size_t fine_slot =
        static_cast<std::size_t>((j + static_cast<long long>(fine.m)) %
                                 static_cast<long long>(fine.m));
    const std::size_t lat_slot =
        static_cast<std::size_t>((j + static_cast<long long>(m)) % static_cast<long long>(m));
    low[fine_slot] = uhat.coeffs[lat_slot];
    high[fine_slot] = phase * uhat.coeffs[(lat_slot + m / 2) % m];
  }
  return CoupledState{continuum_synthesis(low, fine, fine_eng),
                      continuum_synthesis(high, fine, fine_eng)};
}

LatticeField invert_reconstruction(const ContinuumField& psi, const ContinuumField& phi,
                                   double tau, std::size_t m) {
  if (!(psi.grid == phi.grid))
    throw std::invalid_argument("invert_reconstruction: grids differ");
  cvec psi_s = sample_to_lattice(psi, m);
  cvec phi_s = sample_to_lattice(phi, m);
  const double h = psi.grid.length() / static_cast<double>(m);
  const cplx rot = std::exp(cplx{0.0, -4.0 * tau});
  LatticeField u{make_grid(m, h), cvec(m)};
  for (std::size_t n = 0; n < m; ++n) {
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    u.values[n] = h * psi_s[n] + rot * sgn * h * phi_s[n];
  }
  return u;
}

}  // namespace spectral
}  // namespace dnls
