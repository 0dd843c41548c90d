#pragma once

#include "dnls/fft.hpp"
#include "dnls/field.hpp"

namespace dnls {

// Errors that abort a computation because the numbers cannot be trusted
// (NaN/Inf, under-resolved reference, aliasing).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace spectral {

// Forward transform: coeffs_k = sum_n values_n e^{-i n theta_k}.
SpectrumField dft(const LatticeField& u);
SpectrumField dft(const LatticeField& u, FftEngine& eng);

// Inverse transform: values_n = (1/m) sum_k coeffs_k e^{+i n theta_k}.
LatticeField idft(const SpectrumField& s);
LatticeField idft(const SpectrumField& s, FftEngine& eng);

// Continuum-normalized spectrum on the field's own grid:
// f_hat(xi_k) = dx * sum_j f(x_j) e^{-i x_j xi_k}, stored like SpectrumField.
cvec continuum_spectrum(const ContinuumField& f, FftEngine& eng);
cvec continuum_spectrum(const ContinuumField& f);

// Inverse of continuum_spectrum: f(x_j) = (1/length) sum_k f_hat(xi_k) e^{+i x_j xi_k}.
ContinuumField continuum_synthesis(const cvec& fhat, const TorusGrid& grid, FftEngine& eng);
ContinuumField continuum_synthesis(const cvec& fhat, const TorusGrid& grid);

// L^2 norm computed from a continuum-normalized spectrum: (sum |f_hat|^2 / length)^(1/2).
double spectrum_l2(const cvec& fhat, const TorusGrid& grid);

// Smooth frequency truncation: multiplier 1 for |xi| <= n_cut, 0 for |xi| >= 2*n_cut,
// cos^2(pi*(|xi|/n_cut - 1)/2) in between.
double lowpass_weight(double abs_xi, double n_cut);
ContinuumField smooth_lowpass(const ContinuumField& f, double n_cut);

// Sharp lattice frequency cutoff P_{<lambda}: keep modes with |sin theta_k| < lambda
// (strict), which selects a neighborhood of theta = 0 and one of theta = pi.
// lambda >= 1 keeps everything. keep_outside selects the complementary projection.
struct CutoffSpec {
  double lambda = 0.0;
};
SpectrumField sharp_cutoff(const SpectrumField& s, const CutoffSpec& spec,
                           bool keep_outside = false);

// Low/high halves of the reconstruction band.
enum class Component { low, high };

// Sampling of two continuum profiles onto a lattice of spacing h:
//   u_n(0) = h * [P psi0](h n) + (-1)^n h * [P phi0](h n),
// with P = smooth_lowpass at n_cut = h^(gamma-1)/2. Band/aliasing admissibility is
// checked; the profiles must share one fine grid whose length is divisible by h
// into a power-of-two site count below h0 admissibility (h < h0).
struct SamplingSpec {
  double h = 0.0;
  double gamma = 0.5;
  double h0 = 0.25;

  double n_cut() const { return 0.5 * std::pow(h, gamma - 1.0); }
};
LatticeField sample_initial_data(const ContinuumField& psi0, const ContinuumField& phi0,
                                 const SamplingSpec& spec);

// Exact band-limited evaluation of a fine-grid function at the lattice points h*n,
// h = length/m: folds the fine spectrum mod m. Exact when f is banded below pi/h;
// otherwise the folding reproduces genuine sampling aliasing.
cvec sample_to_lattice(const ContinuumField& f, std::size_t m);

// Low/high continuum envelope of a lattice state at lattice time tau:
//   low:  f_hat(xi) = u_hat(h*xi) restricted to |h*xi| < pi/2,
//   high: f_hat(xi) = e^{+4 i tau} u_hat(h*xi + pi) restricted to |h*xi| < pi/2,
// synthesized on the fine grid `fine` (same torus length; fine.m > m/2 required).
ContinuumField reconstruct(const LatticeField& u, double tau, Component c,
                           const TorusGrid& fine);

// Inverse of the pair of envelopes: u_n = h*psi(h n) + e^{-4 i tau} (-1)^n h*phi(h n).
LatticeField invert_reconstruction(const ContinuumField& psi, const ContinuumField& phi,
                                   double tau, std::size_t m);

// Both envelopes at once with caller-owned engines (one lattice transform instead
// of two); for loops over many snapshots.
CoupledState reconstruct_pair(const LatticeField& u, double tau, const TorusGrid& fine,
                              FftEngine& lattice_eng, FftEngine& fine_eng);

}  // namespace spectral
}  // namespace dnls
