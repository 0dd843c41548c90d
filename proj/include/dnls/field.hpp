#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "dnls/grid.hpp"

namespace dnls {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Complex samples u_n on the lattice sites of `grid`.
struct LatticeField {
  TorusGrid grid;
  cvec values;
};

// Plain DFT coefficients u_hat(theta_k) = sum_n u_n e^{-i n theta_k}, stored in
// storage order k = 0..m-1 (signed index via signed_index()).
struct SpectrumField {
  TorusGrid grid;
  cvec coeffs;
};

// Complex samples of a continuum function on a fine grid (spacing dx = grid.h).
struct ContinuumField {
  TorusGrid grid;
  cvec values;
};

// State of the coupled limit system; psi and phi share one fine grid.
struct CoupledState {
  ContinuumField psi;
  ContinuumField phi;
};

inline double l2_norm_sq(const cvec& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return s;
}

inline double max_abs(const cvec& v) {
  double s = 0.0;
  for (const cplx& z : v) s = std::max(s, std::abs(z));
  return s;
}

inline bool all_finite(const cvec& v) {
  for (const cplx& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

// ell^2 norm of lattice values (no h weight).
inline double lattice_l2(const LatticeField& u) { return std::sqrt(l2_norm_sq(u.values)); }

// L^2 norm with the grid's quadrature weight: (dx * sum |f|^2)^(1/2).
inline double continuum_l2(const ContinuumField& f) {
  return std::sqrt(f.grid.h * l2_norm_sq(f.values));
}

}  // namespace dnls
