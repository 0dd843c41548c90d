#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace dnls {

// Periodic 1-d grid: m sites with spacing h, total length m*h.
// Frequency nodes are theta_k = 2*pi*k/m for signed k in [-m/2, m/2); the same
// struct describes a lattice (spacing h) or a fine sampling grid (spacing dx).
struct TorusGrid {
  std::size_t m = 0;
  double h = 0.0;

  double length() const { return static_cast<double>(m) * h; }

  bool operator==(const TorusGrid& o) const { return m == o.m && h == o.h; }
};

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline TorusGrid make_grid(std::size_t m, double h) {
  if (!is_power_of_two(m)) throw std::invalid_argument("grid: m must be a power of two");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid: h must be positive");
  return TorusGrid{m, h};
}

// Signed frequency index for storage slot k in [0, m): k itself below m/2, else k - m.
inline long long signed_index(std::size_t k, std::size_t m) {
  return k < m / 2 ? static_cast<long long>(k)
                   : static_cast<long long>(k) - static_cast<long long>(m);
}

// theta_k = 2*pi*k/m in [-pi, pi).
inline double theta_node(std::size_t k, std::size_t m) {
  return 2.0 * std::numbers::pi * static_cast<double>(signed_index(k, m)) /
         static_cast<double>(m);
}

// Continuum frequency xi_k = 2*pi*k/length in [-pi/h, pi/h).
inline double xi_node(std::size_t k, const TorusGrid& g) {
  return 2.0 * std::numbers::pi * static_cast<double>(signed_index(k, g.m)) / g.length();
}

// Torus coordinate of site j, centered: x in [-length/2, length/2).
inline double centered_coord(std::size_t j, const TorusGrid& g) {
  double x = static_cast<double>(j) * g.h;
  if (j >= g.m / 2) x -= g.length();
  return x;
}

}  // namespace dnls
