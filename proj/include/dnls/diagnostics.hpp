#pragma once

#include <cstdint>
#include <limits>

#include "dnls/continuum.hpp"

namespace dnls {

// Space-time norm exponents: time exponent q, space exponent p (infinity allowed).
struct NormSpec {
  double q = 2.0;
  double p = 2.0;

  // 2/q + 1/p = 1/2 within roundoff (advisory metadata only).
  bool is_schrodinger_admissible() const {
    if (!std::isfinite(q) || !std::isfinite(p)) {
      const double a = std::isfinite(q) ? 2.0 / q : 0.0;
      const double b = std::isfinite(p) ? 1.0 / p : 0.0;
      return std::abs(a + b - 0.5) < 1e-12;
    }
    return std::abs(2.0 / q + 1.0 / p - 0.5) < 1e-12;
  }
};

inline constexpr double norm_inf = std::numeric_limits<double>::infinity();

namespace diag {

// Streaming trapezoid accumulator for ( integral ||f(t)||_p^q dt )^(1/q); q or p
// may be infinite (sup). space_weight is the spatial quadrature weight (1 for
// lattice sums, dx for continuum fields). Samples must arrive in time order.
class SpacetimeAccumulator {
 public:
  SpacetimeAccumulator(const NormSpec& spec, double space_weight);

  void add(double t, const cvec& values);
  double value() const;
  std::size_t samples() const { return count_; }

  // integral of ||f||_p^q so far (running max when q is infinite); lets two
  // sweeps (e.g. forward and backward in time) be combined before the 1/q root.
  double raw() const;

 private:
  NormSpec spec_;
  double weight_;
  double integral_ = 0.0;
  double running_max_ = 0.0;
  double prev_t_ = 0.0;
  double prev_v_ = 0.0;
  std::size_t count_ = 0;

  double space_norm(const cvec& values) const;
};

// ( integral ( sum_n |u_n|^p )^(q/p) d tau )^(1/q) over uniformly spaced snapshots.
double spacetime_norm(const SnapshotSeries& series, const NormSpec& spec);

// Continuum counterpart with dx-weighted spatial quadrature.
double spacetime_norm(const std::vector<double>& times,
                      const std::vector<ContinuumField>& fields, const NormSpec& spec);

// ||u||_{L6 ell6} and ||u||_{L4 ell_inf} over a run, raw and divided by ||u(0)||_{ell2}.
struct StrichartzRecord {
  double l6l6 = 0.0;
  double l4linf = 0.0;
  double initial_l2 = 0.0;
  double ratio_l6l6 = 0.0;
  double ratio_l4linf = 0.0;
};
StrichartzRecord strichartz_report(const SnapshotSeries& series);

// Drift of the sharply truncated mass against dyadic kappa.
struct DriftCurve {
  std::vector<double> kappas;
  std::vector<double> drifts;             // max_j |M[P u(tau_j)] - M[P u(0)]|
  std::vector<unsigned char> measurable;  // drift > 100 * floor
  double floor = 0.0;                     // max_j |M[u(tau_j)] - M[u(0)]|
  double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  double mass0 = 0.0;
  double assumption_ratio = 0.0;  // ||u||_{L4 ell_inf} / h^(1/2), measured not asserted
};

// Evolves u0 to the tau horizon T/h^2 and measures, for each kappa, the maximal
// drift of the mass below the sharp cutoff lambda = kappa*h. The fitted exponent
// is a least-squares slope of log2 drift vs log2 kappa over the measurable tail
// (NaN when fewer than two points are measurable).
DriftCurve acl_drift_curve(const LatticeField& u0, double h, double T,
                           const std::vector<double>& kappas, const DnlsParams& params);

// ||P_{|xi| >= kappa} psi||^2 + ||P_{|xi| >= kappa} phi||^2 (closed condition).
double frequency_tail(const CoupledState& state, double kappa);

// integral_{|x| >= R} (|psi|^2 + |phi|^2) dx on the centered torus coordinate.
double spatial_tail(const CoupledState& state, double R);

// Product-of-free-flows experiment: random data on the shells |sin theta| in
// [K/2, K) and [L/2, L), both normalized to ||.||_{ell2} = 1; LHS is the
// L2_tau ell2_n norm of the pointwise product over [0, window], and each ratio
// is LHS / L^(-1/2). Trials are seeded deterministically from (seed, L index,
// trial index) via splitmix64.
struct BilinearResult {
  double K = 0.0;
  std::vector<double> Ls;
  std::vector<std::vector<double>> ratios;  // [L index][trial]
  std::vector<double> median_lhs;           // per L
  std::vector<double> median_ratio;
  std::vector<double> max_ratio;
  double fitted_slope = 0.0;  // log median LHS vs log L
};
BilinearResult bilinear_ratio_experiment(std::size_t m, double K,
                                         const std::vector<double>& Ls, int trials,
                                         double window, std::uint64_t seed);

// Oscillatory mixed-cubic time integrals. psi_mixed pairs (phi^h)^2 conj(psi^h)
// with the phase e^{-8 i tau}; phi_mixed pairs (psi^h)^2 conj(phi^h) with
// e^{+8 i tau} (tau = lattice time; the phase is 8 h^{-2} t in continuum time).
// Returns the L2 norm of the accumulated integral over the series' span, in
// continuum time units. remove_phase computes the non-oscillatory control.
// Snapshot spacing coarser than pi/80 in tau (20 samples per phase period) is
// rejected.
enum class MixedMode { psi_mixed, phi_mixed };
double nonresonance_integral(const SnapshotSeries& series, double h, MixedMode mode,
                             const TorusGrid& fine, bool remove_phase = false);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// splitmix64 stream mixer used for all experiment seeding.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

}  // namespace diag
}  // namespace dnls
