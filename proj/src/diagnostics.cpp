#include "dnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace dnls {
namespace diag {

using std::numbers::pi;

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need at least two points");
  const double n = static_cast<double>(x.size());
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - xm) * (y[i] - ym);
    den += (x[i] - xm) * (x[i] - xm);
  }
  if (den == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissae");
  return num / den;
}

namespace {

std::uint64_t sm64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Portable complex standard normals: Box-Muller over mt19937_64 bits
// (std::normal_distribution's algorithm is implementation-defined).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  cplx next_complex() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2)};
  }

 private:
  std::mt19937_64 gen_;

  double uniform01() {
    // (0,1]: avoids log(0)
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
  }
};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return sm64(seed + 0x9E3779B97F4A7C15ull * (a + 1) + 0xC2B2AE3D27D4EB4Full * (b + 1));
}

SpacetimeAccumulator::SpacetimeAccumulator(const NormSpec& spec, double space_weight)
    : spec_(spec), weight_(space_weight) {
  if (!(spec.p >= 1.0) || !(spec.q >= 1.0))
    throw std::invalid_argument("spacetime_norm: exponents must be >= 1");
}

double SpacetimeAccumulator::space_norm(const cvec& values) const {
  if (!std::isfinite(spec_.p)) return max_abs(values);
  double s = 0.0;
  for (const cplx& z : values) s += std::pow(std::abs(z), spec_.p);
  return std::pow(weight_ * s, 1.0 / spec_.p);
}

void SpacetimeAccumulator::add(double t, const cvec& values) {
  const double v = space_norm(values);
  if (!std::isfinite(spec_.q)) {
    running_max_ = std::max(running_max_, v);
  } else {
    const double vq = std::pow(v, spec_.q);
    if (count_ > 0) integral_ += 0.5 * (prev_v_ + vq) * std::abs(t - prev_t_);
    prev_v_ = vq;
    prev_t_ = t;
  }
  ++count_;
}

double SpacetimeAccumulator::value() const {
  if (!std::isfinite(spec_.q)) return running_max_;
  return std::pow(integral_, 1.0 / spec_.q);
}

double SpacetimeAccumulator::raw() const {
  return std::isfinite(spec_.q) ? integral_ : running_max_;
}

namespace {

void check_uniform_spacing(const std::vector<double>& t) {
  for (std::size_t j = 2; j < t.size(); ++j) {
    const double d0 = t[1] - t[0];
    const double dj = t[j] - t[j - 1];
    if (std::abs(dj - d0) > 1e-9 * std::max(1.0, std::abs(d0)))
      throw std::invalid_argument("spacetime_norm: snapshots not uniformly spaced");
  }
}

}  // namespace

double spacetime_norm(const SnapshotSeries& series, const NormSpec& spec) {
  if (series.taus.empty()) throw std::invalid_argument("spacetime_norm: empty series");
  check_uniform_spacing(series.taus);
  SpacetimeAccumulator acc(spec, 1.0);
  for (std::size_t j = 0; j < series.taus.size(); ++j)
    acc.add(series.taus[j], series.states[j].values);
  return acc.value();
}

double spacetime_norm(const std::vector<double>& times,
                      const std::vector<ContinuumField>& fields, const NormSpec& spec) {
  if (times.empty() || times.size() != fields.size())
    throw std::invalid_argument("spacetime_norm: empty or mismatched series");
  check_uniform_spacing(times);
  SpacetimeAccumulator acc(spec, fields[0].grid.h);
  for (std::size_t j = 0; j < times.size(); ++j) acc.add(times[j], fields[j].values);
  return acc.value();
}

StrichartzRecord strichartz_report(const SnapshotSeries& series) {
  if (series.taus.empty()) throw std::invalid_argument("strichartz_report: empty series");
  StrichartzRecord rec;
  rec.l6l6 = spacetime_norm(series, NormSpec{6.0, 6.0});
  rec.l4linf = spacetime_norm(series, NormSpec{4.0, norm_inf});
  rec.initial_l2 = lattice_l2(series.states[0]);
  if (rec.initial_l2 == 0.0)
    throw std::invalid_argument("strichartz_report: zero initial data");
  rec.ratio_l6l6 = rec.l6l6 / rec.initial_l2;
  rec.ratio_l4linf = rec.l4linf / rec.initial_l2;
  return rec;
}

DriftCurve acl_drift_curve(const LatticeField& u0, double h, double T,
                           const std::vector<double>& kappas, const DnlsParams& params) {
  if (!(h > 0.0) || !(T > 0.0)) throw std::invalid_argument("acl: need h > 0 and T > 0");
  if (kappas.empty()) throw std::invalid_argument("acl: empty kappa list");
  const std::size_t m = u0.grid.m;

  // one evolve serves every kappa; snapshots dense enough for the L4 ell_inf
  // accumulation (beat rate <= 4 in tau, >= 20 samples per period)
  const double horizon = T / (h * h);
  const auto nsteps = static_cast<std::size_t>(std::ceil(horizon / (pi / 40.0)));
  std::vector<double> taus(nsteps + 1);
  for (std::size_t j = 0; j <= nsteps; ++j)
    taus[j] = horizon * static_cast<double>(j) / static_cast<double>(nsteps);

  // mode masks per kappa: inside means |sin theta| < lambda with lambda = kappa*h
  // (lambda >= 1 keeps every mode)
  std::vector<std::vector<unsigned char>> inside(kappas.size(),
                                                 std::vector<unsigned char>(m));
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (!(kappas[i] > 0.0)) throw std::invalid_argument("acl: kappas must be positive");
    const double lambda = kappas[i] * h;
    for (std::size_t k = 0; k < m; ++k)
      inside[i][k] =
          (lambda >= 1.0 || std::abs(std::sin(theta_node(k, m))) < lambda) ? 1 : 0;
  }

  FftEngine eng(m);
  cvec spec;
  std::vector<double> mass0_cut(kappas.size(), 0.0);
  DriftCurve out;
  out.kappas = kappas;
  out.drifts.assign(kappas.size(), 0.0);
  double total0 = 0.0;
  SpacetimeAccumulator l4inf(NormSpec{4.0, norm_inf}, 1.0);
  bool first = true;

  lattice::evolve_visit(u0, params, taus, [&](double tau, const LatticeField& u) {
    eng.forward(u.values, spec);
    const double inv_m = 1.0 / static_cast<double>(m);
    double total = 0.0;
    std::vector<double> cut(kappas.size(), 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      const double p = std::norm(spec[k]) * inv_m;
      total += p;
      for (std::size_t i = 0; i < kappas.size(); ++i)
        if (inside[i][k]) cut[i] += p;
    }
    if (first) {
      total0 = total;
      mass0_cut = cut;
      first = false;
    }
    out.floor = std::max(out.floor, std::abs(total - total0));
    for (std::size_t i = 0; i < kappas.size(); ++i)
      out.drifts[i] = std::max(out.drifts[i], std::abs(cut[i] - mass0_cut[i]));
    l4inf.add(tau, u.values);
  });

  out.mass0 = lattice::mass(u0);
  out.assumption_ratio = l4inf.value() / std::sqrt(h);
  const double floor_eff =
      std::max(out.floor, std::numeric_limits<double>::epsilon() * out.mass0);
  out.measurable.assign(kappas.size(), 0);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (out.drifts[i] > 100.0 * floor_eff) {
      out.measurable[i] = 1;
      lx.push_back(std::log2(kappas[i]));
      ly.push_back(std::log2(out.drifts[i]));
    }
  }
  if (lx.size() >= 2) out.fitted_exponent = fit_slope(lx, ly);
  return out;
}

double frequency_tail(const CoupledState& state, double kappa) {
  if (!(state.psi.grid == state.phi.grid))
    throw std::invalid_argument("frequency_tail: grids differ");
  const TorusGrid& g = state.psi.grid;
  FftEngine eng(g.m);
  cvec psi_hat = spectral::continuum_spectrum(state.psi, eng);
  cvec phi_hat = spectral::continuum_spectrum(state.phi, eng);
  double s = 0.0;
  for (std::size_t k = 0; k < g.m; ++k)
    if (std::abs(xi_node(k, g)) >= kappa) s += std::norm(psi_hat[k]) + std::norm(phi_hat[k]);
  return s / g.length();
}

double spatial_tail(const CoupledState& state, double R) {
  if (!(state.psi.grid == state.phi.grid))
    throw std::invalid_argument("spatial_tail: grids differ");
  const TorusGrid& g = state.psi.grid;
  if (!(R >= 0.0) || R >= 0.5 * g.length())
    throw std::invalid_argument("spatial_tail: R outside [0, length/2)");
  double s = 0.0;
  for (std::size_t j = 0; j < g.m; ++j)
    if (std::abs(centered_coord(j, g)) >= R)
      s += std::norm(state.psi.values[j]) + std::norm(state.phi.values[j]);
  return g.h * s;
}

BilinearResult bilinear_ratio_experiment(std::size_t m, double K,
                                         const std::vector<double>& Ls, int trials,
                                         double window, std::uint64_t seed) {
  if (!is_power_of_two(m)) throw std::invalid_argument("bilinear: m not a power of two");
  if (!(K > 0.0)) throw std::invalid_argument("bilinear: K must be positive");
  if (Ls.empty() || trials < 1 || !(window > 0.0))
    throw std::invalid_argument("bilinear: empty sweep, no trials, or empty window");
  for (double L : Ls)
    if (!(K < 0.5 * L))
      throw std::invalid_argument("bilinear: frequency separation requires K < L/2");

  // shell index sets: |sin theta_k| in [lo, hi)
  auto shell = [&](double lo, double hi) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < m; ++k) {
      const double s = std::abs(std::sin(theta_node(k, m)));
      if (s >= lo && s < hi) idx.push_back(k);
    }
    return idx;
  };
  const std::vector<std::size_t> shell_a = shell(0.5 * K, K);
  if (shell_a.empty()) throw std::invalid_argument("bilinear: K shell empty on this grid");

  const auto nsteps = static_cast<std::size_t>(std::ceil(window / (pi / 40.0)));
  const double dtau = window / static_cast<double>(nsteps);

  std::vector<double> omega(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double s = std::sin(0.5 * theta_node(k, m));
    omega[k] = 4.0 * s * s;
  }
  cvec step_phase(m);
  for (std::size_t k = 0; k < m; ++k) step_phase[k] = std::exp(cplx{0.0, -omega[k] * dtau});

  FftEngine eng(m);
  const double inv_m = 1.0 / static_cast<double>(m);

  BilinearResult res;
  res.K = K;
  res.Ls = Ls;
  res.ratios.resize(Ls.size());

  cvec ahat(m), bhat(m), av, bv;
  for (std::size_t li = 0; li < Ls.size(); ++li) {
    const double L = Ls[li];
    const std::vector<std::size_t> shell_b = shell(0.5 * L, L);
    if (shell_b.empty()) throw std::invalid_argument("bilinear: L shell empty on this grid");

    for (int trial = 0; trial < trials; ++trial) {
      GaussianStream rng(mix_seed(seed, li, static_cast<std::uint64_t>(trial)));
      std::fill(ahat.begin(), ahat.end(), cplx{0.0, 0.0});
      std::fill(bhat.begin(), bhat.end(), cplx{0.0, 0.0});
      double na = 0.0, nb = 0.0;
      for (std::size_t k : shell_a) {
        ahat[k] = rng.next_complex();
        na += std::norm(ahat[k]);
      }
      for (std::size_t k : shell_b) {
        bhat[k] = rng.next_complex();
        nb += std::norm(bhat[k]);
      }
      // ||a||_{ell2}^2 = (1/m) sum |ahat|^2 = 1
      const double sa = std::sqrt(static_cast<double>(m) / na);
      const double sb = std::sqrt(static_cast<double>(m) / nb);
      for (std::size_t k : shell_a) ahat[k] *= sa;
      for (std::size_t k : shell_b) bhat[k] *= sb;

      double integral = 0.0;
      for (std::size_t j = 0; j <= nsteps; ++j) {
        eng.backward(ahat, av);
        eng.backward(bhat, bv);
        double g = 0.0;
        for (std::size_t n = 0; n < m; ++n)
          g += std::norm(av[n]) * std::norm(bv[n]);
        g *= inv_m * inv_m * inv_m * inv_m;
        const double w = (j == 0 || j == nsteps) ? 0.5 : 1.0;
        integral += w * g * dtau;
        if (j < nsteps) {
          for (std::size_t k : shell_a) ahat[k] *= step_phase[k];
          for (std::size_t k : shell_b) bhat[k] *= step_phase[k];
        }
      }
      const double lhs = std::sqrt(integral);
      res.ratios[li].push_back(lhs * std::sqrt(L));
    }
  }

  std::vector<double> lx, ly;
  for (std::size_t li = 0; li < Ls.size(); ++li) {
    std::vector<double> lhs_vals;
    for (double r : res.ratios[li]) lhs_vals.push_back(r / std::sqrt(Ls[li]));
    res.median_lhs.push_back(median_of(lhs_vals));
    res.median_ratio.push_back(median_of(res.ratios[li]));
    res.max_ratio.push_back(*std::max_element(res.ratios[li].begin(), res.ratios[li].end()));
    lx.push_back(std::log(Ls[li]));
    ly.push_back(std::log(res.median_lhs.back()));
  }
  res.fitted_slope = Ls.size() >= 2 ? fit_slope(lx, ly)
                                    : std::numeric_limits<double>::quiet_NaN();
  return res;
}

double nonresonance_integral(const SnapshotSeries& series, double h, MixedMode mode,
                             const TorusGrid& fine, bool remove_phase) {
  if (series.taus.size() < 2)
    throw std::invalid_argument("nonresonance: need at least two snapshots");
  if (!(h > 0.0)) throw std::invalid_argument("nonresonance: h must be positive");
  for (std::size_t j = 1; j < series.taus.size(); ++j) {
    const double dtau = std::abs(series.taus[j] - series.taus[j - 1]);
    if (dtau > (pi / 80.0) * (1.0 + 1e-9))
      throw NumericalError(
          "nonresonance: snapshot spacing too coarse for the 8 h^-2 phase; "
          "need d_tau <= pi/80");
  }

  FftEngine lat_eng(series.states[0].grid.m);
  FftEngine fine_eng(fine.m);
  const double phase_sign = (mode == MixedMode::psi_mixed) ? -8.0 : 8.0;

  cvec integral(fine.m, cplx{0.0, 0.0});
  cvec prev(fine.m), cur(fine.m);
  double prev_t = 0.0;
  for (std::size_t j = 0; j < series.taus.size(); ++j) {
    const double tau = series.taus[j];
    CoupledState rec = spectral::reconstruct_pair(series.states[j], tau, fine, lat_eng,
                                                  fine_eng);
    const cplx osc =
        remove_phase ? cplx{1.0, 0.0} : std::exp(cplx{0.0, phase_sign * tau});
    for (std::size_t i = 0; i < fine.m; ++i) {
      const cplx p = rec.psi.values[i];
      const cplx q = rec.phi.values[i];
      cur[i] = osc * (mode == MixedMode::psi_mixed ? q * q * std::conj(p)
                                                   : p * p * std::conj(q));
    }
    const double t = h * h * tau;
    if (j > 0) {
      const double w = 0.5 * std::abs(t - prev_t);
      for (std::size_t i = 0; i < fine.m; ++i) integral[i] += w * (prev[i] + cur[i]);
    }
    prev.swap(cur);
    prev_t = t;
  }
  return std::sqrt(fine.h * l2_norm_sq(integral));
}

}  // namespace diag
}  // namespace dnls
