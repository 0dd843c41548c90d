#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <numbers>

#include "dnls/diagnostics.hpp"
#include "dnls/lattice.hpp"
#include "dnls/spectral.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace dnls;
using std::numbers::pi;

namespace {

LatticeField const_mod_field(std::size_t m, double A) {
  LatticeField u{make_grid(m, 1.0), cvec(m)};
  for (std::size_t n = 0; n < m; ++n) {
    const double ang = 0.3 * static_cast<double>(n);
    u.values[n] = A * cplx{std::cos(ang), std::sin(ang)};
  }
  return u;
}

}  // namespace

TEST_CASE("admissibility bookkeeping") {
  CHECK(NormSpec{6.0, 6.0}.is_schrodinger_admissible());
  CHECK(NormSpec{4.0, norm_inf}.is_schrodinger_admissible());
  CHECK(NormSpec{norm_inf, 2.0}.is_schrodinger_admissible());
  CHECK_FALSE(NormSpec{2.0, 2.0}.is_schrodinger_admissible());
  CHECK_FALSE(NormSpec{6.0, 4.0}.is_schrodinger_admissible());
}

TEST_CASE("accumulator reproduces closed forms on constant-modulus samples") {
  const std::size_t m = 64;
  const double A = 0.7, tw = 2.0;
  const int N = 41;

  diag::SpacetimeAccumulator l66(NormSpec{6.0, 6.0}, 1.0);
  diag::SpacetimeAccumulator l4i(NormSpec{4.0, norm_inf}, 1.0);
  for (int j = 0; j < N; ++j) {
    const LatticeField u = const_mod_field(m, A);
    const double t = tw * j / (N - 1);
    l66.add(t, u.values);
    l4i.add(t, u.values);
  }
  CHECK(l66.value() ==
        doctest::Approx(A * std::pow(static_cast<double>(m) * tw, 1.0 / 6.0)).epsilon(1e-13));
  CHECK(l4i.value() == doctest::Approx(A * std::pow(tw, 0.25)).epsilon(1e-13));
  CHECK(l66.samples() == static_cast<std::size_t>(N));
}

TEST_CASE("accumulator sup-in-time and sup-in-space modes") {
  diag::SpacetimeAccumulator sup2(NormSpec{norm_inf, 2.0}, 1.0);
  diag::SpacetimeAccumulator supsup(NormSpec{norm_inf, norm_inf}, 1.0);
  const std::size_t m = 16;
  for (const double amp : {1.0, 3.0, 2.0}) {
    cvec v(m, cplx{amp, 0.0});
    sup2.add(amp, v);  // times 1, 3, 2 are not ordered; sup modes ignore spacing
    supsup.add(amp, v);
  }
  CHECK(sup2.value() == doctest::Approx(3.0 * std::sqrt(16.0)).epsilon(1e-14));
  CHECK(supsup.value() == 3.0);
}

TEST_CASE("accumulator is direction agnostic") {
  const std::size_t m = 32;
  diag::SpacetimeAccumulator fwd(NormSpec{6.0, 6.0}, 1.0);
  diag::SpacetimeAccumulator bwd(NormSpec{6.0, 6.0}, 1.0);
  for (int j = 0; j <= 10; ++j) {
    const double amp = 1.0 + 0.1 * j;
    cvec v(m, cplx{amp, 0.0});
    fwd.add(0.2 * j, v);
    bwd.add(-0.2 * j, v);
  }
  CHECK(fwd.value() == doctest::Approx(bwd.value()).epsilon(1e-14));
  CHECK(std::pow(fwd.raw() + bwd.raw(), 1.0 / 6.0) ==
        doctest::Approx(std::pow(2.0, 1.0 / 6.0) * fwd.value()).epsilon(1e-13));
}

TEST_CASE("spacetime_norm matches a direct trapezoid computation") {
  const std::size_t m = 16;
  const int N = 6;
  SnapshotSeries series;
  for (int j = 0; j < N; ++j) {
    series.taus.push_back(0.5 * j);
    series.states.push_back(LatticeField{make_grid(m, 1.0),
                                         oracles::random_cvec(m, 100 + j)});
  }
  const NormSpec spec{4.0, 6.0};
  double direct = 0.0;
  std::vector<double> g(N);
  for (int j = 0; j < N; ++j) {
    double s = 0.0;
    for (const cplx& z : series.states[j].values) s += std::pow(std::abs(z), 6.0);
    g[j] = std::pow(std::pow(s, 1.0 / 6.0), 4.0);
  }
  for (int j = 0; j + 1 < N; ++j) direct += 0.25 * (g[j] + g[j + 1]);
  CHECK(diag::spacetime_norm(series, spec) ==
        doctest::Approx(std::pow(direct, 0.25)).epsilon(1e-12));

  series.taus[2] = 1.31;
  CHECK_THROWS_AS(diag::spacetime_norm(series, spec), std::invalid_argument);
}

TEST_CASE("norms are homogeneous and p-monotone") {
  const std::size_t m = 32;
  SnapshotSeries series;
  for (int j = 0; j < 4; ++j) {
    series.taus.push_back(static_cast<double>(j));
    series.states.push_back(LatticeField{make_grid(m, 1.0),
                                         oracles::random_cvec(m, 7 * j + 1)});
  }
  SnapshotSeries scaled = series;
  for (auto& st : scaled.states)
    for (cplx& z : st.values) z *= 2.5;

  for (const NormSpec spec : {NormSpec{6.0, 6.0}, NormSpec{4.0, norm_inf}}) {
    const double base = diag::spacetime_norm(series, spec);
    CHECK(diag::spacetime_norm(scaled, spec) == doctest::Approx(2.5 * base).epsilon(1e-12));
  }

  // ||.||_p is non-increasing in p at fixed q
  const double p2 = diag::spacetime_norm(series, NormSpec{2.0, 2.0});
  const double p4 = diag::spacetime_norm(series, NormSpec{2.0, 4.0});
  const double p6 = diag::spacetime_norm(series, NormSpec{2.0, 6.0});
  const double pi_ = diag::spacetime_norm(series, NormSpec{2.0, norm_inf});
  CHECK(p2 >= p4);
  CHECK(p4 >= p6);
  CHECK(p6 >= pi_);
}

TEST_CASE("linear flow leaves every truncated mass exactly flat") {
  const double h = 0.2;
  const std::size_t m = 128;
  LatticeField u0{make_grid(m, h), oracles::random_cvec(m, 55)};
  const DnlsParams p{Sign::defocusing, 0.05, true};
  const diag::DriftCurve curve = diag::acl_drift_curve(u0, h, 0.04, {1.0, 2.0, 4.0}, p);
  CHECK(curve.kappas == std::vector<double>{1.0, 2.0, 4.0});
  for (std::size_t i = 0; i < curve.drifts.size(); ++i) {
    CHECK(curve.drifts[i] <= 1e-12 * curve.mass0);
    CHECK_FALSE(static_cast<bool>(curve.measurable[i]));
  }
  CHECK(std::isnan(curve.fitted_exponent));
  CHECK(curve.assumption_ratio > 0.0);
}

TEST_CASE("nonlinear drift curve is structurally consistent") {
  const double h = 0.2;
  const std::size_t m = 128;
  LatticeField u0{make_grid(m, h), oracles::random_cvec(m, 56)};
  for (cplx& z : u0.values) z *= 0.3;
  const DnlsParams p{Sign::defocusing, 0.05, false};
  const diag::DriftCurve curve = diag::acl_drift_curve(u0, h, 0.04, {1.0, 2.0, 4.0, 8.0}, p);
  CHECK(curve.mass0 == doctest::Approx(lattice::mass(u0)).epsilon(1e-13));
  CHECK(curve.floor <= 1e-11 * curve.mass0);
  const double floor_eff = std::max(curve.floor, 1e-15 * curve.mass0);
  for (std::size_t i = 0; i < curve.drifts.size(); ++i) {
    CHECK(curve.drifts[i] >= 0.0);
    CHECK(static_cast<bool>(curve.measurable[i]) == (curve.drifts[i] > 100.0 * floor_eff));
  }
  // kappa*h >= 1 makes the cutoff the identity, so those drifts sit at the floor
  CHECK(curve.drifts.back() <= curve.floor + 1e-18);
}

TEST_CASE("acl validates inputs") {
  LatticeField u0{make_grid(32, 0.1), oracles::random_cvec(32, 57)};
  const DnlsParams p{Sign::defocusing, 0.05, false};
  CHECK_THROWS_AS(diag::acl_drift_curve(u0, 0.1, 0.1, {}, p), std::invalid_argument);
  CHECK_THROWS_AS(diag::acl_drift_curve(u0, 0.1, 0.1, {-1.0}, p), std::invalid_argument);
  CHECK_THROWS_AS(diag::acl_drift_curve(u0, -0.1, 0.1, {1.0}, p), std::invalid_argument);
}

TEST_CASE("frequency tail of a single mode is all or nothing") {
  const TorusGrid g = make_grid(256, 0.1);
  oracles::TrigPoly poly{{4}, {cplx{1.0, 0.0}}, g.length()};
  const CoupledState s{poly.sample(g), ContinuumField{g, cvec(g.m, cplx{0.0, 0.0})}};
  const double xi4 = 2.0 * pi * 4.0 / g.length();
  CHECK(diag::frequency_tail(s, 0.5 * xi4) == doctest::Approx(g.length()).epsilon(1e-10));
  CHECK(diag::frequency_tail(s, xi4) == doctest::Approx(g.length()).epsilon(1e-10));
  CHECK(diag::frequency_tail(s, 1.01 * xi4) < 1e-10 * g.length());
}

TEST_CASE("spatial tail counts the outer nodes with the grid weight") {
  const TorusGrid g = make_grid(128, 0.25);
  const CoupledState s{ContinuumField{g, cvec(g.m, cplx{1.0, 0.0})},
                       ContinuumField{g, cvec(g.m, cplx{0.0, 0.0})}};
  const double R = 0.25 * g.length();
  std::size_t count = 0;
  for (std::size_t j = 0; j < g.m; ++j)
    if (std::abs(centered_coord(j, g)) >= R) ++count;
  CHECK(diag::spatial_tail(s, R) ==
        doctest::Approx(g.h * static_cast<double>(count)).epsilon(1e-13));
  CHECK_THROWS_AS(diag::spatial_tail(s, 0.5 * g.length()), std::invalid_argument);
  CHECK_THROWS_AS(diag::spatial_tail(s, -1.0), std::invalid_argument);
}

TEST_CASE("strichartz report on a constant-modulus series") {
  const std::size_t m = 64;
  const double A = 0.5, tw = 1.0;
  SnapshotSeries series;
  const int N = 21;
  for (int j = 0; j < N; ++j) {
    series.taus.push_back(tw * j / (N - 1));
    series.states.push_back(const_mod_field(m, A));
  }
  const diag::StrichartzRecord rec = diag::strichartz_report(series);
  const double init = A * std::sqrt(static_cast<double>(m));
  CHECK(rec.initial_l2 == doctest::Approx(init).epsilon(1e-13));
  CHECK(rec.l6l6 ==
        doctest::Approx(A * std::pow(static_cast<double>(m) * tw, 1.0 / 6.0)).epsilon(1e-12));
  CHECK(rec.l4linf == doctest::Approx(A * std::pow(tw, 0.25)).epsilon(1e-12));
  CHECK(rec.ratio_l6l6 == doctest::Approx(rec.l6l6 / init).epsilon(1e-13));
  CHECK(rec.ratio_l4linf == doctest::Approx(rec.l4linf / init).epsilon(1e-13));
}

TEST_CASE("bilinear experiment is deterministic and validates shells") {
  const auto a = diag::bilinear_ratio_experiment(512, 1.0 / 16.0, {0.25, 0.5}, 4, 10.0, 7);
  const auto b = diag::bilinear_ratio_experiment(512, 1.0 / 16.0, {0.25, 0.5}, 4, 10.0, 7);
  CHECK(a.ratios == b.ratios);
  CHECK(a.median_lhs == b.median_lhs);
  CHECK(a.fitted_slope == b.fitted_slope);
  REQUIRE(a.ratios.size() == 2);
  for (const auto& per_L : a.ratios) {
    REQUIRE(per_L.size() == 4);
    for (const double r : per_L) CHECK(r > 0.0);
  }
  for (std::size_t i = 0; i < a.Ls.size(); ++i) {
    CHECK(a.max_ratio[i] >= a.median_ratio[i]);
    CHECK(a.median_ratio[i] ==
          doctest::Approx(a.median_lhs[i] * std::sqrt(a.Ls[i])).epsilon(1e-12));
  }

  const auto c = diag::bilinear_ratio_experiment(512, 1.0 / 16.0, {0.25, 0.5}, 4, 10.0, 8);
  CHECK(a.ratios != c.ratios);

  CHECK_THROWS_AS(diag::bilinear_ratio_experiment(512, 0.25, {0.5}, 2, 5.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(diag::bilinear_ratio_experiment(500, 0.1, {0.5}, 2, 5.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(diag::bilinear_ratio_experiment(512, 0.1, {}, 2, 5.0, 1),
                  std::invalid_argument);
}

TEST_CASE("mixed oscillatory integrals match the two-mode closed form") {
  const double h = 0.1;
  const std::size_t m = 64;
  const TorusGrid lat = make_grid(m, h);
  const TorusGrid fine = make_grid(256, lat.length() / 256.0);
  const long long j1 = 3, j2 = -5;
  const cplx a{0.7, 0.2}, b{0.3, -0.5};

  LatticeField u0{lat, cvec(m)};
  const double th1 = 2.0 * pi * static_cast<double>(j1) / static_cast<double>(m);
  const double th_high = 2.0 * pi * static_cast<double>(j2) / static_cast<double>(m) + pi;
  for (std::size_t n = 0; n < m; ++n) {
    const double x1 = th1 * static_cast<double>(n);
    const double xh = th_high * static_cast<double>(n);
    u0.values[n] = a * cplx{std::cos(x1), std::sin(x1)} + b * cplx{std::cos(xh), std::sin(xh)};
  }

  const double tau_end = 6.0;
  const std::size_t N = 1528;
  std::vector<double> taus(N + 1);
  for (std::size_t j = 0; j <= N; ++j) taus[j] = tau_end * j / N;
  const DnlsParams p{Sign::defocusing, 0.05, true};
  const SnapshotSeries series = lattice::evolve(u0, p, taus);

  const double th2 = th_high - pi;
  const double w1 = 4.0 * std::pow(std::sin(th1 / 2.0), 2);
  const double w2 = 4.0 * std::pow(std::sin(th2 / 2.0), 2);
  const double L = lat.length();
  auto closed = [&](double Omega, double amp) {
    const cplx num = std::exp(cplx{0.0, Omega * tau_end}) - cplx{1.0, 0.0};
    return amp * std::sqrt(L) / h * std::abs(num / Omega) * h * h;
  };
  const double amp_psi = std::norm(b) * std::abs(a) / (h * h);
  const double amp_phi = std::norm(a) * std::abs(b) / (h * h);

  const double got_psi = diag::nonresonance_integral(series, h, diag::MixedMode::psi_mixed, fine);
  const double got_phi = diag::nonresonance_integral(series, h, diag::MixedMode::phi_mixed, fine);
  const double ctl_psi =
      diag::nonresonance_integral(series, h, diag::MixedMode::psi_mixed, fine, true);
  const double ctl_phi =
      diag::nonresonance_integral(series, h, diag::MixedMode::phi_mixed, fine, true);

  CHECK(got_psi == doctest::Approx(closed(2.0 * w2 + w1 - 8.0, amp_psi)).epsilon(1e-3));
  CHECK(got_phi == doctest::Approx(closed(8.0 - 2.0 * w1 - w2, amp_phi)).epsilon(1e-3));
  CHECK(ctl_psi == doctest::Approx(closed(2.0 * w2 + w1, amp_psi)).epsilon(1e-3));
  CHECK(ctl_phi == doctest::Approx(closed(-2.0 * w1 - w2, amp_phi)).epsilon(1e-3));

  // the e^{+-8 i tau} oscillation must suppress the integral relative to control
  CHECK(got_psi < 0.2 * ctl_psi);
  CHECK(got_phi < 0.2 * ctl_phi);
}

TEST_CASE("nonresonance rejects coarse sampling and trivial series") {
  const TorusGrid lat = make_grid(64, 0.1);
  const TorusGrid fine = make_grid(256, lat.length() / 256.0);
  SnapshotSeries series;
  series.taus = {0.0, 1.0};
  series.states.assign(2, LatticeField{lat, cvec(64, cplx{0.1, 0.0})});
  CHECK_THROWS_AS(diag::nonresonance_integral(series, 0.1, diag::MixedMode::psi_mixed, fine),
                  NumericalError);
  series.taus = {0.0};
  series.states.resize(1);
  CHECK_THROWS_AS(diag::nonresonance_integral(series, 0.1, diag::MixedMode::psi_mixed, fine),
                  std::invalid_argument);
}

TEST_CASE("zero data gives a zero mixed integral") {
  const TorusGrid lat = make_grid(64, 0.1);
  const TorusGrid fine = make_grid(256, lat.length() / 256.0);
  SnapshotSeries series;
  for (int j = 0; j <= 10; ++j) {
    series.taus.push_back(0.01 * j);
    series.states.push_back(LatticeField{lat, cvec(64, cplx{0.0, 0.0})});
  }
  CHECK(diag::nonresonance_integral(series, 0.1, diag::MixedMode::phi_mixed, fine) == 0.0);
}

TEST_CASE("fit_slope recovers an exact line and validates input") {
  const std::vector<double> x{1.0, 2.0, 3.5, 7.0};
  std::vector<double> y;
  for (const double v : x) y.push_back(3.0 - 0.7 * v);
  CHECK(diag::fit_slope(x, y) == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK_THROWS_AS(diag::fit_slope({1.0}, {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(diag::fit_slope({2.0, 2.0}, {1.0, 5.0}), std::invalid_argument);
}

TEST_CASE("seed mixing separates streams") {
  CHECK(diag::mix_seed(1, 0, 0) != diag::mix_seed(1, 0, 1));
  CHECK(diag::mix_seed(1, 0, 0) != diag::mix_seed(1, 1, 0));
  CHECK(diag::mix_seed(1, 0, 0) != diag::mix_seed(2, 0, 0));
  CHECK(diag::mix_seed(3, 4, 5) == diag::mix_seed(3, 4, 5));
}
