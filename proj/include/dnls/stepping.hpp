#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dnls {

// Drives a time stepper through a list of snapshot times starting from time 0.
// Each segment is covered by full steps of +-dt plus one exact partial step, so
// every target is landed on exactly (the partial is the remaining difference).
// Targets must be finite and monotone away from zero in a single direction.
template <class StepFn, class VisitFn>
void drive_snapshots(double dt, const std::vector<double>& targets, StepFn step,
                     VisitFn visit) {
  if (!(dt > 0.0)) throw std::invalid_argument("stepping: dt must be positive");
  bool pos = false, neg = false;
  double prev_abs = 0.0;
  for (double t : targets) {
    if (!std::isfinite(t)) throw std::invalid_argument("stepping: non-finite snapshot time");
    if (t > 0.0) pos = true;
    if (t < 0.0) neg = true;
    if (std::abs(t) < prev_abs)
      throw std::invalid_argument("stepping: snapshot times must move away from zero");
    prev_abs = std::abs(t);
  }
  if (pos && neg)
    throw std::invalid_argument("stepping: mixed-sign snapshot times; run two sweeps");

  double cur = 0.0;
  for (double target : targets) {
    const double remaining = target - cur;
    const double sdt = std::copysign(dt, remaining == 0.0 ? 1.0 : remaining);
    const auto nfull =
        static_cast<long long>(std::floor(std::abs(remaining) / dt + 1e-9));
    for (long long i = 0; i < nfull; ++i) step(sdt);
    const double partial = remaining - static_cast<double>(nfull) * sdt;
    if (std::abs(partial) > 1e-12 * std::max(1.0, std::abs(target))) step(partial);
    cur = target;
    visit(target);
  }
}

}  // namespace dnls
