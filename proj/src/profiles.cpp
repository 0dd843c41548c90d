#include "dnls/profiles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dnls {
namespace profiles {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  const auto b = s.find_last_not_of(" \t");
  return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
}

double get(const ProfileSpec& spec, const std::string& key, double fallback,
           bool required = false) {
  auto it = spec.params.find(key);
  if (it != spec.params.end()) return it->second;
  if (required)
    throw std::invalid_argument("profile " + spec.family + ": missing parameter " + key);
  return fallback;
}

}  // namespace

ProfileSpec parse_profile(const std::string& text) {
  const std::string s = trim(text);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw std::invalid_argument("profile: expected family(key=value,...): " + text);
  ProfileSpec spec;
  spec.family = trim(s.substr(0, open));
  std::string body = s.substr(open + 1, s.size() - open - 2);
  std::size_t pos = 0;
  while (pos < body.size()) {
    auto comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    const std::string item = trim(body.substr(pos, comma - pos));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("profile: expected key=value, got: " + item);
      const std::string key = trim(item.substr(0, eq));
      try {
        spec.params[key] = std::stod(trim(item.substr(eq + 1)));
      } catch (const std::exception&) {
        throw std::invalid_argument("profile: bad numeric value in: " + item);
      }
    }
    pos = comma + 1;
  }
  return spec;
}

ContinuumField evaluate(const ProfileSpec& spec, const TorusGrid& grid) {
  ContinuumField f{grid, cvec(grid.m)};
  if (spec.family == "gaussian") {
    const double a = get(spec, "amplitude", 1.0);
    const double w = get(spec, "width", 0.0, true);
    const double c = get(spec, "center", 0.0);
    if (!(w > 0.0)) throw std::invalid_argument("gaussian: width must be positive");
    for (std::size_t j = 0; j < grid.m; ++j) {
      const double x = centered_coord(j, grid) - c;
      f.values[j] = a * std::exp(-(x * x) / (w * w));
    }
  } else if (spec.family == "sech") {
    const double a = get(spec, "amplitude", 1.0);
    const double w = get(spec, "width", 1.0);
    if (!(w > 0.0)) throw std::invalid_argument("sech: width must be positive");
    for (std::size_t j = 0; j < grid.m; ++j) {
      const double x = centered_coord(j, grid) / w;
      f.values[j] = a / std::cosh(x);
    }
  } else if (spec.family == "plane_wave") {
    const double a = get(spec, "amplitude", 1.0);
    const double mode = get(spec, "mode", 0.0, true);
    if (mode != std::floor(mode))
      throw std::invalid_argument("plane_wave: mode must be an integer");
    const double xi = 2.0 * std::numbers::pi * mode / grid.length();
    for (std::size_t j = 0; j < grid.m; ++j) {
      const double x = centered_coord(j, grid);
      f.values[j] = a * std::exp(cplx{0.0, xi * x});
    }
  } else if (spec.family == "two_bump") {
    const double a = get(spec, "amplitude", 1.0);
    const double w = get(spec, "width", 0.0, true);
    const double sep = get(spec, "sep", 0.0, true);
    if (!(w > 0.0)) throw std::invalid_argument("two_bump: width must be positive");
    for (std::size_t j = 0; j < grid.m; ++j) {
      const double x = centered_coord(j, grid);
      const double xl = (x - 0.5 * sep) / w;
      const double xr = (x + 0.5 * sep) / w;
      f.values[j] = a * (std::exp(-xl * xl) + std::exp(-xr * xr));
    }
  } else {
    throw std::invalid_argument("profile: unknown family: " + spec.family);
  }
  return f;
}

ContinuumField evaluate(const std::string& text, const TorusGrid& grid) {
  return evaluate(parse_profile(text), grid);
}

}  // namespace profiles
}  // namespace dnls
