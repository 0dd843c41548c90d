#pragma once

#include <map>
#include <string>

#include "dnls/field.hpp"

namespace dnls {
namespace profiles {

// Textual profile spec, e.g. "gaussian(amplitude=0.75,width=3.0,center=0.0)".
// Families: gaussian(amplitude,width,center), sech(amplitude,width),
// plane_wave(mode,amplitude), two_bump(amplitude,width,sep).
struct ProfileSpec {
  std::string family;
  std::map<std::string, double> params;
};

ProfileSpec parse_profile(const std::string& text);

// Evaluate on the centered torus coordinate of `grid`.
ContinuumField evaluate(const ProfileSpec& spec, const TorusGrid& grid);

ContinuumField evaluate(const std::string& text, const TorusGrid& grid);

}  // namespace profiles
}  // namespace dnls
