#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dnls/lattice.hpp"

namespace dnls {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat experiment configuration; file format is one key=value per line with '#'
// comments, and the same key=value pairs may be applied as CLI overrides.
struct ExperimentConfig {
  std::vector<double> h_list{0.2, 0.1, 0.05, 0.025};
  double T = 1.0;
  double gamma = 0.5;
  Sign sign = Sign::defocusing;
  double torus_length = 51.2;
  std::size_t m_ref = 4096;
  double dt = 0.05;                 // lattice step, tau units
  std::optional<double> dt_ref;     // continuum reference step; defaults to dt/16
  double h0 = 0.25;
  int snapshot_count = 17;
  std::uint64_t seed = 1;
  std::string data_psi = "gaussian(amplitude=0.75,width=3.0,center=0.0)";
  std::string data_phi = "gaussian(amplitude=0.5,width=2.5,center=0.0)";
  std::string output_dir = "runs";
  bool linear_only = false;
  bool fast_reference = false;      // one reference solve from untruncated data
  double nonres_T = 0.2;            // continuum-time window of the mixed-term sweep
  std::vector<double> kappas{4.0, 8.0, 16.0, 32.0, 64.0};

  double dt_ref_resolved() const { return dt_ref ? *dt_ref : dt / 16.0; }
};

namespace config {

// Apply one key=value pair (file line or CLI override). Unknown keys are errors.
void apply_kv(ExperimentConfig& cfg, const std::string& key, const std::string& value);

ExperimentConfig load_file(const std::string& path);

// Full admissibility check; throws ConfigError naming the offending key.
void validate(const ExperimentConfig& cfg);

// Lattice site count for one h; throws unless length/h is a power of two.
std::size_t site_count(const ExperimentConfig& cfg, double h);

// Canonical key=value text (sorted keys, %.17g floats): hashing + manifest echo.
std::string canonical_string(const ExperimentConfig& cfg);

// FNV-1a 64 over the canonical string, hex encoded.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace config
}  // namespace dnls
