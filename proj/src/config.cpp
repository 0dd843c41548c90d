#include "dnls/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dnls/profiles.hpp"
#include "dnls/spectral.hpp"

namespace dnls {
namespace config {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": " + v);
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: bad boolean for " + key + ": " + v);
}

std::string list_to_string(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += g17(v[i]);
  }
  return s;
}

}  // namespace

void apply_kv(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const std::string k = trim(key), v = trim(value);
  if (k == "h_list") cfg.h_list = parse_list(k, v);
  else if (k == "T") cfg.T = parse_double(k, v);
  else if (k == "gamma") cfg.gamma = parse_double(k, v);
  else if (k == "sign") {
    if (v == "defocusing") cfg.sign = Sign::defocusing;
    else if (v == "focusing") cfg.sign = Sign::focusing;
    else throw ConfigError("config: sign must be defocusing or focusing");
  } else if (k == "torus_length") cfg.torus_length = parse_double(k, v);
  else if (k == "m_ref") cfg.m_ref = static_cast<std::size_t>(parse_double(k, v));
  else if (k == "dt") cfg.dt = parse_double(k, v);
  else if (k == "dt_ref") cfg.dt_ref = parse_double(k, v);
  else if (k == "h0") cfg.h0 = parse_double(k, v);
  else if (k == "snapshot_count") cfg.snapshot_count = static_cast<int>(parse_double(k, v));
  else if (k == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(k, v));
  else if (k == "data_psi") cfg.data_psi = v;
  else if (k == "data_phi") cfg.data_phi = v;
  else if (k == "output_dir") cfg.output_dir = v;
  else if (k == "linear_only") cfg.linear_only = parse_bool(k, v);
  else if (k == "fast_reference") cfg.fast_reference = parse_bool(k, v);
  else if (k == "nonres_T") cfg.nonres_T = parse_double(k, v);
  else if (k == "kappas") cfg.kappas = parse_list(k, v);
  else throw ConfigError("config: unknown key: " + k);
}

ExperimentConfig load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: " + path + ":" + std::to_string(lineno) +
                        ": expected key=value");
    apply_kv(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

std::size_t site_count(const ExperimentConfig& cfg, double h) {
  const double m_real = cfg.torus_length / h;
  const auto m = static_cast<std::size_t>(std::llround(m_real));
  if (m == 0 || std::abs(m_real - static_cast<double>(m)) > 1e-9 * m_real ||
      !is_power_of_two(m))
    throw ConfigError("config: torus_length/h must be a power of two for h=" + g17(h));
  return m;
}

void validate(const ExperimentConfig& cfg) {
  if (!(cfg.T > 0.0)) throw ConfigError("config: T must be positive");
  if (!(cfg.gamma > 0.0) || !(cfg.gamma < 1.0))
    throw ConfigError("config: gamma must lie in (0,1)");
  if (!(cfg.torus_length > 0.0)) throw ConfigError("config: torus_length must be positive");
  if (!is_power_of_two(cfg.m_ref)) throw ConfigError("config: m_ref must be a power of two");
  if (!(cfg.dt > 0.0) || cfg.dt > 0.5) throw ConfigError("config: dt must lie in (0, 0.5]");
  if (!(cfg.dt_ref_resolved() > 0.0)) throw ConfigError("config: dt_ref must be positive");
  if (cfg.snapshot_count < 2) throw ConfigError("config: snapshot_count must be >= 2");
  if (cfg.h_list.empty()) throw ConfigError("config: h_list must be nonempty");
  if (!(cfg.nonres_T > 0.0)) throw ConfigError("config: nonres_T must be positive");

  const double dx = cfg.torus_length / static_cast<double>(cfg.m_ref);
  for (double h : cfg.h_list) {
    if (!(h > 0.0) || h >= cfg.h0)
      throw ConfigError("config: every h must satisfy 0 < h < h0; offending h=" + g17(h));
    const std::size_t m = site_count(cfg, h);
    if (m >= 2 * cfg.m_ref)
      throw ConfigError("config: m_ref too small for the lattice at h=" + g17(h));
    const double n_cut = 0.5 * std::pow(h, cfg.gamma - 1.0);
    if (2.0 * n_cut > std::numbers::pi / dx)
      throw ConfigError("config: fine grid cannot resolve the 2*n_cut band at h=" + g17(h));
  }
  // profiles must evaluate (unknown families and missing keys surface here)
  const TorusGrid probe = make_grid(8, cfg.torus_length / 8.0);
  profiles::evaluate(cfg.data_psi, probe);
  profiles::evaluate(cfg.data_phi, probe);
}

std::string canonical_string(const ExperimentConfig& cfg) {
  // keys in fixed sorted order
  std::string s;
  s += "T=" + g17(cfg.T) + "\n";
  s += "data_phi=" + cfg.data_phi + "\n";
  s += "data_psi=" + cfg.data_psi + "\n";
  s += "dt=" + g17(cfg.dt) + "\n";
  s += "dt_ref=" + g17(cfg.dt_ref_resolved()) + "\n";
  s += "fast_reference=" + std::string(cfg.fast_reference ? "true" : "false") + "\n";
  s += "gamma=" + g17(cfg.gamma) + "\n";
  s += "h0=" + g17(cfg.h0) + "\n";
  s += "h_list=" + list_to_string(cfg.h_list) + "\n";
  s += "kappas=" + list_to_string(cfg.kappas) + "\n";
  s += "linear_only=" + std::string(cfg.linear_only ? "true" : "false") + "\n";
  s += "m_ref=" + std::to_string(cfg.m_ref) + "\n";
  // output_dir is deliberately excluded: the hash identifies the experiment,
  // not where its artifacts land
  s += "nonres_T=" + g17(cfg.nonres_T) + "\n";
  s += "seed=" + std::to_string(cfg.seed) + "\n";
  s += "sign=" + std::string(cfg.sign == Sign::defocusing ? "defocusing" : "focusing") + "\n";
  s += "snapshot_count=" + std::to_string(cfg.snapshot_count) + "\n";
  s += "torus_length=" + g17(cfg.torus_length) + "\n";
  return s;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string s = canonical_string(cfg);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace config
}  // namespace dnls
