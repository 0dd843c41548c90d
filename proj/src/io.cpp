#include "dnls/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dnls {
namespace io {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string jstr(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += "\"";
  return out;
}

void write_text(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("io: cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("io: write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("io: cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string field_csv(const FieldRecord& rec) {
  std::string s;
  s += "# schema=field-v1\n";
  s += "# kind=" + rec.kind + "\n";
  s += "# component=" + rec.component + "\n";
  s += "# m=" + std::to_string(rec.m) + "\n";
  s += "# spacing=" + g17(rec.spacing) + "\n";
  if (rec.has_tau) s += "# tau=" + g17(rec.tau) + "\n";
  s += "index,re,im\n";
  for (std::size_t i = 0; i < rec.values.size(); ++i) {
    s += std::to_string(i);
    s += ",";
    s += g17(rec.values[i].real());
    s += ",";
    s += g17(rec.values[i].imag());
    s += "\n";
  }
  return s;
}

void write_field_csv(const std::string& path, const FieldRecord& rec) {
  write_text(path, field_csv(rec));
}

FieldRecord read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("io: cannot open: " + path);
  FieldRecord rec;
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      key.erase(key.find_last_not_of(' ') + 1);
      const std::string val = line.substr(eq + 1);
      if (key == "kind") rec.kind = val;
      else if (key == "component") rec.component = val;
      else if (key == "m") rec.m = std::stoul(val);
      else if (key == "spacing") rec.spacing = std::stod(val);
      else if (key == "tau") {
        rec.tau = std::stod(val);
        rec.has_tau = true;
      }
      continue;
    }
    if (!header_done) {
      if (line != "index,re,im") throw IoError("io: bad field header in " + path);
      header_done = true;
      continue;
    }
    std::stringstream ss(line);
    std::string idx, re, im;
    if (!std::getline(ss, idx, ',') || !std::getline(ss, re, ',') || !std::getline(ss, im))
      throw IoError("io: bad field row in " + path);
    rec.values.emplace_back(std::stod(re), std::stod(im));
  }
  if (rec.m != rec.values.size()) throw IoError("io: row count mismatch in " + path);
  return rec;
}

}  // namespace io
}  // namespace dnls
