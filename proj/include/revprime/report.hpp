#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "bound.hpp"
#include "revcount.hpp"

namespace revprime {

/// FNV-1a 64 over the canonical (sorted-key) JSON dump.
inline std::string config_hash(const json& config) {
  const nlohmann::json canonical = nlohmann::json::parse(config.dump());
  const std::string text = canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

/// Shortest round-trip decimal form, locale independent.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return json(v).dump();
}

/// Writes to a sibling temp file, then renames over the target.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << content;
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string json_lines(const json& header, const std::vector<json>& rows) {
  std::string out = header.dump() + "\n";
  for (const auto& r : rows) out += r.dump() + "\n";
  return out;
}

inline json census_record_json(const CensusRecord& r) {
  json j;
  j["g"] = r.g;
  j["L"] = r.L;
  j["a"] = r.a;
  j["q"] = r.q;
  j["observed"] = r.observed;
  j["rho"] = r.rho_value.str();
  j["main_term"] = r.main_term;
  j["relative_dev"] = std::isnan(r.relative_dev) ? json(nullptr) : json(r.relative_dev);
  j["sharp_observed"] = r.sharp_observed;
  j["modulus_sharp"] = r.modulus_sharp;
  return j;
}

inline std::string census_csv(const std::vector<CensusRecord>& rows, const std::string& hash) {
  std::ostringstream os;
  os << "# config_hash=" << hash << "\n";
  os << "g,L,a,q,observed,main_term,relative_dev,sharp_observed,modulus_sharp\n";
  for (const auto& r : rows) {
    os << r.g << ',' << r.L << ',' << r.a << ',' << r.q << ',' << r.observed << ',' << format_double(r.main_term)
       << ',' << format_double(r.relative_dev) << ',' << r.sharp_observed << ',' << r.modulus_sharp << "\n";
  }
  return os.str();
}

}  // namespace revprime
