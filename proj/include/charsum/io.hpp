#pragma once
// CSV serialization (fixed column order, 17 significant digits) and JSON run
// manifests with artifact checksums.

#include "charsum/checksum.hpp"
#include "charsum/dickman.hpp"
#include "charsum/model.hpp"
#include "charsum/scan.hpp"
#include "charsum/stats.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace charsum::io {

using arith::u64;
using json = nlohmann::json;
namespace fs = std::filesystem;

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string num(u64 v) { return std::to_string(v); }

//==============================================================================
// CSV payloads

inline constexpr const char *kScanHeader = "j,parity,M,N,N_over_q,m,tied";

inline std::string scan_csv(const scan::ScanResult &r) {
  std::ostringstream os;
  os << kScanHeader << '\n';
  const double q = static_cast<double>(r.q);
  for (const auto &e : r.extrema)
    os << e.j.j << ',' << e.j.parity() << ',' << num(e.M) << ',' << e.N << ','
       << num(static_cast<double>(e.N) / q) << ',' << num(e.m) << ','
       << (e.tied ? 1 : 0) << '\n';
  return os.str();
}

inline constexpr const char *kLfunHeader = "j,parity,re_L1,im_L1,abs_L1,re_G,im_G";

inline std::string lfun_csv(const std::vector<lfun::LValue> &l1,
                            const std::vector<cplx> &gauss) {
  std::ostringstream os;
  os << kLfunHeader << '\n';
  for (std::size_t j = 1; j < l1.size(); ++j) {
    const auto &v = l1[j].value;
    os << j << ',' << l1[j].j.parity() << ',' << num(v.real()) << ','
       << num(v.imag()) << ',' << num(std::abs(v)) << ',' << num(gauss[j].real())
       << ',' << num(gauss[j].imag()) << '\n';
  }
  return os.str();
}

inline constexpr const char *kReportHeader =
    "j,parity,M,N_over_q,m,abs_L1,D_trivial";

//! Per-character rows; D is D(chi, 1; y).
inline std::string report_csv(const chars::PrimeContext &ctx,
                              const std::vector<stats::CharacterReport> &rs,
                              double y) {
  std::ostringstream os;
  os << kReportHeader << '\n';
  const double q = static_cast<double>(ctx.q);
  for (const auto &r : rs)
    os << r.j.j << ',' << r.parity << ',' << num(r.M) << ','
       << num(static_cast<double>(r.N) / q) << ',' << num(r.m) << ','
       << num(std::abs(r.L1)) << ','
       << num(smooth::pretentious_distance(ctx, r.j, y).D) << '\n';
  return os.str();
}

inline constexpr const char *kTauHeader = "tau,phi,phi_plus,phi_minus,phi_L";

inline std::string tau_csv(const std::vector<stats::CharacterReport> &rs, u64 q,
                           const std::vector<double> &taus) {
  using stats::ParityFilter;
  const auto all = stats::m_distribution(rs, q, ParityFilter::all);
  const auto ev = stats::m_distribution(rs, q, ParityFilter::even);
  const auto od = stats::m_distribution(rs, q, ParityFilter::odd);
  const auto lf = stats::L_distribution(rs, q, ParityFilter::all);
  std::ostringstream os;
  os << kTauHeader << '\n';
  for (double t : taus)
    os << num(t) << ',' << num(all.survival(t)) << ',' << num(ev.survival(t))
       << ',' << num(od.survival(t)) << ',' << num(lf.survival(t)) << '\n';
  return os.str();
}

inline constexpr const char *kPhiHeader = "tau,phi_hat,ci_lo,ci_hi";

inline std::string phi_csv(const std::vector<model::PhiEstimate> &est) {
  std::ostringstream os;
  os << kPhiHeader << '\n';
  for (const auto &e : est)
    os << num(e.tau) << ',' << num(e.phi) << ',' << num(e.ci_lo) << ','
       << num(e.ci_hi) << '\n';
  return os.str();
}

inline constexpr const char *kSampleHeader = "index,s,m,argmax_alpha";

inline std::string samples_csv(const std::vector<model::ModelSample> &s) {
  std::ostringstream os;
  os << kSampleHeader << '\n';
  for (const auto &x : s)
    os << x.index << ',' << num(x.s_value) << ',' << num(x.m_value) << ','
       << num(x.argmax_alpha) << '\n';
  return os.str();
}

inline std::string dickman_csv(const dickman::DickmanTable &t, std::size_t stride) {
  std::ostringstream os;
  t.write_csv(os, stride);
  return os.str();
}

//! Splits one CSV line on commas (no quoting is ever emitted).
inline std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

//! CSV text to an array of records; fields that parse fully as numbers become
//! JSON numbers.
inline json csv_to_json(const std::string &csv) {
  std::istringstream in(csv);
  std::string line;
  json out = json::array();
  if (!std::getline(in, line))
    return out;
  const auto header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const auto cells = split_csv_line(line);
    json rec = json::object();
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) {
      const std::string &c = cells[i];
      char *end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (!c.empty() && end == c.c_str() + c.size())
        rec[header[i]] = v;
      else
        rec[header[i]] = c;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

//==============================================================================
// Files and manifests

inline void write_file(const fs::path &path, const std::string &data) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

inline std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Artifact {
  std::string file; // relative to the manifest directory
  std::uint64_t checksum = 0;
  std::uint64_t bytes = 0;
};

struct RunManifest {
  std::string command;
  u64 q = 0;
  json parameters = json::object();
  json results = json::object();
  double wall_seconds = 0.0;
  unsigned threads = 1;
  std::vector<Artifact> artifacts;
  std::string version;

  json to_json() const {
    json j;
    j["command"] = command;
    j["q"] = q;
    j["parameters"] = parameters;
    j["results"] = results;
    j["wall_seconds"] = wall_seconds;
    j["threads"] = threads;
    j["version"] = version;
    j["checksum_algorithm"] = "fnv1a64";
    j["artifacts"] = json::array();
    for (const auto &a : artifacts)
      j["artifacts"].push_back(
          {{"file", a.file}, {"checksum", hex64(a.checksum)}, {"bytes", a.bytes}});
    return j;
  }

  static RunManifest from_json(const json &j) {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.q = j.at("q").get<u64>();
    m.parameters = j.at("parameters");
    if (j.contains("results"))
      m.results = j.at("results");
    m.wall_seconds = j.at("wall_seconds").get<double>();
    m.threads = j.at("threads").get<unsigned>();
    m.version = j.at("version").get<std::string>();
    for (const auto &a : j.at("artifacts")) {
      Artifact art;
      art.file = a.at("file").get<std::string>();
      art.checksum = std::stoull(a.at("checksum").get<std::string>(), nullptr, 16);
      art.bytes = a.at("bytes").get<std::uint64_t>();
      m.artifacts.push_back(art);
    }
    return m;
  }
};

//! Writes an artifact under dir and records it in the manifest.
inline void emit(RunManifest &m, const fs::path &dir, const std::string &name,
                 const std::string &data) {
  write_file(dir / name, data);
  m.artifacts.push_back({name, fnv1a(data), data.size()});
}

inline constexpr const char *kManifestName = "manifest.json";

inline void write_manifest(const RunManifest &m, const fs::path &dir) {
  write_file(dir / kManifestName, m.to_json().dump(2) + "\n");
}

//! Reloads a manifest and checks every artifact's size and checksum.
//! Returns an empty string on success, otherwise a description of the first
//! mismatch.
inline std::string validate_manifest(const fs::path &dir) {
  RunManifest m;
  try {
    m = RunManifest::from_json(json::parse(read_file(dir / kManifestName)));
  } catch (const std::exception &e) {
    return std::string("manifest unreadable: ") + e.what();
  }
  for (const auto &a : m.artifacts) {
    std::string data;
    try {
      data = read_file(dir / a.file);
    } catch (const std::exception &e) {
      return e.what();
    }
    if (data.size() != a.bytes || fnv1a(data) != a.checksum)
      return "checksum mismatch for " + a.file;
  }
  return {};
}

} // namespace charsum::io
