#include "charsum/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

using namespace charsum;
using arith::u64;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
  const auto p = fs::temp_directory_path() / ("charsum_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

} // namespace

TEST(Checksum, Fnv1a) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex64(0xaf63dc4c8601ec8cULL), "af63dc4c8601ec8c");
  EXPECT_EQ(hex64(1).size(), 16u);
}

TEST(Csv, SplitLine) {
  const auto c = io::split_csv_line("1,,x\r");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], "1");
  EXPECT_EQ(c[1], "");
  EXPECT_EQ(c[2], "x");
}

TEST(Csv, SeventeenDigitRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, std::exp(-std::numbers::egamma), 1e-300, 12345.678901234567})
    EXPECT_EQ(std::strtod(io::num(v).c_str(), nullptr), v);
}

TEST(Csv, ScanRoundTrip) {
  const auto ctx = chars::build_context(101);
  const auto r = scan::scan_all(ctx);
  const auto csv = io::scan_csv(r);
  const auto rows = io::csv_to_json(csv);
  ASSERT_EQ(rows.size(), 99u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto &e = r.extrema[i];
    EXPECT_EQ(rows[i]["j"].get<double>(), static_cast<double>(e.j.j));
    EXPECT_EQ(rows[i]["M"].get<double>(), e.M);
    EXPECT_EQ(rows[i]["m"].get<double>(), e.m);
    EXPECT_EQ(rows[i]["N"].get<double>(), static_cast<double>(e.N));
    EXPECT_EQ(rows[i]["parity"].get<double>(), e.j.parity());
  }
  EXPECT_EQ(csv.substr(0, csv.find('\n')), io::kScanHeader);
}

TEST(Csv, ToJsonKeepsText) {
  const auto j = io::csv_to_json("a,b\n1.5,x\n\n2,3e2\n");
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["a"].get<double>(), 1.5);
  EXPECT_EQ(j[0]["b"].get<std::string>(), "x");
  EXPECT_EQ(j[1]["b"].get<double>(), 300.0);
  EXPECT_TRUE(io::csv_to_json("").empty());
}

TEST(Manifest, WriteAndValidate) {
  const auto dir = scratch("ok");
  io::RunManifest m;
  m.command = "scan";
  m.q = 101;
  m.parameters = {{"threads", 1}};
  m.results = {{"max_m", 1.25}};
  m.version = "test";
  io::emit(m, dir, "a.csv", "x,y\n1,2\n");
  io::emit(m, dir, "sub/b.csv", "z\n3\n");
  io::write_manifest(m, dir);
  EXPECT_EQ(io::validate_manifest(dir), "");

  const auto back = io::RunManifest::from_json(
      nlohmann::json::parse(io::read_file(dir / io::kManifestName)));
  EXPECT_EQ(back.command, "scan");
  EXPECT_EQ(back.q, 101u);
  ASSERT_EQ(back.artifacts.size(), 2u);
  EXPECT_EQ(back.artifacts[0].checksum, fnv1a("x,y\n1,2\n"));
  EXPECT_EQ(back.results["max_m"].get<double>(), 1.25);
}

TEST(Manifest, DetectsCorruption) {
  const auto dir = scratch("bad");
  io::RunManifest m;
  m.command = "scan";
  m.version = "test";
  io::emit(m, dir, "a.csv", "x\n1\n");
  io::write_manifest(m, dir);
  io::write_file(dir / "a.csv", "x\n2\n");
  EXPECT_NE(io::validate_manifest(dir).find("checksum mismatch"), std::string::npos);
  fs::remove(dir / "a.csv");
  EXPECT_NE(io::validate_manifest(dir), "");
  io::write_file(dir / io::kManifestName, "{not json");
  EXPECT_NE(io::validate_manifest(dir).find("unreadable"), std::string::npos);
}

TEST(Files, ReadMissingThrows) {
  EXPECT_THROW(io::read_file("/nonexistent/charsum/file"), std::runtime_error);
}
