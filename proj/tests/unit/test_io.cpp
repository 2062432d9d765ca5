#include "doctest.h"
#include "fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bglab/errors.hpp"
#include "bglab/io/config.hpp"
#include "bglab/io/digest.hpp"
#include "bglab/io/manifest.hpp"
#include "bglab/io/snapshot.hpp"

using namespace bglab;
namespace fs = std::filesystem;

namespace {
std::string error_of(const std::string& text) {
  try {
    io::parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("bglab_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}
}  // namespace

TEST_CASE("minimal config is completed with defaults and round-trips") {
  const auto c = io::parse_config(R"({"sampler": {"n": 100, "d": 0.05}, "seed": 9})");
  CHECK(c.sampler.n == 100);
  CHECK(c.sampler.d == 0.05);
  CHECK(c.seed == 9);
  CHECK(c.grid.v_max == doctest::Approx(5.0));
  CHECK_FALSE(c.defaulted.empty());
  const auto dumped = io::resolved_json(c).dump(2);
  const auto again = io::parse_config(dumped);
  CHECK(io::resolved_json(again).dump(2) == dumped);
}

TEST_CASE("config errors name the offending path or position") {
  CHECK(error_of(R"({"sampler": {"diametre": 0.1}})").find("sampler.diametre: unknown key \"diametre\"") != std::string::npos);
  const auto negative = error_of(R"({"sampler": {"n": 10, "d": -0.1}})");
  CHECK(negative.find("sampler.d") != std::string::npos);
  CHECK(negative.find("d must be > 0") != std::string::npos);
  const auto syntax = error_of("{\n  \"sampler\": {\n    \"n\": 10,,\n  }\n}");
  CHECK(syntax.find("line 3") != std::string::npos);
  CHECK(error_of(R"({"geometry": {"boundary": "torus"}})").find("geometry.boundary") != std::string::npos);
}

TEST_CASE("sampler spec requires n and d") {
  const auto c = io::parse_config("{}");
  CHECK_THROWS_AS(io::sampler_spec(c, 0), ConfigError);
}

TEST_CASE("snapshot text round-trips byte for byte") {
  auto cfg = testing::equilibrium_gas(50, 0.05, 5);
  cfg.particles[0].v = {0.1, -0.2, 0.3};
  const auto text = io::snapshot_text(cfg);
  std::istringstream in(text);
  const auto back = io::load_snapshot(in);
  CHECK(io::snapshot_text(back) == text);
  CHECK(back.particles[0].v.x == 0.1);
  CHECK(back.particles[0].v.y == -0.2);
  CHECK(back.particles.size() == 50);
}

TEST_CASE("truncated snapshots are rejected") {
  const auto text = io::snapshot_text(testing::equilibrium_gas(10, 0.05, 1));
  std::istringstream cut(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
  CHECK_THROWS_AS(io::load_snapshot(cut), IoError);
  // header claims one particle more than the file holds
  auto tampered = text;
  const auto pos = tampered.find("\"n\":10");
  REQUIRE(pos != std::string::npos);
  tampered.replace(pos, 6, "\"n\":11");
  std::istringstream more(tampered);
  try {
    io::load_snapshot(more);
    FAIL("tampered count accepted");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("count mismatch") != std::string::npos);
  }
  std::istringstream junk("not json\n");
  CHECK_THROWS_AS(io::load_snapshot(junk), IoError);
}

TEST_CASE("digest of known input") {
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("output directory rejects escapes and writes atomically") {
  const auto root = scratch("outdir");
  io::OutputDir dir(root);
  CHECK_THROWS_AS(dir.resolve("../x"), IoError);
  CHECK_THROWS_AS(dir.resolve("/etc/passwd"), IoError);
  CHECK_THROWS_AS(dir.resolve("a/../../x"), IoError);
  dir.write("sub/file.txt", "hello");
  std::ifstream f(root / "sub" / "file.txt");
  std::string s;
  std::getline(f, s);
  CHECK(s == "hello");
  {
    io::AtomicFile tmp(dir, "never.txt");
    tmp.stream() << "partial";
  }
  CHECK_FALSE(fs::exists(root / "never.txt"));
}

TEST_CASE("manifest round-trips and detects tampering") {
  const auto root = scratch("manifest");
  io::OutputDir dir(root);
  dir.write("a.txt", "alpha");
  io::RunManifest m;
  m.command = "simulate";
  m.config = {{"seed", 1}};
  m.seed = 1;
  m.run_id = io::make_run_id(m.command, m.config, m.seed);
  m.created = io::utc_timestamp();
  io::inventory(m, dir, {"a.txt"});
  io::write_manifest(dir, m);
  const auto back = io::read_manifest(root / "manifest.json");
  CHECK(back.run_id == m.run_id);
  CHECK(back.run_id.size() == 16);
  CHECK(back.files.size() == 1);
  CHECK(io::verify_manifest(back, root).empty());
  dir.write("a.txt", "tampered");
  CHECK(io::verify_manifest(back, root) == std::vector<std::string>{"a.txt"});
  CHECK(io::make_run_id("simulate", m.config, 2) != m.run_id);
}
