#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"
#include "hitlab/error.hpp"
#include "hitlab/io.hpp"
#include "json.hpp"

using namespace hitlab;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "hitlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return app::run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("hitlab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config errors name the offending key") {
  try {
    app::parse_config(R"({"grid": {"nbins": 64}})");
    FAIL("expected config_invalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config_invalid);
    CHECK(std::string(e.what()).find("config.grid.nbins") != std::string::npos);
  }
  try {
    app::parse_config(R"({"nu": "small"})");
    FAIL("expected config_invalid");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("config.nu") != std::string::npos);
  }
  CHECK_THROWS_AS(app::parse_config(R"({"forcing": {"mode": "delta"}})"), Error);
  CHECK_THROWS_AS(app::parse_config(R"({"sweep": {"nu": [0.01, 0.02]}})"), Error);
}

TEST_CASE("comments are allowed and the echo re-parses") {
  const auto c = app::parse_config("{\n  // viscosity\n  \"nu\": 0.004, \"seed\": 9\n}");
  CHECK(c.nu == 0.004);
  CHECK(c.seed == 9);
  const auto again = app::parse_config(app::config_to_json(c).dump());
  CHECK(app::config_to_json(again) == app::config_to_json(c));
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  atomic_write(dir / "bad.json", R"({"grid": {"nbins": 64}})");
  CHECK(run({"--config", (dir / "bad.json").string(), "--quiet", "rg"}) == 2);
  CHECK(run({"--no-such-flag"}) == 2);
  CHECK(run({"--quiet", "oracle", "poiseuille", "--mu", "1", "--U", "1", "--h", "1"}) == 0);
  CHECK(run({"--quiet", "oracle", "poiseuille", "--mu", "-1", "--U", "1", "--h", "1"}) != 0);
}

TEST_CASE("rg writes its outputs and a manifest; the environment sets the output directory") {
  const auto dir = scratch("rg");
  ::setenv("HITLAB_OUT", dir.string().c_str(), 1);
  const int rc = run({"--quiet", "rg"});
  ::unsetenv("HITLAB_OUT");
  REQUIRE(rc == 0);
  for (const char* f : {"rg_trace.csv", "rg.json", "manifest.json"}) CHECK(fs::exists(dir / f));
  CHECK_FALSE(fs::exists(dir / "rg.json.partial"));
  const auto m = nlohmann::json::parse(read_file(dir / "manifest.json"));
  CHECK(m["command"] == "rg");
  CHECK(m["files"].size() == 2);
  CHECK_FALSE(m["config"].contains("workers"));
  const auto r = nlohmann::json::parse(read_file(dir / "rg.json"));
  CHECK(r["nu_tilde_star"].get<double>() > 0.0);
}

TEST_CASE("temporal output does not depend on the worker count") {
  const auto dir = scratch("temporal");
  atomic_write(dir / "c.json", R"({"seed": 5, "temporal": {"n_realizations": 8, "n_modes": 64}})");
  const auto c = (dir / "c.json").string();
  REQUIRE(run({"--config", c, "--quiet", "--out", (dir / "a").string(), "--workers", "1", "temporal"}) == 0);
  REQUIRE(run({"--config", c, "--quiet", "--out", (dir / "b").string(), "--workers", "3", "temporal"}) == 0);
  for (const char* f : {"temporal.json", "temporal_spectrum.csv", "manifest.json"})
    CHECK(read_file(dir / "a" / f) == read_file(dir / "b" / f));
  REQUIRE(run({"--config", c, "--quiet", "--out", (dir / "s").string(), "--seed", "6", "temporal"}) == 0);
  CHECK(read_file(dir / "a" / "temporal_spectrum.csv") != read_file(dir / "s" / "temporal_spectrum.csv"));
}

}
