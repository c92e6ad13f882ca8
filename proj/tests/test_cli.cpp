#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nlsrad/cli.hpp"
#include "nlsrad/config.hpp"
#include "nlsrad/io.hpp"

using namespace nlsrad;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("nlsrad_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "nlsrad");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text != nullptr) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("parse a plain config") {
  const auto s = parse_settings("gamma = 1.0\nmu = 1.0\nomega = 1.0\nn = 4096\nR_max = 32\n");
  const auto cfg = parse_config("ground-state", {s});
  CHECK(cfg.params.gamma == 1.0);
  CHECK(cfg.n == 4096);
  CHECK(cfg.r_max == 32.0);
}

TEST_CASE("config errors cite the line") {
  const auto s = parse_settings("# comment\n\nmu = 2.5\n");
  try {
    parse_config("ground-state", {s});
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("0 < mu < 2") != std::string::npos);
    CHECK(e.kind() == ErrorKind::kConfig);
  }
  CHECK_THROWS_WITH_AS(parse_settings("gamma = 1\nfoo = 2\n"), "line 2: unknown key 'foo'", Error);
  CHECK_THROWS_WITH_AS(parse_settings("gamma 1\n"), "line 1: expected key = value", Error);
  CHECK_THROWS_WITH_AS(parse_config("evolve", {parse_settings("dt = abc\n")}),
                       "line 1: malformed number 'abc' for key 'dt'", Error);
  CHECK_THROWS_AS(parse_config("evolve", {parse_settings("gamma = 0\n")}), Error);
  CHECK_NOTHROW(parse_config("evolve", {parse_settings("gamma = 0\nallow_free_limit = true\n")}));
}

TEST_CASE("flags override the file") {
  SettingMap file = parse_settings("omega = 1\n");
  SettingMap flags{{"omega", Setting{"2", "flag --omega"}}};
  CHECK(parse_config("functionals", {file, flags}).params.omega == 2.0);
  const auto echo = describe(parse_config("functionals", {file, flags}));
  CHECK(echo.at("omega") == "2");
  CHECK(echo.size() == known_keys().size());
}

TEST_CASE("number formatting round-trips") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("ground-state subcommand writes deterministic outputs") {
  const auto a = scratch("gs_a"), b = scratch("gs_b");
  const std::vector<std::string> common{"ground-state", "--gamma", "1", "--mu", "1", "--omega", "1",
                                        "--n", "512", "--R_max", "16"};
  auto args_a = common, args_b = common;
  args_a.insert(args_a.end(), {"--out_dir", a.string()});
  args_b.insert(args_b.end(), {"--out_dir", b.string()});
  REQUIRE(cli(args_a) == 0);
  REQUIRE(cli(args_b) == 0);
  for (const char* f : {"Q.csv", "result.json"}) {
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  CHECK(manifest["command"] == "ground-state");
  CHECK(manifest["exit_code"] == 0);
  CHECK(manifest["config"]["n"] == "512");
  CHECK(manifest.contains("started_at"));
  CHECK(manifest.contains("duration_s"));
  CHECK(manifest["outputs"].size() == 2);
  CHECK(slurp(a / "Q.csv").rfind("r,Q\n", 0) == 0);
}

TEST_CASE("classify subcommand predicts blow-up above the ground state") {
  const auto dir = scratch("classify");
  REQUIRE(cli({"classify", "--amplitude", "1.1", "--family", "cQ", "--n", "512", "--R_max", "16",
               "--out_dir", dir.string()}) == 0);
  const auto verdict = nlohmann::json::parse(slurp(dir / "verdict.json"));
  CHECK(verdict["predicted"] == "blowup");
}

TEST_CASE("sweep with an empty family") {
  const auto dir = scratch("sweep");
  REQUIRE(cli({"sweep", "--n", "256", "--R_max", "16", "--out_dir", dir.string()}) == 0);
  CHECK(slurp(dir / "sweep.csv") ==
        "amplitude,S,below_threshold,K_gamma,unanimous,predicted,empirical,agree,error\n");
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  std::string err;
  CHECK(cli({"ground-state", "--mu", "2.5", "--out_dir", dir.string()}, &err) == 1);
  CHECK(err.find("0 < mu < 2") != std::string::npos);
  CHECK(cli({"ground-state", "--nonsense", "1"}) == 1);
  CHECK(cli({"bogus"}) == 1);
  CHECK(cli({}) == 1);

  const auto cfg = dir / "run.cfg";
  std::ofstream(cfg) << "gamma = 1\nfoo = 3\n";
  CHECK(cli({"functionals", "--config", cfg.string()}, &err) == 1);
  CHECK(err.find("line 2") != std::string::npos);

  // Precondition failure: nothing to verify above the threshold.
  CHECK(cli({"virial-check", "--amplitude", "2", "--n", "256", "--R_max", "16", "--out_dir",
             dir.string()}) == 1);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["exit_code"] == 1);
  CHECK(manifest.contains("error"));
}
