#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "commands.hpp"
#include "wban/error.hpp"

using namespace wban;
using namespace wban::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kGolden = WBAN_FIXTURE_DIR "/golden_three_wban.json";
const std::string kDefault = WBAN_CONFIG_DIR "/default.json";

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("wban_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_json(const fs::path& path, const json& j) {
  std::ofstream(path) << j.dump(2);
  return path.string();
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A fast config: few rounds, two seeds.
std::string quick_config(const fs::path& dir) {
  auto j = read_json(kDefault);
  j["run"]["horizon_superframes"] = 12;
  j["run"]["seeds"] = {1, 2};
  j["run"]["workers"] = 1;
  j["run"]["sweep"] = {{"axis", "n_wbans"}, {"values", {2, 3}}};
  j["output_dir"] = (dir / "out").string();
  return write_json(dir / "quick.json", j);
}

}  // namespace

TEST_CASE("seed and protocol flags") {
  CHECK(parse_seeds("3") == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(parse_seeds("5-7") == std::vector<std::uint64_t>{5, 6, 7});
  CHECK(parse_seeds("9,2") == std::vector<std::uint64_t>{9, 2});
  CHECK_THROWS_AS(parse_seeds("x"), ArgumentError);
  CHECK_THROWS_AS(parse_seeds("7-5"), ArgumentError);
  CHECK_THROWS_AS(parse_seeds("0"), ArgumentError);
  CHECK(parse_protocols("ocaim,OS") == std::vector<ProtocolKind>{ProtocolKind::kOcaim, ProtocolKind::kOs});
  CHECK_THROWS_AS(parse_protocols("ocaim,bad"), ArgumentError);
}

TEST_CASE("validate exit codes") {
  std::ostringstream out, err;
  Options opt;
  opt.config_path = kDefault;
  CHECK(cmd_validate(opt, out, err) == kOk);
  CHECK(out.str().find("K=10") != std::string::npos);

  const auto dir = scratch("validate");
  auto j = read_json(kDefault);
  j["timing"]["slot_length"] = 0.01;
  opt.config_path = write_json(dir / "bad.json", j);
  std::ostringstream out2, err2;
  CHECK(cmd_validate(opt, out2, err2) == kValidationFailure);
  CHECK(err2.str().find("K * slot_length") != std::string::npos);

  opt.config_path = (dir / "missing.json").string();
  std::ostringstream out3, err3;
  CHECK(cmd_validate(opt, out3, err3) == kValidationFailure);
}

TEST_CASE("golden: shipped fixture passes") {
  std::ostringstream out, err;
  Options opt;
  opt.fixture_path = kGolden;
  CHECK(cmd_golden(opt, out, err) == kOk);
  CHECK(out.str().find("match     SIL_{2,3} = {S_{3,3}}") != std::string::npos);
}

TEST_CASE("golden: moving S_{3,1} away fails and names the sets") {
  const auto dir = scratch("golden_perturbed");
  auto j = read_json(kGolden);
  j["network"]["wbans"][2]["sensors"][0]["position"] = {3.0, 2.5, 1.0};
  Options opt;
  opt.fixture_path = write_json(dir / "moved.json", j);
  std::ostringstream out, err;
  CHECK(cmd_golden(opt, out, err) == kGoldenMismatch);
  CHECK(err.str().find("I_2") != std::string::npos);
  CHECK(out.str().find("MISMATCH  I_2") != std::string::npos);
}

TEST_CASE("golden: empty network passes with empty sets") {
  const auto dir = scratch("golden_empty");
  Options opt;
  opt.fixture_path = write_json(dir / "empty.json", json{{"network", {{"wbans", json::array()}}}});
  std::ostringstream out, err;
  CHECK(cmd_golden(opt, out, err) == kOk);
}

TEST_CASE("golden: missing fixture is a setup error") {
  Options opt;
  opt.fixture_path = "/nonexistent/golden.json";
  std::ostringstream out, err;
  CHECK(cmd_golden(opt, out, err) == kRuntimeError);
  CHECK(err.str().find("setup") != std::string::npos);
}

TEST_CASE("unknown figure lists the valid names") {
  Options opt;
  opt.config_path = kDefault;
  std::ostringstream out, err;
  CHECK(cmd_figure("fig9", opt, out, err) == kValidationFailure);
  for (const auto& n : kFigureNames) CHECK(err.str().find(n) != std::string::npos);
}

TEST_CASE("figures write csv, svg and manifest with the config hash") {
  const auto dir = scratch("figures");
  Options opt;
  opt.config_path = quick_config(dir);
  for (const std::string name : {"beacon_prob", "fdr", "sinr_time"}) {
    std::ostringstream out, err;
    REQUIRE(cmd_figure(name, opt, out, err) == kOk);
    const auto csv = slurp(dir / "out" / (name + ".csv"));
    CHECK(csv.rfind("# config_hash: ", 0) == 0);
    CHECK(csv.find("schema_version,") != std::string::npos);
    CHECK(fs::exists(dir / "out" / (name + ".svg")));
    const auto m = read_json((dir / "out" / (name + ".manifest.json")).string());
    CHECK(csv.find(m["config_hash"].get<std::string>()) != std::string::npos);
  }
  // beacon_prob has a simulated and a theoretical curve.
  const auto svg = slurp(dir / "out" / "beacon_prob.svg");
  CHECK(svg.find(">simulated<") != std::string::npos);
  CHECK(svg.find(">theoretical<") != std::string::npos);
  // fdr compares three protocols.
  const auto fdr = slurp(dir / "out" / "fdr.csv");
  for (const char* p : {",OCAIM,", ",SMS,", ",OS,"}) CHECK(fdr.find(p) != std::string::npos);
}

TEST_CASE("sweep and analytics outputs are reproducible byte for byte") {
  const auto dir = scratch("repro");
  Options opt;
  opt.config_path = quick_config(dir);
  opt.write_rounds = true;
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(opt, out, err) == kOk);
  const auto first = slurp(dir / "out" / "sweep.csv");
  const auto rounds = slurp(dir / "out" / "rounds" / "OCAIM_seed1_n2.csv");
  REQUIRE(cmd_sweep(opt, out, err) == kOk);
  CHECK(slurp(dir / "out" / "sweep.csv") == first);
  CHECK(slurp(dir / "out" / "rounds" / "OCAIM_seed1_n2.csv") == rounds);
  REQUIRE(cmd_analytics(opt, out, err) == kOk);
  const auto analytics = slurp(dir / "out" / "analytics.csv");
  CHECK(analytics.find("pr_bsucc_fixedpoint") != std::string::npos);
}
