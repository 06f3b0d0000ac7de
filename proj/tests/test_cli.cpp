#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "modsi/cli.hpp"
#include "modsi/ecg.hpp"

namespace fs = std::filesystem;
using modsi::cli::run;

namespace {

const fs::path configs = fs::path(MODSI_SOURCE_DIR) / "configs";

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "modsi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "modsi_test_cli" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path small_config(const fs::path& dir) {
  fs::create_directories(dir);
  std::string text = slurp(configs / "lorentzian.json");
  text.replace(text.find("\"trials\": 50"), 12, "\"trials\": 3");
  const auto p = dir / "small.json";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("version") {
  const auto r = invoke({"version"});
  CHECK(r.code == 0);
  CHECK(r.out.find("config schema 1") != std::string::npos);
}

TEST_CASE("sweep writes CSV and SVG, byte-identical across runs and workers") {
  const auto dir = scratch("sweep");
  const auto cfg = small_config(dir);
  const auto a = invoke({"sweep", "--config", cfg.string(), "--out", (dir / "a").string()});
  REQUIRE(a.code == 0);
  CHECK(fs::exists(dir / "a" / "sweep.csv"));
  CHECK(fs::exists(dir / "a" / "sweep.svg"));
  const auto b = invoke({"sweep", "--config", cfg.string(), "--out", (dir / "b").string(), "--workers", "3"});
  REQUIRE(b.code == 0);
  CHECK(slurp(dir / "a" / "sweep.csv") == slurp(dir / "b" / "sweep.csv"));
  CHECK(slurp(dir / "a" / "trials.csv") == slurp(dir / "b" / "trials.csv"));
  const auto csv = slurp(dir / "a" / "sweep.csv");
  CHECK(csv.rfind("snr_db,mse_bl_db,mse_coef_db,n_fail,n_trials\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  const auto c = invoke({"sweep", "--config", cfg.string(), "--out", (dir / "c").string(), "--seed", "99"});
  REQUIRE(c.code == 0);
  CHECK(slurp(dir / "a" / "sweep.csv") != slurp(dir / "c" / "sweep.csv"));
}

TEST_CASE("inspect-filter reports the spline zeros") {
  const auto dir = scratch("inspect");
  const auto r = invoke({"inspect-filter", "--config", (configs / "spline_nomixer.json").string(), "--out", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("-0.8000π/T") != std::string::npos);
  CHECK(r.err.find("+0.8000π/T") != std::string::npos);
  CHECK(fs::exists(dir / "R.csv"));

  const auto ok = invoke({"inspect-filter", "--config", (configs / "spline_mixer.json").string(), "--out", dir.string()});
  CHECK(ok.code == 0);
  CHECK(fs::exists(dir / "filter.csv"));
}

TEST_CASE("demo writes the pipeline stages") {
  const auto dir = scratch("demo");
  const auto r = invoke({"demo", "--config", (configs / "pipeline.json").string(), "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "demo.csv");
  CHECK(csv.rfind("t,x,y,fold_y\n", 0) == 0);
  const auto again = scratch("demo2");
  REQUIRE(invoke({"demo", "--config", (configs / "pipeline.json").string(), "--out", again.string()}).code == 0);
  CHECK(slurp(again / "demo.csv") == csv);
  CHECK(slurp(again / "demo_coeffs.csv") == slurp(dir / "demo_coeffs.csv"));
}

TEST_CASE("configuration and I/O errors exit with 1") {
  const auto dir = scratch("errors");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({"schema": 1, "lambda": -1})";
  std::ofstream(dir / "typo.json") << R"({"schema": 1, "lamda": 0.2})";
  std::ofstream(dir / "broken.json") << "{";
  CHECK(invoke({"sweep", "--config", (dir / "bad.json").string(), "--out", dir.string()}).code == 1);
  const auto typo = invoke({"sweep", "--config", (dir / "typo.json").string(), "--out", dir.string()});
  CHECK(typo.code == 1);
  CHECK(typo.err.find("lamda") != std::string::npos);
  CHECK(invoke({"sweep", "--config", (dir / "broken.json").string()}).code == 1);
  CHECK(invoke({"sweep", "--config", (dir / "missing.json").string()}).code == 1);
  CHECK(invoke({"ecg", "--input", (dir / "missing.csv").string(), "--out", dir.string()}).code == 1);
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"frobnicate"}).code == 1);
}

TEST_CASE("ecg on the built-in synthetic recording") {
  const auto dir = scratch("ecg");
  const auto r = invoke({"ecg", "--config", (configs / "ecg.json").string(), "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("beat sets match: yes") != std::string::npos);
  CHECK(slurp(dir / "ecg.csv").rfind("t,original,folded,recovered\n", 0) == 0);

  // Explicit recording, window and beats.
  fs::create_directories(dir);
  std::ofstream rec(dir / "rec.csv");
  rec << "mv\n";
  const auto synth = modsi::synthetic_recording(4.0, 60.0);
  for (double v : synth.values) rec << v << "\n";
  rec.close();
  const auto e = invoke({"ecg", "--input", (dir / "rec.csv").string(), "--skip-header", "--rate", "1000",
                         "--pulse-window", "0.18:0.88", "--beats", "3,30,52", "--out", (dir / "x").string()});
  REQUIRE(e.code == 0);
  CHECK(e.out.find("beats (recovered): 3,30,52") != std::string::npos);

  const auto mean = invoke({"ecg", "--input", (dir / "rec.csv").string(), "--skip-header", "--pulse-window",
                            "0.18:0.88", "--baseline", "mean", "--beats", "3,30", "--out", (dir / "y").string()});
  CHECK(mean.code == 2);
}
