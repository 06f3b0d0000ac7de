#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "modsi/ecg.hpp"
#include "modsi/errors.hpp"

using namespace modsi;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& body) {
  const auto dir = fs::temp_directory_path() / "modsi_test_ecg";
  fs::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p) << body;
  return p;
}

PulseTrainSpec three_beats() {
  PulseTrainSpec spec;
  spec.beats = {10, 40, 75};
  return spec;
}

}  // namespace

TEST_CASE("load_recording") {
  const auto rec = load_recording(write_temp("three.csv", "0.1\n0.2\n0.3\n"));
  CHECK(rec.values == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(rec.sample_rate == 1000.0);

  CHECK_THROWS_AS(load_recording("/nonexistent/rec.csv"), IoError);
  CHECK_THROWS_AS(load_recording(write_temp("empty.csv", "")), IoError);

  const auto hdr = write_temp("hdr.csv", "mv\n1.5\n-2\n");
  CHECK_THROWS_AS(load_recording(hdr), ValidationError);
  CHECK(load_recording(hdr, LoadOptions{1000.0, true, 0}).values == std::vector<double>{1.5, -2.0});

  try {
    load_recording(write_temp("bad.csv", "1\n2\nx3\n"));
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }

  const auto multi = load_recording(write_temp("multi.csv", "0,1.0,9\n1,2.0,9\n"), LoadOptions{500.0, false, 1});
  CHECK(multi.values == std::vector<double>{1.0, 2.0});
  CHECK(multi.dt() == 0.002);
}

TEST_CASE("extract_pulse") {
  ECGRecording rec;
  for (int k = 0; k < 2000; ++k) rec.values.push_back(std::exp(-0.5 * std::pow((k - 700) / 20.0, 2)));
  const auto g = extract_pulse(rec, 0.5, 1.0, Baseline::none);
  const auto& p = std::get<Tabulated>(g.kind()).pulse;
  const auto peak = std::max_element(p.values.begin(), p.values.end()) - p.values.begin();
  CHECK(p.time(static_cast<std::size_t>(peak)) == doctest::Approx(0.2));

  const auto all = std::get<Tabulated>(extract_pulse(rec, 0.0, 1.999).kind()).pulse;
  double mean = 0.0;
  for (double v : rec.values) mean += v;
  mean /= rec.values.size();
  REQUIRE(all.values.size() == rec.values.size());
  for (std::size_t k = 0; k < all.values.size(); k += 97) CHECK(all.values[k] == doctest::Approx(rec.values[k] - mean));

  const auto line = std::get<Tabulated>(extract_pulse(rec, 0.1, 0.3, Baseline::endpoints).kind()).pulse;
  CHECK(line.values.front() == 0.0);
  CHECK(std::abs(line.values.back()) < 1e-15);

  CHECK_THROWS_AS(extract_pulse(rec, 0.5, 0.5), ValidationError);
  CHECK_THROWS_AS(extract_pulse(rec, 1.5, 2.5), ValidationError);
}

TEST_CASE("pulse-train round trip recovers the beats") {
  const auto rep = ecg_roundtrip(three_beats());
  CHECK(rep.window == 101);
  CHECK(rep.Ts == doctest::Approx(0.002));
  CHECK(rep.folded_nontrivial);
  CHECK(rep.fold_depth > 2.0);
  CHECK(rep.recovered_beats == std::vector<long>{10, 40, 75});
  CHECK(rep.unfold_rel_mse < 1e-20);
  CHECK(rep.waveform_rel_mse < 1e-6);
  for (std::size_t n = 0; n < rep.coeffs.size(); ++n) {
    const double want = (n == 10 || n == 40 || n == 75) ? 1.0 : 0.0;
    CHECK(std::abs(rep.coeffs[n] - want) < 1e-3);
  }
  EcgOptions central;
  central.average_alias_bands = false;
  CHECK(ecg_roundtrip(three_beats(), central).beats_match());
}

TEST_CASE("empty train and no-fold train") {
  PulseTrainSpec empty;
  const auto rep = ecg_roundtrip(empty);
  CHECK(rep.recovered_beats.empty());
  CHECK(!rep.folded_nontrivial);

  EcgOptions loose;
  loose.lambda_rel = 10.0;
  const auto r = ecg_roundtrip(three_beats(), loose);
  CHECK(!r.folded_nontrivial);
  CHECK(r.unfolded == r.folded);
  CHECK(r.beats_match());
}

TEST_CASE("beat recovery is invariant to amplitude scale") {
  for (double s : {1e-3, 1e3}) {
    auto p = synthetic_pulse();
    for (auto& v : p.values) v *= s;
    auto spec = three_beats();
    spec.pulse = Generator::tabulated(p);
    const auto rep = ecg_roundtrip(spec);
    CHECK(rep.recovered_beats == spec.beats);
    CHECK(rep.lambda == doctest::Approx(s * ecg_roundtrip(three_beats()).lambda));
  }
}

TEST_CASE("mean-subtracted pulse has H(0) = 0 and is rejected") {
  const auto rec = synthetic_recording();
  auto spec = three_beats();
  spec.pulse = extract_pulse(rec, 0.18, 0.88, Baseline::mean);
  CHECK_THROWS_AS(ecg_roundtrip(spec), SingularFilterError);
  spec.pulse = extract_pulse(rec, 0.18, 0.88, Baseline::endpoints);
  CHECK(ecg_roundtrip(spec).beats_match());
}

TEST_CASE("R-peak detection on a synthetic recording") {
  const auto rec = synthetic_recording(10.0, 72.0);
  const auto peaks = detect_r_peaks(rec);
  CHECK(peaks.size() >= 11);
  CHECK(peaks.size() <= 13);
  CHECK(peaks.front() == doctest::Approx(0.48).epsilon(0.01));
  const auto beats = beats_from_recording(rec, Generator::tabulated(synthetic_pulse()), 0.05);
  CHECK(beats.size() == peaks.size());
  CHECK(std::is_sorted(beats.begin(), beats.end()));
  PulseTrainSpec spec;
  spec.beats = beats;
  CHECK(ecg_roundtrip(spec).beats_match());
  spec.beats = {5, 3};
  CHECK_THROWS_AS(ecg_roundtrip(spec), ValidationError);
}
