#include "modsi/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "modsi/config.hpp"
#include "modsi/ecg.hpp"
#include "modsi/errors.hpp"
#include "modsi/experiment.hpp"
#include "modsi/report.hpp"

namespace modsi::cli {
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Options {
  std::string config;
  std::string out = ".";
  bool full = false;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;

  // ecg
  std::string input;
  double rate = 1000.0;
  bool skip_header = false;
  std::size_t column = 0;
  std::string pulse_window = "auto";
  std::string beats = "auto";
  std::string baseline = "endpoints";
};

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot write '" + p.string() + "'");
  return f;
}

RunConfig config_for(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  RunConfig rc = load_config(o.config);
  if (o.seed) rc.sweep.seed = *o.seed;
  if (o.full) rc.sweep.trials = 500;
  return rc;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int cmd_demo(const Options& o, std::ostream& out) {
  const RunConfig rc = config_for(o);
  const fs::path dir = prepare_out(o.out);
  const Experiment exp(rc.sweep);
  const auto acq = exp.acquire(0);
  {
    auto f = open_out(dir / "demo.csv");
    write_demo_csv(f, acq, rc.sweep.lambda);
  }
  const auto folded = FoldedSamples::checked(rc.sweep.lambda, rc.sweep.Ts(), acq.folded);
  const auto unfolded = make_unfolder(rc.sweep.unfolder)->unfold(folded);
  const auto ahat = exp.recover(unfolded.samples, acq.scale);
  {
    auto f = open_out(dir / "demo_coeffs.csv");
    f << "n,a,a_hat\n";
    char buf[128];
    for (std::size_t i = 0; i < acq.window.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%ld,%.12g,%.12g\n", static_cast<long>(i) - static_cast<long>(rc.sweep.pad_left),
                    acq.window[i], ahat[i]);
      f << buf;
    }
  }
  const auto noiseless = exp.evaluate(acq, kNoNoise, 0);
  out << "generator: " << rc.sweep.generator.describe() << (rc.sweep.mixer ? " with mixer" : "") << "\n";
  out << "fine grid: " << acq.y.size() << " points, samples: " << acq.folded.size() << ", lambda = " << rc.sweep.lambda
      << "\n";
  out << "noiseless BL error: " << fmt("%.2f", to_db(noiseless.mse_bl)) << " dB, coefficient error: "
      << fmt("%.2f", to_db(noiseless.mse_coef)) << " dB\n";
  out << "wrote " << (dir / "demo.csv").string() << " and " << (dir / "demo_coeffs.csv").string() << "\n";
  return exit_ok;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const RunConfig rc = config_for(o);
  const fs::path dir = prepare_out(o.out);
  const auto res = run_sweep(rc.sweep, o.workers);
  {
    auto f = open_out(dir / "sweep.csv");
    write_sweep_csv(f, res.rows);
  }
  {
    auto f = open_out(dir / "sweep.svg");
    const std::string suffix = rc.sweep.mixer ? " (mixer)" : " (no mixer)";
    write_svg(f, "MSE vs SNR, " + rc.sweep.generator.describe(), "SNR [dB]", "MSE [dB]",
              sweep_curves(res.rows, suffix));
  }
  {
    auto f = open_out(dir / "trials.csv");
    f << "snr_db,trial,mse_bl_db,mse_coef_db,flags,best_offset\n";
    char buf[160];
    for (const auto& t : res.trials) {
      std::snprintf(buf, sizeof buf, "%.6f,%zu,%.6f,%.6f,%u,%d\n", t.snr_db, t.trial, to_db(t.mse_bl),
                    to_db(t.mse_coef), t.flags, t.best_offset);
      f << buf;
    }
  }
  write_sweep_csv(out, res.rows);
  out << "wrote " << (dir / "sweep.csv").string() << ", " << (dir / "sweep.svg").string() << "\n";
  return exit_ok;
}

int cmd_inspect(const Options& o, std::ostream& out) {
  const RunConfig rc = config_for(o);
  const auto& c = rc.sweep;
  const fs::path dir = prepare_out(o.out);
  const auto bins = band_grid(c.window(), c.T);
  const auto R = c.mixer ? mixer_to_R(c.generator, *c.mixer, bins) : generator_response(c.generator, bins);
  {
    auto f = open_out(dir / "R.csv");
    write_csv(f, R);
  }
  out << "generator: " << c.generator.describe() << (c.mixer ? " with mixer" : "") << "\n";
  out << "band bins: " << R.size() << " (window " << c.window() << ", T = " << c.T << ")\n";
  out << "energy loss: " << fmt("%.4f", energy_loss(c.generator, c.T, c.mixer)) << "\n";
  const auto filter = build_correction(R, c.epsilon);
  {
    auto f = open_out(dir / "filter.csv");
    write_csv(f, filter);
  }
  out << "min |R| = " << fmt("%.6g", filter.min_abs_R) << ", max |R| = " << fmt("%.6g", filter.max_abs_R)
      << ", zeros reported: " << filter.zero_report.size() << "\n";
  return exit_ok;
}

std::pair<double, double> parse_window(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ValidationError("--pulse-window must look like START:END (seconds)");
  try {
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ValidationError("--pulse-window must look like START:END (seconds)");
  }
}

std::vector<long> parse_beats(const std::string& s) {
  std::vector<long> beats;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      beats.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("--beats: '" + item + "' is not an integer index");
    }
  }
  return beats;
}

int cmd_ecg(const Options& o, std::ostream& out) {
  RunConfig rc;
  if (!o.config.empty()) rc = load_config(o.config);
  const fs::path dir = prepare_out(o.out);

  ECGRecording rec = o.input.empty() ? synthetic_recording(10.0, 72.0, o.rate)
                                     : load_recording(o.input, LoadOptions{o.rate, o.skip_header, o.column});
  const double T = rc.ecg_train.T;

  Baseline baseline;
  if (o.baseline == "mean")
    baseline = Baseline::mean;
  else if (o.baseline == "endpoints")
    baseline = Baseline::endpoints;
  else if (o.baseline == "none")
    baseline = Baseline::none;
  else
    throw ValidationError("--baseline must be mean, endpoints or none");

  double start = 0.0, end = 0.0;
  if (o.pulse_window == "auto") {
    const auto peaks = detect_r_peaks(rec);
    if (peaks.empty()) throw ValidationError("no R peak found for --pulse-window auto");
    start = std::max(0.0, peaks.front() - 0.3);
    end = start + 0.7;
  } else {
    std::tie(start, end) = parse_window(o.pulse_window);
  }
  const Generator pulse = extract_pulse(rec, start, end, baseline);

  PulseTrainSpec spec;
  spec.T = T;
  spec.pulse = pulse;
  spec.window_periods = rc.ecg_train.window_periods;
  spec.beats = o.beats == "auto" ? beats_from_recording(rec, pulse, T) : parse_beats(o.beats);

  const auto rep = ecg_roundtrip(spec, rc.ecg);
  {
    auto f = open_out(dir / "ecg.csv");
    write_csv(f, rep);
  }
  std::ostringstream summary;
  summary << "recording: " << rec.subject << ", channel " << rec.channel << ", " << rec.values.size()
          << " samples at " << rec.sample_rate << " Hz\n";
  summary << "pulse window: " << fmt("%.3f", start) << ":" << fmt("%.3f", end) << " s\n";
  write_summary(summary, rep, rc.ecg);
  {
    auto f = open_out(dir / "ecg_report.txt");
    f << summary.str();
  }
  out << summary.str();
  out << "wrote " << (dir / "ecg.csv").string() << "\n";
  return exit_ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modulo sampling toolkit for shift-invariant spaces", "modsi"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool need_config) {
    auto* opt = sub->add_option("--config", o.config, "JSON configuration file");
    if (need_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory");
  };

  auto* demo = app.add_subcommand("demo", "Run one noiseless trial and write every pipeline stage");
  add_common(demo, true);
  demo->add_option("--seed", o.seed, "Override the master seed");

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo SNR sweep");
  add_common(sweep, true);
  sweep->add_flag("--full", o.full, "Use 500 trials per SNR point");
  sweep->add_option("--seed", o.seed, "Override the master seed");
  sweep->add_option("--workers", o.workers, "Worker threads (0 = all cores)");

  auto* inspect = app.add_subcommand("inspect-filter", "Evaluate R on the band and build the correction filter");
  add_common(inspect, true);

  auto* ecg = app.add_subcommand("ecg", "Pulse-train round trip with a heartbeat generator");
  add_common(ecg, false);
  ecg->add_option("--input", o.input, "Recording CSV (one sample per row); synthetic if omitted");
  ecg->add_option("--rate", o.rate, "Sample rate in Hz");
  ecg->add_flag("--skip-header", o.skip_header, "Ignore the first row");
  ecg->add_option("--column", o.column, "Zero-based column for multi-column CSV");
  ecg->add_option("--pulse-window", o.pulse_window, "START:END in seconds, or auto");
  ecg->add_option("--beats", o.beats, "auto, or comma-separated beat indices");
  ecg->add_option("--baseline", o.baseline, "Pulse baseline removal: endpoints, mean or none");

  auto* version = app.add_subcommand("version", "Print toolkit and config-schema versions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*version) {
      out << "modsi " << kToolkitVersion << "\nconfig schema " << kConfigSchemaVersion << "\n";
      return exit_ok;
    }
    if (*demo) return cmd_demo(o, out);
    if (*sweep) return cmd_sweep(o, out);
    if (*inspect) return cmd_inspect(o, out);
    if (*ecg) return cmd_ecg(o, out);
  } catch (const SingularFilterError& e) {
    err << "error: " << e.what() << "\n";
    return exit_recovery;
  } catch (const LatticeRoundingError& e) {
    err << "error: " << e.what() << "\n";
    return exit_recovery;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace modsi::cli
