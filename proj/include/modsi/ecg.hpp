#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "modsi/signal_model.hpp"

namespace modsi {

struct ECGRecording {
  double sample_rate = 1000.0;  // Hz
  std::vector<double> values;   // mV
  std::string channel = "0";
  std::string subject = "unknown";

  double dt() const noexcept { return 1.0 / sample_rate; }
};

struct LoadOptions {
  double sample_rate = 1000.0;
  bool skip_header = false;
  /// Zero-based column for comma-separated multi-column files.
  std::size_t column = 0;
};

/// One sample per row (or one column of a CSV). Throws IoError when the file cannot be
/// read or holds no samples, ValidationError naming the 1-based row of a malformed value.
ECGRecording load_recording(const std::filesystem::path& path, const LoadOptions& options = {});

enum class Baseline {
  mean,       // subtract the window mean
  endpoints,  // subtract the line through the first and last samples
  none,
};

/// Cut [start_s, end_s] out of the recording as a tabulated pulse with t = 0 at the
/// window onset. Throws ValidationError when the window leaves the recording or holds
/// fewer than 2 samples.
Generator extract_pulse(const ECGRecording& rec, double start_s, double end_s, Baseline baseline = Baseline::mean);

/// Heartbeat-like pulse: a sum of Gaussians for the P wave, QRS complex and T wave, 0.7 s long.
FineSignal synthetic_pulse(double dt = 1e-3);

/// Periodic train of synthetic_pulse with small deterministic rate jitter.
ECGRecording synthetic_recording(double duration_s = 10.0, double heart_rate_bpm = 72.0,
                                 double sample_rate = 1000.0, std::uint64_t seed = 7);

/// R-peak times in seconds: local maxima above `level`·max separated by at least `refractory_s`.
std::vector<double> detect_r_peaks(const ECGRecording& rec, double level = 0.6, double refractory_s = 0.3);

struct PulseTrainDefaults {
  double T = 0.05;
  /// Window length in periods; 0 chooses the smallest odd count covering the train.
  std::size_t window_periods = 0;
};

/// x(t) = Σ_n a[n]·h(t − nT) with a ∈ {0, 1}; beats are the indices n with a[n] = 1.
struct PulseTrainSpec {
  std::vector<long> beats;
  double T = 0.05;
  Generator pulse = Generator::tabulated(synthetic_pulse());
  std::size_t window_periods = 0;
};

struct EcgOptions {
  double lambda_rel = 0.1;
  std::size_t oversampling = 5;
  /// LPF cutoff bands·π/T; the sampling period is T/(oversampling·bands).
  int bands = 5;
  int order = 3;
  bool average_alias_bands = true;
  double threshold = 0.5;
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 1;
};

struct EcgRow {
  double t;
  double original;
  double folded;
  double recovered;
};

struct EcgReport {
  std::vector<long> beats;
  std::vector<long> recovered_beats;
  std::vector<double> coeffs;
  std::size_t window = 0;
  double T = 0.0;
  double Ts = 0.0;
  double lambda = 0.0;
  double min_abs_H = 0.0;
  double max_abs_H = 0.0;
  /// Largest |y[nT_s]|/λ; above 1 means the fold changed at least one sample.
  double fold_depth = 0.0;
  bool folded_nontrivial = false;
  double unfold_rel_mse = 0.0;
  double waveform_rel_mse = 0.0;
  std::vector<EcgRow> rows;
  /// Unfolded samples before correction; exposed for checks.
  std::vector<double> unfolded;
  std::vector<double> folded;

  bool beats_match() const { return beats == recovered_beats; }
};

/// Smallest odd window in periods that holds every beat plus the pulse tail and a margin.
std::size_t auto_window_periods(const PulseTrainSpec& spec);

/// synthesize → LPF(bands·π/T) → fold(λ_rel·max|y|) → sample → unfold (higher-order
/// differences) → divide by H over every band and average the alias replicas → threshold.
/// Throws SingularFilterError if H vanishes on a band bin, LatticeRoundingError from the unfolder.
EcgReport ecg_roundtrip(const PulseTrainSpec& spec, const EcgOptions& options = {});

/// Beat indices for a recording: each R peak minus the pulse's own peak offset, in periods T.
std::vector<long> beats_from_recording(const ECGRecording& rec, const Generator& pulse, double T);

void write_csv(std::ostream& os, const EcgReport& report);
void write_summary(std::ostream& os, const EcgReport& report, const EcgOptions& options);

}  // namespace modsi
