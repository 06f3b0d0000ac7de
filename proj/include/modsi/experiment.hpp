#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modsi/analog_chain.hpp"
#include "modsi/signal_model.hpp"
#include "modsi/spectral_correction.hpp"
#include "modsi/unfolding.hpp"

namespace modsi {

enum class NoiseStage { post_fold, pre_fold };

struct SweepConfig {
  Generator generator = Generator::lorentzian(0.5);
  double T = 1.0;
  std::size_t count = 50;
  double coeff_low = -1.0;
  double coeff_high = 1.0;
  double lambda = 0.2;
  std::size_t oversampling = 5;
  /// Fine-grid points per sample period: dt = T/(oversampling·refinement).
  std::size_t refinement = 16;
  /// Zero coefficients padded before and after the random ones, in periods T.
  std::size_t pad_left = 20;
  std::size_t pad_right = 20;
  std::optional<MixerSpec> mixer;
  UnfolderSpec unfolder{UnfoldMethod::higher_order_difference, HodOptions{3, 0.25, 1.5}};
  std::vector<double> snr_db{10.0, 20.0, 30.0, 40.0};
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  double epsilon = 0.0;
  /// Coefficients skipped at each end of the random block when scoring.
  std::size_t interior_drop = 5;
  NoiseStage noise_stage = NoiseStage::post_fold;

  std::size_t window() const noexcept { return count + pad_left + pad_right; }
  double Ts() const noexcept { return T / static_cast<double>(oversampling); }
  double dt() const noexcept { return Ts() / static_cast<double>(refinement); }
  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

enum TrialFlag : unsigned {
  flag_none = 0,
  flag_lattice_failure = 1u << 0,
  flag_singular_filter = 1u << 1,
};

struct TrialResult {
  std::size_t trial = 0;
  double snr_db = 0.0;
  /// ‖ŷ − y‖²/‖y‖² over all samples.
  double mse_bl = 0.0;
  /// ‖â − a‖²/‖a‖² over the interior coefficients.
  double mse_coef = 0.0;
  unsigned flags = flag_none;
  /// Diagnostic only: the global 2λ shift in [−2, 2] that minimizes the BL error, and that error.
  int best_offset = 0;
  double mse_bl_best_offset = 0.0;

  bool failed() const noexcept { return flags != flag_none; }
};

/// The noiseless part of one trial, shared by every SNR point.
struct Acquisition {
  std::vector<double> coeffs;      // the random block a[0..count)
  std::vector<double> window;      // a over the whole window, pads included
  FineSignal x;                    // SI signal
  FineSignal y;                    // LPF(p·x) divided by its peak
  double scale = 1.0;              // that peak
  std::vector<double> y_samples;   // y[nT_s]
  std::vector<double> folded;      // M_λ(y[nT_s])
};

/// A configured experiment. Immutable and shareable across threads.
class Experiment {
 public:
  explicit Experiment(SweepConfig cfg);

  const SweepConfig& config() const noexcept { return cfg_; }
  /// R on the band bins of the coefficient window.
  const SpectrumGrid& response() const noexcept { return R_; }
  /// Null when the filter is singular; every trial then carries flag_singular_filter.
  const CorrectionFilter* filter() const noexcept { return filter_ ? &*filter_ : nullptr; }

  Acquisition acquire(std::size_t trial) const;
  /// Measured sequence for one SNR (noise per the configured stage).
  FoldedSamples measure(const Acquisition& acq, double snr_db, std::size_t trial) const;
  TrialResult evaluate(const Acquisition& acq, double snr_db, std::size_t trial) const;
  /// Coefficient estimate over the window from unfolded samples; scaled back to a's units.
  std::vector<double> recover(const std::vector<double>& unfolded, double scale) const;

 private:
  SweepConfig cfg_;
  SpectrumGrid R_;
  std::optional<CorrectionFilter> filter_;
};

TrialResult run_trial(const SweepConfig& cfg, double snr_db, std::size_t trial);

struct SweepRow {
  double snr_db = 0.0;
  double mse_bl_db = 0.0;
  double mse_coef_db = 0.0;
  std::size_t n_fail = 0;
  std::size_t n_trials = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Ordered by (SNR index, trial index) regardless of scheduling.
  std::vector<TrialResult> trials;
};

/// Mean of 10·log10(MSE) over trials per SNR point. Failed trials score as the zero
/// estimate (relative MSE 1). `workers` = 0 picks the hardware concurrency.
SweepResult run_sweep(const SweepConfig& cfg, unsigned workers = 1);

/// 10·log10 with a floor at −300 dB.
double to_db(double ratio);

/// Fraction of the expected pre-LPF energy outside |ω| ≤ π/T for white coefficients.
double energy_loss(const Generator& g, double T, const std::optional<MixerSpec>& mixer = std::nullopt);

/// Stable 64-bit mix of a seed with further words (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace modsi
