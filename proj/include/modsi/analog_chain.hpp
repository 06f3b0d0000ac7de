#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "modsi/fine_signal.hpp"

namespace modsi {

/// T-periodic mixer p(t) = Σ_l c_l·exp(−j(2π/T)lt), stored by its Fourier coefficients.
/// Only real mixers are accepted: c_{−l} = conj(c_l).
class MixerSpec {
 public:
  MixerSpec(double T, std::map<int, std::complex<double>> coeffs);

  /// p(t) = 1.
  static MixerSpec identity(double T);
  /// p(t) = dc + Σ amp·cos(2π·harmonic·t/T); each cosine splits as c_{±k} = amp/2.
  static MixerSpec from_cosines(double T, double dc, const std::vector<std::pair<int, double>>& terms);

  double T() const noexcept { return T_; }
  const std::map<int, std::complex<double>>& coeffs() const noexcept { return coeffs_; }
  bool is_identity() const noexcept;

  std::complex<double> value(double t) const;

 private:
  double T_;
  std::map<int, std::complex<double>> coeffs_;
};

/// Modulo-folded samples M_λ(y[nT_s]) + noise.
struct FoldedSamples {
  double lambda = 1.0;
  double Ts = 1.0;
  std::vector<double> values;

  /// Noiseless measurement: every value must lie in [−λ, λ).
  static FoldedSamples checked(double lambda, double Ts, std::vector<double> values);
  /// Noisy measurement: values may leave [−λ, λ) by the noise amount.
  static FoldedSamples measured(double lambda, double Ts, std::vector<double> values);
};

/// M_λ(x) = ((x + λ) mod 2λ) − λ with floor-mod, so the result is in [−λ, λ).
/// Values already in [−λ, λ) are returned bit-for-bit.
double fold(double x, double lambda);
std::vector<double> fold(std::span<const double> x, double lambda);
FineSignal fold(const FineSignal& x, double lambda);

/// Pointwise x(t)·p(t). Throws ValidationError if p(t) has an imaginary part above
/// 1e−9 of its real part (roundoff is discarded below that).
FineSignal mix(const FineSignal& x, const MixerSpec& m);

/// Ideal brick-wall lowpass keeping |ω| ≤ cutoff. Boundary::open zero-pads the window by
/// a factor of two; Boundary::periodic treats the window as one period.
/// Rejects cutoff ≥ π/dt.
FineSignal lowpass(const FineSignal& x, double cutoff, Boundary boundary = Boundary::open);

/// Decimate to x(t0 + k·Ts). Ts/dt must be a positive integer.
std::vector<double> sample(const FineSignal& x, double Ts);

struct Normalized {
  FineSignal signal;
  double scale = 1.0;  // the removed peak ‖x‖∞
};

/// x/‖x‖∞; rejects the all-zero signal.
Normalized normalize_peak(const FineSignal& x);

/// No-noise sentinel for add_noise.
inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Adds white Gaussian noise of variance P·10^(−snr_db/10), P the mean square of the input.
/// Deterministic in seed; snr_db = +inf returns the input unchanged.
std::vector<double> add_noise(std::span<const double> samples, double snr_db, std::uint64_t seed);

}  // namespace modsi
