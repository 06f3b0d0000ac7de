#pragma once

#include <complex>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "modsi/analog_chain.hpp"
#include "modsi/signal_model.hpp"

namespace modsi {

/// Complex values on the DFT bins ω_k = 2πk/(window·T) with |ω_k| ≤ bands·π/T.
/// `window` is the coefficient window length, so bin k belongs to coefficient-DFT index
/// k mod window.
struct SpectrumGrid {
  std::vector<double> omega;
  std::vector<std::complex<double>> values;
  double T = 1.0;
  std::size_t window = 0;
  int bands = 1;

  std::size_t size() const noexcept { return omega.size(); }
  /// Signed bin index k of entry i.
  long bin(std::size_t i) const noexcept { return first_bin() + static_cast<long>(i); }
  long first_bin() const noexcept;
};

/// Bins of a window of `window` coefficients covering |ω| ≤ bands·π/T; values zero.
SpectrumGrid band_grid(std::size_t window, double T, int bands = 1);

/// H(ω) on the grid's bins.
SpectrumGrid generator_response(const Generator& g, const SpectrumGrid& bins);

/// R(ω) = Σ_l c_l·H(ω + 2πl/T) for p(t) = Σ_l c_l·exp(−j(2π/T)lt). For a real mixer this is
/// Σ_l conj(c_l)·H(ω − 2πl/T), and for cosine mixers it is Σ_l c_l·H(ω − 2πl/T).
SpectrumGrid mixer_to_R(const Generator& g, const MixerSpec& m, const SpectrumGrid& bins);

/// T_s·DFT of samples at rate 1/T_s, restricted to the grid bins of a window of
/// samples.size()/OF coefficients, OF = T/T_s.
SpectrumGrid band_spectrum(std::span<const double> samples, double Ts, double T, int bands = 1);

struct CorrectionFilter {
  std::vector<double> omega;
  std::vector<std::complex<double>> response;
  double T = 1.0;
  std::size_t window = 0;
  int bands = 1;
  double epsilon = 0.0;
  /// Band frequencies where |R| ≤ 1e−12·max|R|.
  std::vector<double> zero_report;
  double min_abs_R = 0.0;
  double max_abs_R = 0.0;
};

/// 1/R on the band, or conj(R)/max(|R|², ε²) when ε > 0.
/// Throws SingularFilterError when ε = 0 and any bin is a zero of R.
CorrectionFilter build_correction(const SpectrumGrid& R, double epsilon = 0.0);

struct Extraction {
  /// â over the coefficient window, index 0 at the first window coefficient.
  std::vector<double> coeffs;
  /// Largest |Im â| before it was discarded.
  double max_imag = 0.0;
};

/// A(e^{jωT}) = Y(ω)/R(ω) on the band, then an inverse DFT at rate 1/T. Bins that map to
/// the same coefficient-DFT index (the ±π/T pair of an even window, or the alias bands of
/// a multi-band filter) are averaged. samples.size() must equal filter.window·OF.
Extraction extract_coefficients(std::span<const double> samples, const CorrectionFilter& filter, double T,
                                std::size_t oversampling);

/// Predicted ‖â − a‖² for a band-limited error with spectrum E (as from band_spectrum):
/// (1/window)·Σ_j |mean of E/R over the bins of index j|². Returns +inf when R vanishes
/// on a bin.
double error_propagation(const SpectrumGrid& E, const SpectrumGrid& R);

/// CSV rows "omega,re,im" with a header line.
void write_csv(std::ostream& os, const SpectrumGrid& grid);
void write_csv(std::ostream& os, const CorrectionFilter& filter);

}  // namespace modsi
