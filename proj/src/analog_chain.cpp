#include "modsi/analog_chain.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "modsi/errors.hpp"
#include "modsi/fft.hpp"

namespace modsi {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("folding threshold must be positive");
}

}  // namespace

MixerSpec::MixerSpec(double T, std::map<int, std::complex<double>> coeffs) : T_(T), coeffs_(std::move(coeffs)) {
  if (!(T_ > 0.0) || !std::isfinite(T_)) throw ValidationError("mixer: period must be positive");
  bool nonzero = false;
  for (const auto& [l, c] : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ValidationError("mixer: non-finite coefficient");
    if (c != 0.0) nonzero = true;
    const auto it = coeffs_.find(-l);
    const std::complex<double> mirror = it == coeffs_.end() ? 0.0 : it->second;
    const double tol = 1e-12 * std::max(1.0, std::abs(c));
    if (std::abs(mirror - std::conj(c)) > tol)
      throw ValidationError("mixer: coefficients violate c[-l] = conj(c[l]) at l = " + std::to_string(l));
  }
  if (!nonzero) throw ValidationError("mixer: all coefficients are zero");
}

MixerSpec MixerSpec::identity(double T) { return MixerSpec(T, {{0, 1.0}}); }

MixerSpec MixerSpec::from_cosines(double T, double dc, const std::vector<std::pair<int, double>>& terms) {
  std::map<int, std::complex<double>> c;
  if (dc != 0.0) c[0] = dc;
  for (const auto& [k, amp] : terms) {
    if (k == 0) {
      c[0] += amp;
      continue;
    }
    c[k] += amp / 2.0;
    c[-k] += amp / 2.0;
  }
  return MixerSpec(T, std::move(c));
}

bool MixerSpec::is_identity() const noexcept {
  for (const auto& [l, c] : coeffs_)
    if (c != (l == 0 ? std::complex<double>(1.0) : std::complex<double>(0.0))) return false;
  return coeffs_.count(0) == 1;
}

std::complex<double> MixerSpec::value(double t) const {
  std::complex<double> acc = 0.0;
  for (const auto& [l, c] : coeffs_) acc += c * std::polar(1.0, -2.0 * kPi * l * t / T_);
  return acc;
}

FoldedSamples FoldedSamples::checked(double lambda, double Ts, std::vector<double> values) {
  FoldedSamples f = measured(lambda, Ts, std::move(values));
  for (double v : f.values)
    if (v < -lambda || v >= lambda) throw ValidationError("folded sample outside [-lambda, lambda)");
  return f;
}

FoldedSamples FoldedSamples::measured(double lambda, double Ts, std::vector<double> values) {
  require_lambda(lambda);
  if (!(Ts > 0.0) || !std::isfinite(Ts)) throw ValidationError("sample period must be positive");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("non-finite folded sample");
  return FoldedSamples{lambda, Ts, std::move(values)};
}

double fold(double x, double lambda) {
  if (x >= -lambda && x < lambda) return x;
  const double period = 2.0 * lambda;
  double m = std::fmod(x + lambda, period);
  if (m < 0.0) m += period;
  if (m >= period) m = 0.0;  // m + period rounded up to the period itself
  const double r = m - lambda;
  return r < lambda ? r : -lambda;
}

std::vector<double> fold(std::span<const double> x, double lambda) {
  require_lambda(lambda);
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [lambda](double v) { return fold(v, lambda); });
  return out;
}

FineSignal fold(const FineSignal& x, double lambda) { return FineSignal(x.t0, x.dt, fold(x.values, lambda)); }

FineSignal mix(const FineSignal& x, const MixerSpec& m) {
  if (m.is_identity()) return x;
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const std::complex<double> p = m.value(x.time(k));
    if (std::abs(p.imag()) > 1e-9 * std::max(1.0, std::abs(p.real())))
      throw ValidationError("mix: mixer produced a complex gain");
    out[k] = x.values[k] * p.real();
  }
  return FineSignal(x.t0, x.dt, std::move(out));
}

FineSignal lowpass(const FineSignal& x, double cutoff, Boundary boundary) {
  if (!(cutoff > 0.0)) throw ValidationError("lowpass: cutoff must be positive");
  if (cutoff >= kPi / x.dt) throw ValidationError("lowpass: cutoff at or above the grid Nyquist frequency");
  const std::size_t n = x.size();
  const std::size_t len = boundary == Boundary::open ? 2 * n : n;
  std::vector<double> padded(len, 0.0);
  std::copy(x.values.begin(), x.values.end(), padded.begin());

  auto X = fft::forward(std::span<const double>(padded));
  const double dw = 2.0 * kPi / (static_cast<double>(len) * x.dt);
  const double edge = cutoff * (1.0 + 1e-9);
  for (std::size_t b = 0; b < len; ++b) {
    const double w = dw * static_cast<double>(fft::signed_index(b, len));
    if (std::abs(w) > edge) X[b] = 0.0;
  }
  const auto y = fft::inverse(X);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = y[k].real();
  return FineSignal(x.t0, x.dt, std::move(out));
}

std::vector<double> sample(const FineSignal& x, double Ts) {
  const double ratio = Ts / x.dt;
  const double r = std::round(ratio);
  if (!(r >= 1.0) || std::abs(ratio - r) > 1e-9 * ratio)
    throw ValidationError("sample: Ts must be a positive integer multiple of the grid step");
  const auto step = static_cast<std::size_t>(r);
  std::vector<double> out;
  out.reserve(x.size() / step + 1);
  for (std::size_t k = 0; k < x.size(); k += step) out.push_back(x.values[k]);
  return out;
}

Normalized normalize_peak(const FineSignal& x) {
  double peak = 0.0;
  for (double v : x.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw ValidationError("normalize_peak: signal is identically zero");
  std::vector<double> out(x.size());
  std::transform(x.values.begin(), x.values.end(), out.begin(), [peak](double v) { return v / peak; });
  return {FineSignal(x.t0, x.dt, std::move(out)), peak};
}

std::vector<double> add_noise(std::span<const double> samples, double snr_db, std::uint64_t seed) {
  if (samples.empty()) throw ValidationError("add_noise: empty input");
  std::vector<double> out(samples.begin(), samples.end());
  if (std::isinf(snr_db) && snr_db > 0.0) return out;
  if (std::isnan(snr_db)) throw ValidationError("add_noise: SNR is NaN");
  double power = 0.0;
  for (double v : samples) power += v * v;
  power /= static_cast<double>(samples.size());
  const double sigma = std::sqrt(power * std::pow(10.0, -snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& v : out) v += noise(rng);
  return out;
}

}  // namespace modsi
