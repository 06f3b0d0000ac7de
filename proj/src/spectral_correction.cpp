#include "modsi/spectral_correction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "modsi/errors.hpp"
#include "modsi/fft.hpp"

namespace modsi {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kZeroTolerance = 1e-12;

std::size_t oversampling_of(double T, double Ts) {
  const double ratio = T / Ts;
  const double r = std::round(ratio);
  if (!(r >= 1.0) || std::abs(ratio - r) > 1e-9 * ratio)
    throw ValidationError("T/Ts must be a positive integer oversampling factor");
  return static_cast<std::size_t>(r);
}

// Coefficient-DFT index of signed bin k.
std::size_t residue(long k, std::size_t window) { return fft::bin_of(k, window); }

}  // namespace

long SpectrumGrid::first_bin() const noexcept { return -static_cast<long>((omega.size() - 1) / 2); }

SpectrumGrid band_grid(std::size_t window, double T, int bands) {
  if (window == 0) throw ValidationError("band_grid: empty window");
  if (!(T > 0.0)) throw ValidationError("band_grid: T must be positive");
  if (bands < 1) throw ValidationError("band_grid: need at least one band");
  const auto kmax = static_cast<long>((static_cast<std::size_t>(bands) * window) / 2);
  SpectrumGrid g;
  g.T = T;
  g.window = window;
  g.bands = bands;
  const double dw = 2.0 * kPi / (static_cast<double>(window) * T);
  for (long k = -kmax; k <= kmax; ++k) g.omega.push_back(dw * static_cast<double>(k));
  g.values.assign(g.omega.size(), 0.0);
  return g;
}

SpectrumGrid generator_response(const Generator& g, const SpectrumGrid& bins) {
  SpectrumGrid out = bins;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = g.spectrum(out.omega[i]);
  return out;
}

SpectrumGrid mixer_to_R(const Generator& g, const MixerSpec& m, const SpectrumGrid& bins) {
  if (m.is_identity()) return generator_response(g, bins);
  SpectrumGrid out = bins;
  const double shift = 2.0 * kPi / bins.T;
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::complex<double> acc = 0.0;
    for (const auto& [l, c] : m.coeffs()) acc += c * g.spectrum(out.omega[i] + shift * l);
    out.values[i] = acc;
  }
  return out;
}

SpectrumGrid band_spectrum(std::span<const double> samples, double Ts, double T, int bands) {
  const std::size_t of = oversampling_of(T, Ts);
  const std::size_t ns = samples.size();
  if (ns == 0 || ns % of != 0) throw ValidationError("band_spectrum: sample count must be a multiple of T/Ts");
  if (static_cast<std::size_t>(bands) >= of) throw ValidationError("band_spectrum: band count must be below T/Ts");
  SpectrumGrid g = band_grid(ns / of, T, bands);
  const auto Y = fft::forward(samples);
  for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = Ts * Y[fft::bin_of(g.bin(i), ns)];
  return g;
}

CorrectionFilter build_correction(const SpectrumGrid& R, double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ValidationError("build_correction: epsilon must be >= 0");
  if (R.size() == 0) throw ValidationError("build_correction: empty spectrum");
  CorrectionFilter f;
  f.omega = R.omega;
  f.T = R.T;
  f.window = R.window;
  f.bands = R.bands;
  f.epsilon = epsilon;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& v : R.values) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  f.min_abs_R = lo;
  f.max_abs_R = hi;
  const double tol = kZeroTolerance * hi;
  for (std::size_t i = 0; i < R.size(); ++i)
    if (std::abs(R.values[i]) <= tol) f.zero_report.push_back(R.omega[i]);
  if (epsilon == 0.0 && !f.zero_report.empty()) throw SingularFilterError(f.zero_report, R.T);

  f.response.resize(R.size());
  const double floor2 = epsilon * epsilon;
  for (std::size_t i = 0; i < R.size(); ++i) {
    const auto r = R.values[i];
    f.response[i] = epsilon == 0.0 ? 1.0 / r : std::conj(r) / std::max(std::norm(r), floor2);
  }
  return f;
}

Extraction extract_coefficients(std::span<const double> samples, const CorrectionFilter& filter, double T,
                                std::size_t oversampling) {
  if (oversampling < 1) throw ValidationError("extract_coefficients: oversampling must be positive");
  const std::size_t nw = filter.window;
  if (nw == 0 || filter.response.size() != filter.omega.size())
    throw ValidationError("extract_coefficients: malformed filter");
  if (samples.size() != nw * oversampling)
    throw ValidationError("extract_coefficients: sample count " + std::to_string(samples.size()) +
                          " does not match window " + std::to_string(nw) + " x oversampling " +
                          std::to_string(oversampling));
  if (std::abs(filter.T - T) > 1e-12 * T) throw ValidationError("extract_coefficients: filter built for another T");

  const std::size_t ns = samples.size();
  const double Ts = T / static_cast<double>(oversampling);
  const auto Y = fft::forward(samples);
  fft::cvec A(nw, 0.0);
  std::vector<int> hits(nw, 0);
  const long k0 = -static_cast<long>((filter.omega.size() - 1) / 2);
  for (std::size_t i = 0; i < filter.omega.size(); ++i) {
    const long k = k0 + static_cast<long>(i);
    const auto j = residue(k, nw);
    A[j] += Ts * Y[fft::bin_of(k, ns)] * filter.response[i];
    ++hits[j];
  }
  for (std::size_t j = 0; j < nw; ++j) {
    if (hits[j] == 0) throw ValidationError("extract_coefficients: filter does not cover every coefficient bin");
    A[j] /= static_cast<double>(hits[j]);
  }
  const auto a = fft::inverse(A);
  Extraction out;
  out.coeffs.resize(nw);
  for (std::size_t n = 0; n < nw; ++n) {
    out.coeffs[n] = a[n].real();
    out.max_imag = std::max(out.max_imag, std::abs(a[n].imag()));
  }
  return out;
}

double error_propagation(const SpectrumGrid& E, const SpectrumGrid& R) {
  if (E.size() != R.size() || E.window != R.window || E.size() == 0)
    throw ValidationError("error_propagation: grids are not aligned");
  const std::size_t nw = E.window;
  fft::cvec acc(nw, 0.0);
  std::vector<int> hits(nw, 0);
  for (std::size_t i = 0; i < E.size(); ++i) {
    if (R.values[i] == 0.0) return std::numeric_limits<double>::infinity();
    const auto j = residue(E.bin(i), nw);
    acc[j] += E.values[i] / R.values[i];
    ++hits[j];
  }
  double total = 0.0;
  for (std::size_t j = 0; j < nw; ++j)
    if (hits[j] > 0) total += std::norm(acc[j] / static_cast<double>(hits[j]));
  return total / static_cast<double>(nw);
}

namespace {

void write_rows(std::ostream& os, const std::vector<double>& omega, const std::vector<std::complex<double>>& v) {
  os << "omega,re,im\n";
  char buf[96];
  for (std::size_t i = 0; i < omega.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", omega[i], v[i].real(), v[i].imag());
    os << buf;
  }
}

}  // namespace

void write_csv(std::ostream& os, const SpectrumGrid& grid) { write_rows(os, grid.omega, grid.values); }
void write_csv(std::ostream& os, const CorrectionFilter& filter) { write_rows(os, filter.omega, filter.response); }

}  // namespace modsi
