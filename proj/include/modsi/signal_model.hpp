#pragma once

#include <complex>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "modsi/fine_signal.hpp"

namespace modsi {

/// h(t) = 1/(πγ(1+(t/γ)²)), H(ω) = exp(−γ|ω|).
struct Lorentzian {
  double gamma = 0.5;
};

/// Scaled B-spline h(t) = (1/s)·βⁿ(t/s), H(ω) = sincⁿ⁺¹(sω).
/// The 1/s factor keeps H(0) = 1 for every scale.
struct BSpline {
  int order = 1;
  double scale = 1.0;
};

/// Ideal lowpass pulse h(t) = sin(Ωt)/(πt): H = 1 on |ω| < Ω, 1/2 at |ω| = Ω, 0 beyond.
struct Sinc {
  double bandwidth = 3.141592653589793;
};

/// Measured pulse on a uniform grid, linearly interpolated and zero off its support.
struct Tabulated {
  FineSignal pulse;
};

/// sinc(u) = sin(u/2)/(u/2), sinc(0) = 1. With this convention the CTFT of the
/// unit box β⁰ is sinc(ω); two other normalizations are in common use.
double sinc(double u) noexcept;

/// Closed-form B-spline βⁿ(u) for n ∈ {0, 1}; β⁰ is 1 on [−1/2, 1/2).
double bspline_closed_form(int order, double u);

/// βⁿ(u) from the convolution recursion βⁿ⁺¹ = βⁿ ∗ β⁰, evaluated on a grid of
/// step 1/1024 and linearly interpolated. Used for n ≥ 2.
double bspline_recursive(int order, double u);

/// Generating pulse of a shift-invariant space. Immutable once built.
class Generator {
 public:
  using Kind = std::variant<Lorentzian, BSpline, Sinc, Tabulated>;

  static Generator lorentzian(double gamma);
  static Generator bspline(int order, double scale = 1.0);
  static Generator sinc(double bandwidth);
  static Generator tabulated(FineSignal pulse);

  const Kind& kind() const noexcept { return kind_; }

  double value(double t) const;
  std::complex<double> spectrum(double omega) const;

  /// Σ_m h(t − mL): the pulse seen by a world that repeats every L seconds.
  double periodic_value(double t, double L) const;

  /// Closed interval outside which h vanishes; ±inf for Lorentzian and Sinc.
  std::pair<double, double> support() const;

  std::string describe() const;

 private:
  explicit Generator(Kind kind);

  Kind kind_;
  // Samples of βⁿ for n ≥ 2, built once by repeated box convolution.
  std::shared_ptr<const std::vector<double>> spline_table_;
};

double generator_value(const Generator& g, double t);
std::complex<double> generator_spectrum(const Generator& g, double omega);

/// x(t) = Σ_{n=n0}^{n0+len−1} a[n]·h(t − nT).
struct SISpec {
  double T = 1.0;
  long n0 = 0;
  std::vector<double> coeffs;
  Generator generator = Generator::lorentzian(0.5);

  long n1() const noexcept { return n0 + static_cast<long>(coeffs.size()) - 1; }
  /// Throws ValidationError on T ≤ 0, empty or non-finite coefficients.
  void validate() const;
};

/// Evaluate the SI signal on a grid. With Boundary::periodic the grid is one period
/// and every pulse is periodized; the period must be an integer multiple of T.
/// Rejects dt ≥ T.
FineSignal synthesize(const SISpec& spec, const GridSpec& grid,
                      Boundary boundary = Boundary::open);

}  // namespace modsi
