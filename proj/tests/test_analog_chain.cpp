#include <cmath>
#include <random>

#include "doctest.h"
#include "modsi/analog_chain.hpp"
#include "modsi/errors.hpp"
#include "modsi/signal_model.hpp"

using namespace modsi;

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;

double energy(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}
}  // namespace

TEST_CASE("fold examples") {
  CHECK(fold(0.1, 0.2) == 0.1);
  CHECK(fold(0.5, 0.2) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(fold(-0.5, 0.2) == doctest::Approx(-0.1).epsilon(1e-14));
  CHECK(fold(0.2, 0.2) == -0.2);
  CHECK(fold(-0.2, 0.2) == -0.2);
  CHECK(fold(0.6, 0.2) == -0.2);
}

TEST_CASE("fold algebra on random inputs") {
  std::mt19937_64 rng(1);
  const double lambda = 0.2;
  std::uniform_real_distribution<double> wide(-1e3 * lambda, 1e3 * lambda);
  std::uniform_real_distribution<double> inside(-lambda, lambda);
  std::uniform_int_distribution<int> lattice(-1000, 1000);
  for (int i = 0; i < 20000; ++i) {
    const double x = wide(rng);
    const double f = fold(x, lambda);
    REQUIRE(f >= -lambda);
    REQUIRE(f < lambda);
    REQUIRE(fold(f, lambda) == f);
    const double shifted = fold(x + 2.0 * lambda * lattice(rng), lambda);
    // Near ±λ the two sides of the seam are the same point of the circle.
    const double d = std::abs(shifted - f);
    REQUIRE(std::min(d, 2.0 * lambda - d) <= 1e-12);
    const double y = inside(rng);
    REQUIRE(fold(y, lambda) == y);
  }
}

TEST_CASE("FoldedSamples range checks") {
  CHECK_NOTHROW(FoldedSamples::checked(0.2, 0.2, {0.1, -0.2, 0.19}));
  CHECK_THROWS_AS(FoldedSamples::checked(0.2, 0.2, {0.2}), ValidationError);
  CHECK_NOTHROW(FoldedSamples::measured(0.2, 0.2, {0.25}));
  CHECK_THROWS_AS(FoldedSamples::measured(0.0, 0.2, {0.0}), ValidationError);
}

TEST_CASE("mixer construction and gain") {
  const auto m = MixerSpec::from_cosines(1.0, 1.0, {{1, 200.0}, {2, 200.0}});
  CHECK(m.coeffs().at(0) == std::complex<double>(1.0));
  CHECK(m.coeffs().at(1) == std::complex<double>(100.0));
  CHECK(m.coeffs().at(-2) == std::complex<double>(100.0));
  CHECK(m.value(0.0).real() == doctest::Approx(401.0));
  CHECK(m.value(0.5).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(MixerSpec(1.0, {{1, {1.0, 1.0}}}), ValidationError);
  CHECK_THROWS_AS(MixerSpec(1.0, {{0, 0.0}}), ValidationError);
  CHECK_NOTHROW(MixerSpec(1.0, {{1, {1.0, 1.0}}, {-1, {1.0, -1.0}}}));
}

TEST_CASE("mix: identity, zero and pointwise product") {
  const FineSignal x(0.0, 0.01, {1.0, -2.0, 0.5, 3.0});
  const auto same = mix(x, MixerSpec::identity(1.0));
  CHECK(same.values == x.values);
  const FineSignal z(0.0, 0.01, {0.0, 0.0, 0.0});
  for (double v : mix(z, MixerSpec::from_cosines(1.0, 1.0, {{1, 200.0}})).values) CHECK(v == 0.0);
  const auto m = MixerSpec::from_cosines(1.0, 1.0, {{1, 200.0}, {2, 200.0}});
  const auto y = mix(x, m);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(y.values[k] == doctest::Approx(x.values[k] * m.value(x.time(k)).real()));
}

TEST_CASE("lowpass: periodic passband identity and stopband annihilation") {
  const std::size_t n = 1024;
  const double dt = 1.0 / 64.0;  // window 16 s
  const double cutoff = pi;
  std::vector<double> in(n), out_band(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = k * dt;
    in[k] = std::cos(2 * pi * t / 16.0 * 3) + 0.5 * std::sin(2 * pi * t / 16.0 * 7);  // 1.18, 2.75 rad/s
    out_band[k] = std::cos(1.5 * cutoff * t);                                            // 24 cycles per window
  }
  const FineSignal x(0.0, dt, in);
  const auto y = lowpass(x, cutoff, Boundary::periodic);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(y.values[k] - in[k]));
  CHECK(worst <= 1e-9 * std::sqrt(energy(in) / n) * 10);
  const auto s = lowpass(FineSignal(0.0, dt, out_band), cutoff, Boundary::periodic);
  CHECK(std::sqrt(energy(s.values)) <= 1e-9 * std::sqrt(energy(out_band)));
}

TEST_CASE("lowpass: open boundary on smooth envelopes") {
  const double dt = 0.05, cutoff = pi;
  const std::size_t n = 2400;  // [-60, 60)
  std::vector<double> low(n), high(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = -60.0 + k * dt;
    low[k] = std::exp(-t * t / (2.0 * 9.0));
    high[k] = std::exp(-t * t / (2.0 * 36.0)) * std::cos(1.5 * cutoff * t);
  }
  const auto y = lowpass(FineSignal(-60.0, dt, low), cutoff);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(y.values[k] - low[k]));
  CHECK(worst <= 1e-9);
  const auto z = lowpass(FineSignal(-60.0, dt, high), cutoff);
  CHECK(std::sqrt(energy(z.values)) <= 1e-9 * std::sqrt(energy(high)));
}

TEST_CASE("lowpass keeps 1 - exp(-pi) of a Lorentzian's energy") {
  const auto g = Generator::lorentzian(0.5);
  const double dt = 0.05;
  const std::size_t n = 8000;  // [-200, 200)
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = g.value(-200.0 + k * dt);
  const auto y = lowpass(FineSignal(-200.0, dt, v), pi);
  CHECK(energy(y.values) / energy(v) == doctest::Approx(1.0 - std::exp(-pi)).epsilon(1e-3));
  CHECK(energy(y.values) / energy(v) == doctest::Approx(0.9568).epsilon(1e-4));
}

TEST_CASE("lowpass is a projection") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  std::vector<double> v(777);
  for (auto& x : v) x = nd(rng);
  // Only the periodic filter is idempotent; the open one truncates its zero-padded output.
  const auto once = lowpass(FineSignal(0.0, 0.01, v), 40.0, Boundary::periodic);
  const auto twice = lowpass(once, 40.0, Boundary::periodic);
  double worst = 0.0, peak = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    worst = std::max(worst, std::abs(once.values[k] - twice.values[k]));
    peak = std::max(peak, std::abs(once.values[k]));
  }
  CHECK(worst <= 1e-10 * peak);
  const auto open = lowpass(FineSignal(0.0, 0.01, v), 40.0, Boundary::open);
  CHECK(energy(open.values) <= energy(v));
  CHECK_THROWS_AS(lowpass(FineSignal(0.0, 0.01, v), pi / 0.01), ValidationError);
}

TEST_CASE("sample decimates on integer ratios") {
  const FineSignal x(0.0, 0.5, {0, 1, 2, 3, 4});
  CHECK(sample(x, 0.5) == x.values);
  CHECK(sample(x, 1.0) == std::vector<double>{0, 2, 4});
  CHECK_THROWS_AS(sample(x, 0.75), ValidationError);
  const FineSignal ten(0.0, 1.0 / 80.0, std::vector<double>(800, 1.0));
  CHECK(sample(ten, 1.0 / 5.0).size() == 50);
}

TEST_CASE("normalize_peak") {
  const auto n = normalize_peak(FineSignal(0.0, 1.0, {0.5, -2.0, 1.0}));
  CHECK(n.scale == 2.0);
  CHECK(n.signal.values == std::vector<double>{0.25, -1.0, 0.5});
  const auto one = normalize_peak(FineSignal(0.0, 1.0, {1.0, -0.3}));
  CHECK(one.scale == 1.0);
  CHECK(one.signal.values == std::vector<double>{1.0, -0.3});
  CHECK_THROWS_AS(normalize_peak(FineSignal(0.0, 1.0, {0.0, 0.0})), ValidationError);
}

TEST_CASE("add_noise calibration and determinism") {
  std::vector<double> s(20000);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = 0.2 * std::sin(0.01 * k);
  CHECK(add_noise(s, kNoNoise, 1) == s);
  const auto a = add_noise(s, 0.0, 42);
  const auto b = add_noise(s, 0.0, 42);
  CHECK(a == b);
  CHECK(add_noise(s, 0.0, 43) != a);
  double pn = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) pn += (a[k] - s[k]) * (a[k] - s[k]);
  CHECK(pn / energy(s) == doctest::Approx(1.0).epsilon(0.1));
  const auto c = add_noise(s, 20.0, 42);
  pn = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) pn += (c[k] - s[k]) * (c[k] - s[k]);
  CHECK(pn / energy(s) == doctest::Approx(0.01).epsilon(0.1));
}
