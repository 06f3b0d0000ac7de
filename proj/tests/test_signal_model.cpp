#include <cmath>
#include <random>

#include "doctest.h"
#include "modsi/errors.hpp"
#include "modsi/signal_model.hpp"

using namespace modsi;

namespace {
constexpr double pi = 3.141592653589793238462643383279502884;

double quadratic_spline(double u) {
  const double a = std::abs(u);
  if (a < 0.5) return 0.75 - a * a;
  if (a < 1.5) return 0.5 * (a - 1.5) * (a - 1.5);
  return 0.0;
}

double cubic_spline(double u) {
  const double a = std::abs(u);
  if (a < 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
  if (a < 2.0) return (2.0 - a) * (2.0 - a) * (2.0 - a) / 6.0;
  return 0.0;
}
}  // namespace

TEST_CASE("sinc uses the sin(u/2)/(u/2) convention") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(pi) == doctest::Approx(2.0 / pi).epsilon(1e-15));
  CHECK(std::abs(sinc(2.0 * pi)) < 1e-15);
  CHECK(sinc(-1.3) == sinc(1.3));
}

TEST_CASE("Lorentzian values and spectrum") {
  const auto g = Generator::lorentzian(0.5);
  CHECK(g.value(0.0) == doctest::Approx(0.636620).epsilon(1e-6));
  CHECK(g.value(0.0) == doctest::Approx(1.0 / (0.5 * pi)).epsilon(1e-15));
  CHECK(g.value(0.5) == doctest::Approx(1.0 / (0.5 * pi * 2.0)).epsilon(1e-15));
  CHECK(g.spectrum(0.0) == std::complex<double>(1.0, 0.0));
  CHECK(g.spectrum(pi).real() == doctest::Approx(0.207880).epsilon(1e-6));
  CHECK(g.spectrum(-pi).real() == doctest::Approx(std::exp(-pi / 2)).epsilon(1e-15));
  CHECK_THROWS_AS(Generator::lorentzian(0.0), ValidationError);
}

TEST_CASE("B-spline closed forms and half-open box") {
  CHECK(Generator::bspline(1, 1.0).value(0.5) == doctest::Approx(0.5));
  CHECK(Generator::bspline(0, 1.0).value(0.25) == 1.0);
  CHECK(Generator::bspline(0, 1.0).value(0.5) == 0.0);
  CHECK(Generator::bspline(0, 1.0).value(-0.5) == 1.0);
  // The 1/s factor keeps unit area and H(0) = 1.
  CHECK(Generator::bspline(1, 2.5).value(0.0) == doctest::Approx(0.4));
  CHECK(Generator::bspline(1, 2.5).spectrum(0.0).real() == 1.0);
}

TEST_CASE("scaled linear spline spectrum vanishes at 0.8*pi") {
  const auto g = Generator::bspline(1, 2.5);
  CHECK(std::abs(g.spectrum(0.8 * pi)) < 1e-20);
  CHECK(std::abs(g.spectrum(-0.8 * pi)) < 1e-20);
  CHECK(g.spectrum(0.4 * pi).real() == doctest::Approx(std::pow(sinc(pi), 2)).epsilon(1e-14));
}

TEST_CASE("spline recursion matches closed forms") {
  double worst1 = 0.0, worst2 = 0.0, worst3 = 0.0;
  for (double u = -2.5; u <= 2.5; u += 1.0 / 997.0) {
    worst1 = std::max(worst1, std::abs(bspline_recursive(1, u) - bspline_closed_form(1, u)));
    worst2 = std::max(worst2, std::abs(bspline_recursive(2, u) - quadratic_spline(u)));
    worst3 = std::max(worst3, std::abs(bspline_recursive(3, u) - cubic_spline(u)));
  }
  CHECK(worst1 < 1e-6);
  CHECK(worst2 < 1e-6);
  CHECK(worst3 < 1e-6);
}

TEST_CASE("higher-order spline support and area") {
  const auto g = Generator::bspline(3, 2.0);
  const auto [lo, hi] = g.support();
  CHECK(lo == -4.0);
  CHECK(hi == 4.0);
  CHECK(g.value(3.99) > 0.0);
  CHECK(g.value(4.0) == 0.0);
  CHECK(g.value(-4.01) == 0.0);
  double area = 0.0;
  const double h = 1e-3;
  for (double t = -4.0 + h / 2; t < 4.0; t += h) area += g.value(t) * h;
  CHECK(area == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(g.value(1.0) == doctest::Approx(cubic_spline(0.5) / 2.0).epsilon(1e-6));
}

TEST_CASE("tabulated generator") {
  const auto g = Generator::tabulated(FineSignal(0.0, 0.1, {0.0, 1.0, 3.0, 1.0}));
  CHECK(g.value(0.1) == 1.0);
  CHECK(g.value(0.15) == doctest::Approx(2.0));
  CHECK(g.value(-0.01) == 0.0);
  CHECK(g.value(0.31) == 0.0);
  CHECK(g.spectrum(0.0).real() == doctest::Approx(0.5));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  std::vector<double> v(257);
  for (auto& x : v) x = n(rng);
  const auto r = Generator::tabulated(FineSignal(-0.3, 0.004, v));
  for (double w : {0.1, 1.0, 17.3, 250.0, 700.0}) {
    const auto a = r.spectrum(w), b = r.spectrum(-w);
    CHECK(std::abs(a - std::conj(b)) <= 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("synthesize: trivial sums") {
  const GridSpec grid{-5.0, 0.05, 200};
  const auto g = Generator::lorentzian(0.5);
  const auto delta = synthesize(SISpec{1.0, 0, {1.0}, g}, grid);
  for (std::size_t k = 0; k < grid.length; ++k) CHECK(delta.values[k] == doctest::Approx(g.value(grid.time(k))));
  const auto zero = synthesize(SISpec{1.0, -3, std::vector<double>(7, 0.0), g}, grid);
  for (double v : zero.values) CHECK(v == 0.0);

  const auto boxes = synthesize(SISpec{1.0, 0, {1.0, 1.0}, Generator::bspline(0, 1.0)}, GridSpec{0.5, 0.25, 1});
  CHECK(boxes.values[0] == 1.0);

  CHECK_THROWS_AS(synthesize(SISpec{1.0, 0, {1.0}, g}, GridSpec{0.0, 1.0, 10}), ValidationError);
}

TEST_CASE("synthesize: linearity and shift covariance") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(12), b(12), c(12);
  for (std::size_t i = 0; i < 12; ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
    c[i] = 2.5 * a[i] - 0.75 * b[i];
  }
  const GridSpec grid{-10.0, 1.0 / 40.0, 1600};
  for (const auto& g : {Generator::lorentzian(0.25), Generator::bspline(1, 2.5), Generator::bspline(3, 1.0)}) {
    const auto xa = synthesize(SISpec{1.0, 0, a, g}, grid);
    const auto xb = synthesize(SISpec{1.0, 0, b, g}, grid);
    const auto xc = synthesize(SISpec{1.0, 0, c, g}, grid);
    double peak = 0.0, worst = 0.0;
    for (std::size_t k = 0; k < grid.length; ++k) {
      peak = std::max(peak, std::abs(xc.values[k]));
      worst = std::max(worst, std::abs(xc.values[k] - (2.5 * xa.values[k] - 0.75 * xb.values[k])));
    }
    CHECK(worst <= 1e-12 * peak);

    const auto shifted = synthesize(SISpec{1.0, 1, a, g}, grid);
    for (std::size_t k = 40; k < grid.length; ++k) REQUIRE(shifted.values[k] == xa.values[k - 40]);
  }
}

TEST_CASE("periodized Lorentzian agrees with the image sum") {
  const auto g = Generator::lorentzian(0.5);
  const double L = 12.0;
  for (double t : {0.0, 0.3, 2.7, -5.9}) {
    double acc = 0.0;
    for (int m = -200000; m <= 200000; ++m) acc += g.value(t - m * L);
    CHECK(g.periodic_value(t, L) == doctest::Approx(acc).epsilon(1e-6));
  }
}

TEST_CASE("periodic sinc synthesis interpolates the coefficients") {
  const double T = 1.0;
  const std::size_t nw = 31, per = 8;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(nw);
  for (auto& v : a) v = u(rng);
  const auto x = synthesize(SISpec{T, 0, a, Generator::sinc(pi / T)}, GridSpec{0.0, T / per, nw * per},
                            Boundary::periodic);
  for (std::size_t n = 0; n < nw; ++n) CHECK(x.values[n * per] == doctest::Approx(a[n] / T).epsilon(1e-10));
  CHECK_THROWS_AS(synthesize(SISpec{T, 0, a, Generator::sinc(pi)}, GridSpec{0.0, 0.1, 315}, Boundary::periodic),
                  ValidationError);
}
