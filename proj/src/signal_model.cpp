#include "modsi/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "modsi/errors.hpp"

namespace modsi {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Samples per unit of the box used by the spline recursion.
constexpr int kSplineSubdivision = 1024;
constexpr int kMaxSplineOrder = 16;

// βⁿ on u_j = −h + (j + h)·du with h = (n+1)/2, j = 0..J−1: the positions reached by
// summing n+1 midpoint-sampled boxes. Repeated convolution with a box of K ones is
// a moving sum, scaled by du per convolution.
std::vector<double> build_spline_table(int order) {
  const int K = kSplineSubdivision;
  const double du = 1.0 / K;
  std::vector<double> cur(K, 1.0);
  for (int step = 0; step < order; ++step) {
    std::vector<double> next(cur.size() + K - 1, 0.0);
    double running = 0.0;
    for (std::size_t j = 0; j < next.size(); ++j) {
      if (j < cur.size()) running += cur[j];
      if (j >= static_cast<std::size_t>(K)) running -= cur[j - K];
      next[j] = running * du;
    }
    cur = std::move(next);
  }
  return cur;
}

std::shared_ptr<const std::vector<double>> spline_table(int order) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const std::vector<double>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_shared<const std::vector<double>>(build_spline_table(order));
  return slot;
}

double spline_from_table(const std::vector<double>& table, int order, double u) {
  const double h = 0.5 * (order + 1);
  if (u < -h || u >= h) return 0.0;
  const double du = 1.0 / kSplineSubdivision;
  const double p = (u + h) / du - h;  // fractional index into the table
  const double last = static_cast<double>(table.size() - 1);
  if (p < 0.0) return table.front() * (p + h) / h;
  if (p > last) return table.back() * (last + h - p) / h;
  const auto i = static_cast<std::size_t>(std::floor(p));
  if (i + 1 >= table.size()) return table.back();
  const double f = p - static_cast<double>(i);
  return table[i] * (1.0 - f) + table[i + 1] * f;
}

double tabulated_value(const FineSignal& pulse, double t) {
  const double p = (t - pulse.t0) / pulse.dt;
  const double last = static_cast<double>(pulse.values.size() - 1);
  if (p < 0.0 || p > last) return 0.0;
  const auto i = static_cast<std::size_t>(std::floor(p));
  if (i + 1 >= pulse.values.size()) return pulse.values.back();
  const double f = p - static_cast<double>(i);
  return pulse.values[i] * (1.0 - f) + pulse.values[i + 1] * f;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double sinc(double u) noexcept {
  if (u == 0.0) return 1.0;
  const double h = 0.5 * u;
  return std::sin(h) / h;
}

double bspline_closed_form(int order, double u) {
  switch (order) {
    case 0:
      return (u >= -0.5 && u < 0.5) ? 1.0 : 0.0;
    case 1:
      return std::max(0.0, 1.0 - std::abs(u));
    default:
      throw ValidationError("closed-form B-spline is provided for orders 0 and 1 only");
  }
}

Generator::Generator(Kind kind) : kind_(std::move(kind)) {}

Generator Generator::lorentzian(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("Lorentzian: gamma must be positive");
  return Generator(Lorentzian{gamma});
}

Generator Generator::bspline(int order, double scale) {
  if (order < 0 || order > kMaxSplineOrder)
    throw ValidationError("BSpline: order must lie in [0, " + std::to_string(kMaxSplineOrder) + "]");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("BSpline: scale must be positive");
  Generator g(BSpline{order, scale});
  if (order >= 2) g.spline_table_ = spline_table(order);
  return g;
}

Generator Generator::sinc(double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw ValidationError("Sinc: bandwidth must be positive");
  return Generator(Sinc{bandwidth});
}

Generator Generator::tabulated(FineSignal pulse) {
  // Re-run the FineSignal checks in case the caller filled the struct by hand.
  FineSignal checked(pulse.t0, pulse.dt, std::move(pulse.values));
  return Generator(Tabulated{std::move(checked)});
}

double bspline_recursive(int order, double u) {
  if (order < 0 || order > kMaxSplineOrder) throw ValidationError("bspline_recursive: order out of range");
  return spline_from_table(*spline_table(order), order, u);
}

double Generator::value(double t) const {
  return std::visit(
      overloaded{
          [&](const Lorentzian& k) {
            const double r = t / k.gamma;
            return 1.0 / (kPi * k.gamma * (1.0 + r * r));
          },
          [&](const BSpline& k) {
            const double u = t / k.scale;
            const double b = k.order <= 1 ? bspline_closed_form(k.order, u)
                                          : spline_from_table(*spline_table_, k.order, u);
            return b / k.scale;
          },
          [&](const Sinc& k) { return t == 0.0 ? k.bandwidth / kPi : std::sin(k.bandwidth * t) / (kPi * t); },
          [&](const Tabulated& k) { return tabulated_value(k.pulse, t); },
      },
      kind_);
}

std::complex<double> Generator::spectrum(double omega) const {
  return std::visit(
      overloaded{
          [&](const Lorentzian& k) { return std::complex<double>(std::exp(-k.gamma * std::abs(omega)), 0.0); },
          [&](const BSpline& k) {
            return std::complex<double>(std::pow(modsi::sinc(k.scale * omega), k.order + 1), 0.0);
          },
          [&](const Sinc& k) {
            const double a = std::abs(omega);
            return std::complex<double>(a < k.bandwidth ? 1.0 : (a == k.bandwidth ? 0.5 : 0.0), 0.0);
          },
          [&](const Tabulated& k) {
            // Riemann sum of ∫ h(t) e^{−jωt} dt on the pulse grid.
            std::complex<double> acc = 0.0;
            for (std::size_t i = 0; i < k.pulse.values.size(); ++i)
              acc += k.pulse.values[i] * std::polar(1.0, -omega * k.pulse.time(i));
            return acc * k.pulse.dt;
          },
      },
      kind_);
}

double Generator::periodic_value(double t, double L) const {
  if (!(L > 0.0)) throw ValidationError("periodic_value: period must be positive");
  if (const auto* k = std::get_if<Lorentzian>(&kind_)) {
    // Poisson summation of exp(−γ|ω|) over the harmonics 2πm/L.
    const double b = 2.0 * kPi * k->gamma / L;
    return std::sinh(b) / (L * (std::cosh(b) - std::cos(2.0 * kPi * t / L)));
  }
  if (const auto* k = std::get_if<Sinc>(&kind_)) {
    // Finite Fourier series: only harmonics inside the band survive.
    const double w0 = 2.0 * kPi / L;
    double acc = spectrum(0.0).real();
    for (long m = 1;; ++m) {
      const double w = w0 * static_cast<double>(m);
      if (w > k->bandwidth) break;
      acc += 2.0 * spectrum(w).real() * std::cos(w * t);
    }
    return acc / L;
  }
  const auto [lo, hi] = support();
  const auto m_first = static_cast<long>(std::ceil((t - hi) / L));
  const auto m_last = static_cast<long>(std::floor((t - lo) / L));
  double acc = 0.0;
  for (long m = m_first; m <= m_last; ++m) acc += value(t - static_cast<double>(m) * L);
  return acc;
}

std::pair<double, double> Generator::support() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(overloaded{
                        [](const Lorentzian&) { return std::pair{-inf, inf}; },
                        [](const Sinc&) { return std::pair{-inf, inf}; },
                        [](const BSpline& k) {
                          const double h = 0.5 * k.scale * (k.order + 1);
                          return std::pair{-h, h};
                        },
                        [](const Tabulated& k) {
                          return std::pair{k.pulse.t0, k.pulse.time(k.pulse.values.size() - 1)};
                        },
                    },
                    kind_);
}

std::string Generator::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Lorentzian& k) { os << "lorentzian(gamma=" << k.gamma << ")"; },
                 [&](const BSpline& k) { os << "bspline(order=" << k.order << ", scale=" << k.scale << ")"; },
                 [&](const Sinc& k) { os << "sinc(bandwidth=" << k.bandwidth << ")"; },
                 [&](const Tabulated& k) {
                   os << "tabulated(" << k.pulse.values.size() << " samples, dt=" << k.pulse.dt << ")";
                 },
             },
             kind_);
  return os.str();
}

double generator_value(const Generator& g, double t) { return g.value(t); }
std::complex<double> generator_spectrum(const Generator& g, double omega) { return g.spectrum(omega); }

void SISpec::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("SISpec: T must be positive");
  if (coeffs.empty()) throw ValidationError("SISpec: coefficient window is empty");
  for (double a : coeffs)
    if (!std::isfinite(a)) throw ValidationError("SISpec: non-finite coefficient");
}

FineSignal synthesize(const SISpec& spec, const GridSpec& grid, Boundary boundary) {
  spec.validate();
  if (!(grid.dt > 0.0) || grid.length == 0) throw ValidationError("synthesize: invalid grid");
  if (grid.dt >= spec.T) throw ValidationError("synthesize: grid step must be finer than T");

  const auto M = grid.length;
  const double L = grid.duration();
  if (boundary == Boundary::periodic) {
    const double periods = L / spec.T;
    if (std::abs(periods - std::round(periods)) > 1e-9 * periods)
      throw ValidationError("synthesize: periodic window must span an integer number of periods T");
  }

  std::vector<double> out(M, 0.0);
  const double ratio = spec.T / grid.dt;
  const bool integer_step = std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio;

  if (integer_step) {
    // t_k − nT = t0 + (k − n·s)·dt: one table of the pulse serves every shift.
    const auto s = static_cast<long>(std::llround(ratio));
    const auto sM = static_cast<long>(M);
    if (boundary == Boundary::periodic) {
      std::vector<double> g(M);
      for (std::size_t j = 0; j < M; ++j) g[j] = spec.generator.periodic_value(grid.time(j), L);
      for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
        const double a = spec.coeffs[i];
        if (a == 0.0) continue;
        const long shift = (((spec.n0 + static_cast<long>(i)) * s) % sM + sM) % sM;
        for (long k = 0; k < sM; ++k) {
          long j = k - shift;
          if (j < 0) j += sM;
          out[static_cast<std::size_t>(k)] += a * g[static_cast<std::size_t>(j)];
        }
      }
    } else {
      const long jmin = -spec.n1() * s;
      const long jmax = (sM - 1) - spec.n0 * s;
      std::vector<double> g(static_cast<std::size_t>(jmax - jmin + 1));
      for (long j = jmin; j <= jmax; ++j)
        g[static_cast<std::size_t>(j - jmin)] = spec.generator.value(grid.t0 + static_cast<double>(j) * grid.dt);
      for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
        const double a = spec.coeffs[i];
        if (a == 0.0) continue;
        const long offset = (spec.n0 + static_cast<long>(i)) * s + jmin;
        for (long k = 0; k < sM; ++k) out[static_cast<std::size_t>(k)] += a * g[static_cast<std::size_t>(k - offset)];
      }
    }
  } else {
    for (std::size_t k = 0; k < M; ++k) {
      const double t = grid.time(k);
      double acc = 0.0;
      for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
        const double a = spec.coeffs[i];
        if (a == 0.0) continue;
        const double tau = t - static_cast<double>(spec.n0 + static_cast<long>(i)) * spec.T;
        acc += a * (boundary == Boundary::periodic ? spec.generator.periodic_value(tau, L) : spec.generator.value(tau));
      }
      out[k] = acc;
    }
  }
  return FineSignal(grid.t0, grid.dt, std::move(out));
}

}  // namespace modsi
