#pragma once

#include <cstddef>
#include <vector>

namespace modsi {

/// Uniform grid description: t_k = t0 + k * dt, k in [0, length).
struct GridSpec {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t length = 0;

  double time(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * dt; }
  double duration() const noexcept { return static_cast<double>(length) * dt; }
};

/// How a finite window relates to the world outside it.
///  - open: the signal is zero outside the window (zero-padded transforms).
///  - periodic: the window is one period of a periodic signal.
enum class Boundary { open, periodic };

/// Real waveform on a uniform grid; stands in for a continuous-time signal.
struct FineSignal {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;

  FineSignal() = default;
  /// Throws ValidationError unless dt > 0, values non-empty and finite.
  FineSignal(double t0, double dt, std::vector<double> values);

  std::size_t size() const noexcept { return values.size(); }
  double time(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * dt; }
  GridSpec grid() const noexcept { return {t0, dt, values.size()}; }
};

}  // namespace modsi
