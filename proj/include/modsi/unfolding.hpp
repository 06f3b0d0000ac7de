#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modsi/analog_chain.hpp"

namespace modsi {

enum class UnfoldMethod { itoh, higher_order_difference };

std::string to_string(UnfoldMethod m);

struct UnfoldReport {
  std::vector<double> samples;
  /// samples[k] = folded[k] + 2λ·offsets[k].
  std::vector<std::int64_t> offsets;
  UnfoldMethod method = UnfoldMethod::itoh;
  /// Largest distance (in units of 2λ) between a rounded quantity and its lattice point.
  double max_slack = 0.0;
};

/// First-difference unwrapping. Exact when |y[n+1] − y[n]| < λ for the true signal and
/// the anchor places sample 0 correctly. Without an anchor, sample 0 is assumed in range.
/// A violated precondition is not detectable here and silently corrupts the output.
UnfoldReport unfold_itoh(const FoldedSamples& folded, std::optional<double> anchor = std::nullopt);

struct HodOptions {
  int order = 3;
  /// Constant-estimation rounding tolerance, in units of 2λ.
  double slack = 0.25;
  /// Bound β ≥ ‖y‖∞ used to pick the global lattice offset.
  double amplitude_bound = std::numeric_limits<double>::infinity();
};

/// Higher-order-difference unfolding: fold the Nth difference of the measurements, snap
/// the residual to 2λℤ and sum back N times. Each summation constant is estimated from
/// the boundedness of the next-lower residual; the last one comes from the
/// first-sample-in-range assumption, moved to the nearest lattice offset that respects β.
/// Throws LatticeRoundingError when an estimate is farther than the slack from the
/// lattice or no offset meets β.
UnfoldReport unfold_hod(const FoldedSamples& folded, const HodOptions& options = {});

/// Pluggable unfolding backend.
class Unfolder {
 public:
  virtual ~Unfolder() = default;
  virtual UnfoldReport unfold(const FoldedSamples& folded) const = 0;
  virtual std::string name() const = 0;
};

class ItohUnfolder final : public Unfolder {
 public:
  UnfoldReport unfold(const FoldedSamples& folded) const override { return unfold_itoh(folded); }
  std::string name() const override { return "itoh"; }
};

class HodUnfolder final : public Unfolder {
 public:
  explicit HodUnfolder(HodOptions options = {}) : options_(options) {}
  UnfoldReport unfold(const FoldedSamples& folded) const override { return unfold_hod(folded, options_); }
  std::string name() const override { return "hod"; }
  const HodOptions& options() const noexcept { return options_; }

 private:
  HodOptions options_;
};

struct UnfolderSpec {
  UnfoldMethod method = UnfoldMethod::higher_order_difference;
  HodOptions hod;
};

std::unique_ptr<Unfolder> make_unfolder(const UnfolderSpec& spec);

}  // namespace modsi
