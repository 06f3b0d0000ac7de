#include "modsi/unfolding.hpp"

#include <algorithm>
#include <cmath>

#include "modsi/errors.hpp"

namespace modsi {
namespace {

struct Rounded {
  std::int64_t value;
  double slack;
};

Rounded round_lattice(double units) {
  const double r = std::round(units);
  return {static_cast<std::int64_t>(r), std::abs(units - r)};
}

UnfoldReport assemble(const FoldedSamples& folded, std::vector<std::int64_t> offsets, UnfoldMethod method,
                      double slack) {
  const double period = 2.0 * folded.lambda;
  UnfoldReport rep;
  rep.samples.resize(offsets.size());
  for (std::size_t k = 0; k < offsets.size(); ++k)
    rep.samples[k] = folded.values[k] + period * static_cast<double>(offsets[k]);
  rep.offsets = std::move(offsets);
  rep.method = method;
  rep.max_slack = slack;
  return rep;
}

double peak_with_offset(const FoldedSamples& folded, const std::vector<std::int64_t>& offsets, std::int64_t c) {
  const double period = 2.0 * folded.lambda;
  double peak = 0.0;
  for (std::size_t k = 0; k < offsets.size(); ++k)
    peak = std::max(peak, std::abs(folded.values[k] + period * static_cast<double>(offsets[k] + c)));
  return peak;
}

}  // namespace

std::string to_string(UnfoldMethod m) { return m == UnfoldMethod::itoh ? "itoh" : "hod"; }

UnfoldReport unfold_itoh(const FoldedSamples& folded, std::optional<double> anchor) {
  const auto& f = folded.values;
  const double lambda = folded.lambda;
  const double period = 2.0 * lambda;
  std::vector<std::int64_t> offsets(f.size(), 0);
  double slack = 0.0;
  if (f.empty()) return assemble(folded, std::move(offsets), UnfoldMethod::itoh, slack);

  if (anchor) {
    const auto r = round_lattice((*anchor - f[0]) / period);
    offsets[0] = r.value;
  }
  for (std::size_t n = 1; n < f.size(); ++n) {
    const double d = f[n] - f[n - 1];
    const auto r = round_lattice((fold(d, lambda) - d) / period);
    slack = std::max(slack, r.slack);
    offsets[n] = offsets[n - 1] + r.value;
  }
  return assemble(folded, std::move(offsets), UnfoldMethod::itoh, slack);
}

UnfoldReport unfold_hod(const FoldedSamples& folded, const HodOptions& options) {
  const int N = options.order;
  if (N < 1) throw ValidationError("unfold_hod: order must be at least 1");
  if (!(options.slack > 0.0 && options.slack <= 0.5)) throw ValidationError("unfold_hod: slack must lie in (0, 0.5]");
  if (!(options.amplitude_bound > 0.0)) throw ValidationError("unfold_hod: amplitude bound must be positive");
  const auto& f = folded.values;
  if (f.size() <= static_cast<std::size_t>(N))
    throw ValidationError("unfold_hod: need more samples than the difference order");

  const double lambda = folded.lambda;
  const double period = 2.0 * lambda;

  // Nth difference of the measurements.
  std::vector<double> d(f);
  for (int j = 0; j < N; ++j) {
    for (std::size_t k = 0; k + 1 < d.size(); ++k) d[k] = d[k + 1] - d[k];
    d.pop_back();
  }

  // Δᴺ of the residual, in lattice units: M_λ(Δᴺf) estimates Δᴺy.
  double slack = 0.0;
  std::vector<std::int64_t> r(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto q = round_lattice((fold(d[k], lambda) - d[k]) / period);
    r[k] = q.value;
    slack = std::max(slack, q.slack);
  }

  for (int j = N; j >= 1; --j) {
    // One summation: s[0] = 0, s[k+1] = s[k] + r[k]; s is Δ^{j−1} of the residual up to a constant.
    std::vector<std::int64_t> s(r.size() + 1, 0);
    for (std::size_t k = 0; k < r.size(); ++k) s[k + 1] = s[k] + r[k];
    if (j > 1) {
      // The true Δ^{j−1} residual sums to a bounded telescoped difference, so its mean
      // over the record is near zero; that fixes the constant.
      long double total = 0.0L;
      for (auto v : s) total += static_cast<long double>(v);
      const double estimate = static_cast<double>(-total / static_cast<long double>(s.size()));
      const auto c = round_lattice(estimate);
      if (c.slack > options.slack)
        throw LatticeRoundingError("unfold_hod: summation constant at difference order " + std::to_string(j - 1) +
                                       " is off-lattice (slack " + std::to_string(c.slack) + ")",
                                   c.slack);
      slack = std::max(slack, c.slack);
      for (auto& v : s) v += c.value;
    }
    r = std::move(s);
  }

  // r now holds the residual with r[0] = 0: the first-sample-in-range guess.
  const double beta = options.amplitude_bound;
  std::int64_t shift = 0;
  if (peak_with_offset(folded, r, 0) > beta) {
    const double peak = peak_with_offset(folded, r, 0);
    const auto reach = static_cast<std::int64_t>(std::ceil(peak / period)) + 1;
    bool found = false;
    for (std::int64_t m = 1; m <= reach && !found; ++m) {
      for (std::int64_t c : {m, -m}) {
        if (peak_with_offset(folded, r, c) <= beta) {
          shift = c;
          found = true;
          break;
        }
      }
    }
    if (!found)
      throw LatticeRoundingError("unfold_hod: no global lattice offset satisfies the amplitude bound", slack);
  }
  for (auto& v : r) v += shift;
  return assemble(folded, std::move(r), UnfoldMethod::higher_order_difference, slack);
}

std::unique_ptr<Unfolder> make_unfolder(const UnfolderSpec& spec) {
  if (spec.method == UnfoldMethod::itoh) return std::make_unique<ItohUnfolder>();
  return std::make_unique<HodUnfolder>(spec.hod);
}

}  // namespace modsi
