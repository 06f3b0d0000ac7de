#include "modsi/experiment.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <random>
#include <thread>

#include "modsi/errors.hpp"

namespace modsi {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr std::uint64_t kCoeffStream = 0x636f656666ULL;  // "coeff"

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double sum_squares(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// Midpoint rule on [a, b]; the integrands here are smooth or piecewise smooth.
template <class F>
double integrate(F&& f, double a, double b, std::size_t n = 1u << 16) {
  const double h = (b - a) / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += f(a + (static_cast<double>(i) + 0.5) * h);
  return acc * h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix(splitmix(splitmix(seed) ^ a) ^ b);
}

double to_db(double ratio) { return ratio > 1e-30 ? 10.0 * std::log10(ratio) : -300.0; }

void SweepConfig::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("T must be positive");
  if (count == 0) throw ConfigError("count must be at least 1");
  if (!(coeff_low < coeff_high)) throw ConfigError("coefficient law needs low < high");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
  if (oversampling < 2) throw ConfigError("oversampling must be at least 2");
  if (refinement < 1) throw ConfigError("refinement must be at least 1");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (snr_db.empty()) throw ConfigError("snr_db list is empty");
  for (double s : snr_db)
    if (std::isnan(s)) throw ConfigError("snr_db entries must be numbers");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be non-negative");
  if (2 * interior_drop >= count) throw ConfigError("interior_drop leaves no coefficients to score");
  if (mixer && std::abs(mixer->T() - T) > 1e-12 * T) throw ConfigError("mixer period must equal T");
}

Experiment::Experiment(SweepConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const auto bins = band_grid(cfg_.window(), cfg_.T);
  R_ = cfg_.mixer ? mixer_to_R(cfg_.generator, *cfg_.mixer, bins) : generator_response(cfg_.generator, bins);
  try {
    filter_ = build_correction(R_, cfg_.epsilon);
  } catch (const SingularFilterError&) {
    filter_.reset();
  }
}

Acquisition Experiment::acquire(std::size_t trial) const {
  Acquisition acq;
  std::mt19937_64 rng(derive_seed(cfg_.seed, trial, kCoeffStream));
  std::uniform_real_distribution<double> law(cfg_.coeff_low, cfg_.coeff_high);
  acq.coeffs.resize(cfg_.count);
  for (auto& a : acq.coeffs) a = law(rng);

  acq.window.assign(cfg_.window(), 0.0);
  std::copy(acq.coeffs.begin(), acq.coeffs.end(), acq.window.begin() + static_cast<long>(cfg_.pad_left));

  const auto n0 = -static_cast<long>(cfg_.pad_left);
  const std::size_t per_period = cfg_.oversampling * cfg_.refinement;
  const GridSpec grid{static_cast<double>(n0) * cfg_.T, cfg_.dt(), cfg_.window() * per_period};
  acq.x = synthesize(SISpec{cfg_.T, 0, acq.coeffs, cfg_.generator}, grid, Boundary::periodic);

  FineSignal mixed = cfg_.mixer ? mix(acq.x, *cfg_.mixer) : acq.x;
  FineSignal y = lowpass(mixed, kPi / cfg_.T, Boundary::periodic);
  auto norm = normalize_peak(y);
  acq.y = std::move(norm.signal);
  acq.scale = norm.scale;
  acq.y_samples = sample(acq.y, cfg_.Ts());
  acq.folded = fold(acq.y_samples, cfg_.lambda);
  return acq;
}

FoldedSamples Experiment::measure(const Acquisition& acq, double snr_db, std::size_t trial) const {
  const auto seed = derive_seed(cfg_.seed, trial, std::bit_cast<std::uint64_t>(snr_db));
  auto noisy = add_noise(acq.folded, snr_db, seed);
  if (cfg_.noise_stage == NoiseStage::pre_fold) {
    // Same noise realization, calibrated against the folded power, applied before the fold.
    std::vector<double> pre(acq.y_samples.size());
    for (std::size_t k = 0; k < pre.size(); ++k) pre[k] = acq.y_samples[k] + (noisy[k] - acq.folded[k]);
    noisy = fold(pre, cfg_.lambda);
  }
  return FoldedSamples::measured(cfg_.lambda, cfg_.Ts(), std::move(noisy));
}

std::vector<double> Experiment::recover(const std::vector<double>& unfolded, double scale) const {
  if (!filter_) throw SingularFilterError(build_correction(R_, 1.0).zero_report, cfg_.T);
  auto ex = extract_coefficients(unfolded, *filter_, cfg_.T, cfg_.oversampling);
  for (auto& a : ex.coeffs) a *= scale;
  return ex.coeffs;
}

TrialResult Experiment::evaluate(const Acquisition& acq, double snr_db, std::size_t trial) const {
  TrialResult res;
  res.trial = trial;
  res.snr_db = snr_db;
  res.mse_bl = 1.0;
  res.mse_coef = 1.0;
  res.mse_bl_best_offset = 1.0;
  if (!filter_) res.flags |= flag_singular_filter;

  const auto measured = measure(acq, snr_db, trial);
  UnfoldReport unfolded;
  try {
    unfolded = make_unfolder(cfg_.unfolder)->unfold(measured);
  } catch (const LatticeRoundingError&) {
    res.flags |= flag_lattice_failure;
    return res;
  }

  const double y_energy = sum_squares(acq.y_samples);
  const double period = 2.0 * cfg_.lambda;
  double best = std::numeric_limits<double>::infinity();
  for (int shift = -2; shift <= 2; ++shift) {
    double e = 0.0;
    for (std::size_t k = 0; k < acq.y_samples.size(); ++k) {
      const double d = unfolded.samples[k] + period * shift - acq.y_samples[k];
      e += d * d;
    }
    e /= y_energy;
    if (shift == 0) res.mse_bl = e;
    if (e < best) {
      best = e;
      res.best_offset = shift;
    }
  }
  res.mse_bl_best_offset = best;
  if (res.failed()) return res;

  const auto ahat = recover(unfolded.samples, acq.scale);
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t i = cfg_.interior_drop; i + cfg_.interior_drop < cfg_.count; ++i) {
    const double d = ahat[cfg_.pad_left + i] - acq.coeffs[i];
    err += d * d;
    ref += acq.coeffs[i] * acq.coeffs[i];
  }
  res.mse_coef = err / ref;
  return res;
}

TrialResult run_trial(const SweepConfig& cfg, double snr_db, std::size_t trial) {
  const Experiment exp(cfg);
  return exp.evaluate(exp.acquire(trial), snr_db, trial);
}

SweepResult run_sweep(const SweepConfig& cfg, unsigned workers) {
  const Experiment exp(cfg);
  const std::size_t n_snr = cfg.snr_db.size();
  const std::size_t n_trials = cfg.trials;
  std::vector<TrialResult> results(n_snr * n_trials);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t = next++; t < n_trials; t = next++) {
      const auto acq = exp.acquire(t);
      for (std::size_t s = 0; s < n_snr; ++s) results[s * n_trials + t] = exp.evaluate(acq, cfg.snr_db[s], t);
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_trials));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  SweepResult out;
  for (std::size_t s = 0; s < n_snr; ++s) {
    SweepRow row;
    row.snr_db = cfg.snr_db[s];
    row.n_trials = n_trials;
    for (std::size_t t = 0; t < n_trials; ++t) {
      const auto& r = results[s * n_trials + t];
      row.mse_bl_db += to_db(r.mse_bl);
      row.mse_coef_db += to_db(r.mse_coef);
      if (r.failed()) ++row.n_fail;
    }
    row.mse_bl_db /= static_cast<double>(n_trials);
    row.mse_coef_db /= static_cast<double>(n_trials);
    out.rows.push_back(row);
  }
  out.trials = std::move(results);
  return out;
}

double energy_loss(const Generator& g, double T, const std::optional<MixerSpec>& mixer) {
  if (!(T > 0.0)) throw ValidationError("energy_loss: T must be positive");
  const double band = kPi / T;
  const bool plain = !mixer || mixer->is_identity();

  if (const auto* k = std::get_if<Lorentzian>(&g.kind()); k && plain) return std::exp(-2.0 * k->gamma * band);
  if (const auto* k = std::get_if<Sinc>(&g.kind()); k && plain)
    return k->bandwidth <= band ? 0.0 : 1.0 - band / k->bandwidth;

  // With white coefficients the expected energy density is proportional to |R(ω)|².
  auto R = [&](double w) -> std::complex<double> {
    if (plain) return g.spectrum(w);
    std::complex<double> acc = 0.0;
    for (const auto& [l, c] : mixer->coeffs()) acc += c * g.spectrum(w + 2.0 * kPi * l / T);
    return acc;
  };
  const double inside = integrate([&](double w) { return std::norm(R(w)); }, -band, band);

  double total = 0.0;
  if (const auto* k = std::get_if<Lorentzian>(&g.kind())) {
    // ∫ e^{−γ|ω+u|} e^{−γ|ω+v|} dω = e^{−γ|d|}(|d| + 1/γ), d = u − v.
    for (const auto& [l, cl] : mixer->coeffs())
      for (const auto& [m, cm] : mixer->coeffs()) {
        const double d = std::abs(2.0 * kPi * (l - m) / T);
        total += (cl * std::conj(cm)).real() * std::exp(-k->gamma * d) * (d + 1.0 / k->gamma);
      }
  } else if (const auto* k = std::get_if<Sinc>(&g.kind())) {
    // Overlap of two shifted unit boxes of half-width Ω.
    for (const auto& [l, cl] : mixer->coeffs())
      for (const auto& [m, cm] : mixer->coeffs()) {
        const double d = std::abs(2.0 * kPi * (l - m) / T);
        total += (cl * std::conj(cm)).real() * std::max(0.0, 2.0 * k->bandwidth - d);
      }
  } else {
    // Compact pulse: 2π∫|h(t)p(t)|² dt equals ∫|R(ω)|² dω by Parseval.
    const auto [lo, hi] = g.support();
    const auto* tab = std::get_if<Tabulated>(&g.kind());
    double energy = 0.0;
    if (tab && plain) {
      for (double v : tab->pulse.values) energy += v * v;
      energy *= tab->pulse.dt;
    } else {
      energy = integrate(
          [&](double t) {
            const double p = plain ? 1.0 : mixer->value(t).real();
            const double h = g.value(t) * p;
            return h * h;
          },
          lo, hi, 1u << 18);
    }
    total = 2.0 * kPi * energy;
  }
  if (!(total > 0.0)) throw ValidationError("energy_loss: generator has no energy");
  return std::clamp(1.0 - inside / total, 0.0, 1.0);
}

}  // namespace modsi
