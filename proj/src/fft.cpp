#include "modsi/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <mutex>

namespace modsi::fft {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using Buffer = std::unique_ptr<fftw_complex[], FftwFree>;

Buffer allocate(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(n, 1)));
  if (p == nullptr) throw std::bad_alloc();
  return Buffer(p);
}

cvec run(std::span<const std::complex<double>> x, int sign) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  Buffer in = allocate(n);
  Buffer out = allocate(n);
  std::memcpy(in.get(), x.data(), sizeof(fftw_complex) * n);

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  cvec result(n);
  std::memcpy(static_cast<void*>(result.data()), out.get(), sizeof(fftw_complex) * n);
  return result;
}

}  // namespace

cvec forward(std::span<const std::complex<double>> x) { return run(x, FFTW_FORWARD); }

cvec forward(std::span<const double> x) {
  cvec c(x.begin(), x.end());
  return run(c, FFTW_FORWARD);
}

cvec inverse(std::span<const std::complex<double>> X) {
  cvec r = run(X, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(X.size());
  for (auto& v : r) v *= scale;
  return r;
}

}  // namespace modsi::fft
