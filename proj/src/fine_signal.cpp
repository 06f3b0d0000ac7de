#include <cmath>

#include "modsi/errors.hpp"
#include "modsi/fine_signal.hpp"

namespace modsi {

FineSignal::FineSignal(double t0_, double dt_, std::vector<double> values_)
    : t0(t0_), dt(dt_), values(std::move(values_)) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("FineSignal: dt must be positive");
  if (!std::isfinite(t0)) throw ValidationError("FineSignal: t0 must be finite");
  if (values.empty()) throw ValidationError("FineSignal: empty value array");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("FineSignal: non-finite sample");
}

}  // namespace modsi
