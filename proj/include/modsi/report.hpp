#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "modsi/experiment.hpp"

namespace modsi {

/// Columns: snr_db, mse_bl_db, mse_coef_db, n_fail, n_trials.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct Curve {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained SVG line plot.
void write_svg(std::ostream& os, const std::string& title, const std::string& xlabel, const std::string& ylabel,
               const std::vector<Curve>& curves);

/// BL-error and coefficient-error curves of one sweep.
std::vector<Curve> sweep_curves(const std::vector<SweepRow>& rows, const std::string& suffix = "");

/// Fine-grid stages of one acquisition: t, x, y = LPF(x), fold(y). x and y share y's scale.
void write_demo_csv(std::ostream& os, const Acquisition& acq, double lambda);

}  // namespace modsi
