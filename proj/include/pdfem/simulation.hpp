#pragma once

#include "pdfem/analysis.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pdfem {

struct LoadSchedule {
  double R0 = 1.0;
  double dR_max = 1.0;
  int max_steps = 100;
  double max_load = 1e300;
  double max_crack_length = 1e300;
  int max_growth_steps = 1 << 30;
};

enum class StepEvent { Grow, Load, Stop };

struct HistoryRow {
  int step = 0;
  double load = 0.0;
  double tip_x = 0.0, tip_y = 0.0;
  double K_I = 0.0, K_II = 0.0, K_eq = 0.0, theta_c = 0.0;
  double reaction = 0.0;
  StepEvent event = StepEvent::Stop;
};

struct SimulationState {
  std::vector<HistoryRow> history;
  Vec u;
  double load = 0.0;
  int growth_steps = 0;
  std::string stop_reason;
};

/// Tolerance on the onset test K_eq >= K_Ic, relative to K_Ic.
inline constexpr double kOnsetTolerance = 1e-9;

using StepCallback = std::function<void(const Model&, const StaticResult&, const HistoryRow&)>;

/// Quasi-static loop: solve, evaluate SIFs at the active tips, then either grow every tip
/// with K_eq >= K_Ic (load held) or raise the load, until a stop criterion is met.
SimulationState run_quasi_static(Model& model, const LoadSchedule& schedule, const StepCallback& on_step = {});

}  // namespace pdfem
