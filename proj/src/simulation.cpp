#include "pdfem/simulation.hpp"

#include <cmath>

namespace pdfem {

SimulationState run_quasi_static(Model& model, const LoadSchedule& schedule, const StepCallback& on_step) {
  if (model.mesh().dim() != 2) throw Error("crack propagation is 2-D only");
  if (!(schedule.R0 > 0.0)) throw Error("initial load must be positive");
  if (!(schedule.dR_max > 0.0)) throw Error("maximum load increment must be positive");
  const double K_Ic = model.problem().material.K_Ic;
  model.problem().material.validate(true);

  SimulationState st;
  double R = schedule.R0;
  for (int step = 0;; ++step) {
    if (step >= schedule.max_steps) {
      st.stop_reason = "max steps";
      break;
    }
    StaticResult res = model.solve(R);
    st.u = res.u;
    st.load = R;

    std::vector<int> tips;
    for (int t = 0; t < 2; ++t)
      if (model.crack().tip_active(t)) tips.push_back(t);
    if (tips.empty()) throw Error("no active crack tip");
    std::vector<SifResult> sifs;
    int lead = 0;
    try {
      for (size_t k = 0; k < tips.size(); ++k) {
        sifs.push_back(model.sif(tips[k], res.u));
        if (sifs[k].K_eq > sifs[lead].K_eq) lead = static_cast<int>(k);
      }
    } catch (const GeometryError& e) {
      // contour circle no longer fits inside the body
      st.stop_reason = std::string("contour: ") + e.what();
      break;
    }

    HistoryRow row;
    row.step = step;
    row.load = R;
    row.tip_x = model.crack().tip(tips[lead]).x();
    row.tip_y = model.crack().tip(tips[lead]).y();
    row.K_I = sifs[lead].K_I;
    row.K_II = sifs[lead].K_II;
    row.K_eq = sifs[lead].K_eq;
    row.theta_c = sifs[lead].theta_c;
    row.reaction = res.reaction;

    std::vector<size_t> growing;
    for (size_t k = 0; k < tips.size(); ++k)
      if (sifs[k].K_eq >= K_Ic * (1.0 - kOnsetTolerance)) growing.push_back(k);

    bool stop = false;
    if (!growing.empty()) {
      row.event = StepEvent::Grow;
      try {
        for (size_t k : growing) model.grow(tips[k], sifs[k].theta_c, model.growth_length());
        ++st.growth_steps;
      } catch (const TipExitedDomain&) {
        row.event = StepEvent::Stop;
        st.stop_reason = "tip left the domain";
        stop = true;
      }
    } else {
      const double dR = load_increment(sifs[lead].K_eq, K_Ic, R, schedule.dR_max);
      row.event = StepEvent::Load;
      R += dR;
    }
    st.history.push_back(row);
    if (on_step) on_step(model, res, row);
    if (stop) break;
    if (R > schedule.max_load) {
      st.stop_reason = "max load";
      break;
    }
    if (st.growth_steps >= schedule.max_growth_steps) {
      st.stop_reason = "max growth steps";
      break;
    }
    if (model.crack().length() >= schedule.max_crack_length) {
      st.stop_reason = "max crack length";
      break;
    }
  }
  return st;
}

}  // namespace pdfem
