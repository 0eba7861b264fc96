#include "opdsim/calibrate.hpp"

#include <fmt/format.h>

#include "json.hpp"
#include "opdsim/engine.hpp"

namespace opdsim {

CalibrationReport calibrate(const StrategyConfig& base, std::span<const double> kappas,
                            std::span<const double> p_hists, const CalibrationTargets& targets,
                            std::size_t runs_per_cell, std::uint64_t base_seed, const Dataset& dataset,
                            std::span<const Physician> roster, unsigned jobs) {
  if (kappas.empty() || p_hists.empty()) throw ValidationError("calibration grid is empty");
  if (runs_per_cell == 0) throw ValidationError("calibration needs at least one run per cell");
  CalibrationReport report;
  double best = 0.0;
  for (double kappa : kappas) {
    for (double p : p_hists) {
      StrategyConfig c = apply_ablation(base, Ablation::Full);
      c.drift.history_multiplier = kappa;
      c.drift.p_history_escalation = p;
      const auto runs = run_experiment(c, runs_per_cell, base_seed, dataset, roster, jobs);
      CalibrationCell cell{kappa, p};
      for (const auto& m : runs) {
        cell.drift_mean += static_cast<double>(m.drift_event_count);
        cell.critical_mean += static_cast<double>(m.critical_count_effective);
      }
      cell.drift_mean /= static_cast<double>(runs.size());
      cell.critical_mean /= static_cast<double>(runs.size());
      const double ed = (cell.drift_mean - targets.drift_events) / targets.drift_events;
      const double ec = (cell.critical_mean - targets.critical_per_session) / targets.critical_per_session;
      cell.distance = ed * ed + ec * ec;
      if (report.cells.empty() || cell.distance < best) {
        best = cell.distance;
        report.best = report.cells.size();
      }
      report.cells.push_back(cell);
    }
  }
  return report;
}

std::string calibration_to_csv(const CalibrationReport& report) {
  std::string out = "history_multiplier,p_history_escalation,drift_mean,critical_mean,distance,chosen\n";
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto& c = report.cells[i];
    out += fmt::format("{},{},{:.3f},{:.3f},{:.6f},{}\n", c.history_multiplier, c.p_history_escalation, c.drift_mean,
                       c.critical_mean, c.distance, i == report.best ? 1 : 0);
  }
  return out;
}

std::string calibration_fragment(const CalibrationReport& report) {
  const auto& c = report.cells.at(report.best);
  const nlohmann::json j = {
      {"drift", {{"history_multiplier", c.history_multiplier}, {"p_history_escalation", c.p_history_escalation}}}};
  return j.dump(2) + "\n";
}

}  // namespace opdsim
