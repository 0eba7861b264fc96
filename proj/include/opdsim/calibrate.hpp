#pragma once

// Grid search over the history drift multiplier and the history escalation
// probability.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "opdsim/assignment.hpp"
#include "opdsim/config.hpp"
#include "opdsim/patientgen.hpp"

namespace opdsim {

struct CalibrationTargets {
  double drift_events = 236.0;
  double critical_per_session = 24.9;
};

struct CalibrationCell {
  double history_multiplier = 1.0;
  double p_history_escalation = 0.0;
  double drift_mean = 0.0;
  double critical_mean = 0.0;
  double distance = 0.0;  // sum of squared relative errors
};

struct CalibrationReport {
  std::vector<CalibrationCell> cells;  // kappa-major grid order
  std::size_t best = 0;
};

/// Runs `runs_per_cell` full agentic sessions per grid cell on a shared seed
/// ladder. Throws ValidationError when either axis is empty.
CalibrationReport calibrate(const StrategyConfig& base, std::span<const double> kappas,
                            std::span<const double> p_hists, const CalibrationTargets& targets,
                            std::size_t runs_per_cell, std::uint64_t base_seed, const Dataset& dataset,
                            std::span<const Physician> roster, unsigned jobs = 0);

std::string calibration_to_csv(const CalibrationReport& report);
// Config fragment holding the chosen constants.
std::string calibration_fragment(const CalibrationReport& report);

}  // namespace opdsim
