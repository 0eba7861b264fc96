#pragma once

// Run configuration: strategy, ablation flags and every calibration constant.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "opdsim/arrivals.hpp"
#include "opdsim/assignment.hpp"
#include "opdsim/queue.hpp"
#include "opdsim/triage.hpp"
#include "opdsim/types.hpp"

namespace opdsim {

struct ServiceTime {
  Minutes mean = 0.0;
  Minutes sd = 0.0;

  bool operator==(const ServiceTime&) const = default;
};

struct StrategyConfig {
  Strategy strategy = Strategy::Agentic;
  bool memory_enabled = true;
  bool drift_enabled = true;

  Minutes registration_mean = 5.5;
  Minutes registration_std = 2.0;
  Minutes registration_min = 0.5;
  // Fractional registration-time saving from voice capture (agentic only).
  double voice_capture_reduction = 0.4;
  int reg_desks = 6;

  // Consultation time by effective urgency, Critical..Low.
  std::array<ServiceTime, 4> consult = {{{15.0, 4.0}, {10.0, 3.0}, {7.0, 2.5}, {5.0, 1.5}}};
  Minutes consult_min = 1.0;

  Minutes session_length = 360.0;
  std::uint64_t seed = 42;
  std::uint64_t dataset_seed = 42;

  DriftParams drift;
  PriorityWeights priority_weights;
  AssignmentWeights assignment_weights;

  // Empty means the default morning-peaked profile.
  std::vector<Breakpoint> profile;
  double lambda_max = 0.0;

  Minutes effective_registration_mean() const;
  IntensityProfile intensity_profile() const;

  // FCFS and rule-based runs never drift or consult the history store.
  void normalize();
  void validate() const;  // throws ValidationError

  bool operator==(const StrategyConfig&) const = default;
};

std::string config_to_json(const StrategyConfig& config);

/// Overlays the keys present in `text` onto `base`. Unknown keys are
/// rejected with ValidationError.
StrategyConfig config_from_json(const std::string& text, StrategyConfig base = {});
StrategyConfig load_config(const std::filesystem::path& path, StrategyConfig base = {});

}  // namespace opdsim
