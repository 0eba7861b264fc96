#pragma once

// Adaptive waiting queue: orchestrator priority, periodic reassessment with
// drift and memory escalation, and per-strategy dequeue order.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opdsim/patientgen.hpp"
#include "opdsim/triage.hpp"
#include "opdsim/types.hpp"

namespace opdsim {

enum class EscalationCause : std::uint8_t { Drift, Memory };
std::string_view to_string(EscalationCause);

struct EscalationEvent {
  Minutes time = 0.0;
  std::string patient_id;
  Urgency from{};
  Urgency to{};
  EscalationCause cause{};

  bool operator==(const EscalationEvent&) const = default;
};

struct QueueEntry {
  std::size_t patient_index = 0;
  std::string patient_id;
  Minutes enqueue_time = 0.0;
  Urgency face_urgency{};
  Urgency effective_urgency{};
  int effective_acuity = 1;
  std::optional<std::size_t> assigned_physician;
  double priority = 0.0;
  std::vector<EscalationEvent> escalation_log;
};

struct PriorityWeights {
  double urgency = 0.45;
  double acuity = 0.20;
  double wait = 0.20;
  double load = 0.15;
  double wait_cap = 0.3;
  Minutes wait_horizon = 120.0;

  void validate() const;  // weights must sum to 1
  bool operator==(const PriorityWeights&) const = default;
};

/// Wait factor: rises linearly to `wait_cap` at `wait_horizon`, flat after.
double wait_factor(Minutes waited, const PriorityWeights& w = {});

/// 0.45 U + 0.20 A + 0.20 W + 0.15 L with A = acuity/10 and L = 1 - load.
/// Throws ContractViolation when now < enqueue_time.
double priority(const QueueEntry& entry, Minutes now, double physician_load, const PriorityWeights& w = {});

struct ReassessFlags {
  bool memory = false;
  bool drift = false;
};

struct ReassessContext {
  const Dataset& dataset;
  TriageBackend& backend;
  Rng& drift_rng;
  Rng& memory_rng;
  const DriftParams& params;
  ReassessFlags flags;
};

class AdaptiveQueue {
 public:
  explicit AdaptiveQueue(PriorityWeights weights = {}) : weights_(weights) {}

  void push(QueueEntry entry);
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<QueueEntry>& entries() const { return entries_; }
  const PriorityWeights& weights() const { return weights_; }

  /// Drift and memory checks for every waiting entry, then a priority
  /// refresh. No-op (empty result) when drift detection is off.
  /// `physician_loads[i]` is physician i's normalised queue load.
  std::vector<EscalationEvent> reassess_tick(Minutes now, ReassessContext& ctx,
                                             std::span<const double> physician_loads);

  void refresh_priorities(Minutes now, std::span<const double> physician_loads);

  /// Position of the entry `strategy` would serve next, optionally only
  /// among entries assigned to `physician`.
  std::optional<std::size_t> select_next(Strategy strategy, Minutes now, std::span<const double> physician_loads,
                                         std::optional<std::size_t> physician = std::nullopt) const;

  /// Removes and returns that entry. Throws ContractViolation when nothing
  /// qualifies.
  QueueEntry dequeue_next(Strategy strategy, Minutes now, std::span<const double> physician_loads,
                          std::optional<std::size_t> physician = std::nullopt);

  // Entries still waiting, drained at session end.
  std::vector<QueueEntry> drain();

 private:
  double load_of(const QueueEntry& e, std::span<const double> physician_loads) const;

  PriorityWeights weights_;
  std::vector<QueueEntry> entries_;
};

}  // namespace opdsim
