#pragma once

// Discrete-event simulation of one OPD session and the multi-run drivers.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opdsim/arrivals.hpp"
#include "opdsim/assignment.hpp"
#include "opdsim/config.hpp"
#include "opdsim/patientgen.hpp"
#include "opdsim/queue.hpp"
#include "opdsim/triage.hpp"

namespace opdsim {

// Enumerator order is the tie-break order for simultaneous events.
enum class EventKind : std::uint8_t { ConsultEnd, ReassessTick, RegistrationDone, Arrival, ConsultStart, SessionEnd };
std::string_view to_string(EventKind);

struct SimEvent {
  Minutes time = 0.0;
  EventKind kind{};
  std::optional<std::size_t> patient;    // dataset index
  std::optional<std::size_t> physician;  // roster index
  std::uint64_t id = 0;                  // scheduling order, last tie-break

  // True when `a` must be processed before `b`.
  static bool before(const SimEvent& a, const SimEvent& b);
};

struct PatientOutcome {
  std::string patient_id;
  Urgency face_urgency{};
  Urgency final_urgency{};
  bool has_history = false;
  Minutes arrival = 0.0;
  std::optional<Minutes> registration_done;
  std::optional<Minutes> consult_start;
  std::optional<Minutes> consult_end;
  // Urgency at consult start; decides the consult length.
  std::optional<Urgency> consult_urgency;
  // When the patient was first known to be Critical.
  std::optional<Minutes> critical_since;
  std::optional<std::size_t> physician;
  bool specialty_match = false;
  std::vector<EscalationEvent> escalations;
  std::vector<std::string> alerts;

  bool served() const { return consult_start.has_value(); }
  // consult_start - registration_done; served patients only.
  Minutes wait() const;
  // consult_start - critical_since; served Critical patients only.
  Minutes critical_wait() const;
};

struct SessionMetrics {
  Strategy strategy{};
  bool memory_enabled = false;
  bool drift_enabled = false;
  std::uint64_t seed = 0;
  Minutes session_length = 360.0;

  std::size_t arrivals = 0;
  std::size_t served_count = 0;
  std::size_t unserved_count = 0;
  double throughput_per_hour = 0.0;

  // Over served patients.
  double avg_wait = 0.0;
  double median_wait = 0.0;
  double p95_wait = 0.0;
  // Mean wait by urgency at consult start; Critical measured on the
  // critical clock. NaN where no patient of that class was served.
  std::array<double, 4> mean_wait_by_urgency{};
  std::array<std::size_t, 4> served_by_urgency{};
  // Mean wait by face-value urgency.
  std::array<double, 4> mean_wait_by_face{};
  std::array<std::size_t, 4> served_by_face{};

  std::size_t specialty_matches = 0;
  double specialty_match_rate = 0.0;

  // Drift hits plus history escalations.
  std::size_t drift_event_count = 0;
  std::size_t memory_escalation_count = 0;

  std::array<std::size_t, 4> final_composition{};
  std::size_t critical_count_effective = 0;

  // Critical response. The denominator holds served Critical patients plus
  // unserved ones already waiting past the threshold at session end.
  std::size_t critical_within10 = 0;
  std::size_t critical_denominator10 = 0;
  std::size_t critical_within15 = 0;
  std::size_t critical_denominator15 = 0;
  double pct_critical_within10 = 0.0;
  double pct_critical_within15 = 0.0;

  std::vector<int> physician_assignments;
  std::vector<int> physician_served;
  std::uint64_t backend_calls = 0;
  std::size_t arrival_attempts = 0;

  std::vector<PatientOutcome> patients;
};

struct SessionOptions {
  TriageBackend* backend = nullptr;  // default: a fresh CalibratedTriageBackend
  std::string* trace = nullptr;      // receives the CSV event log when set
};

/// One 360-minute session. `config` is normalised (FCFS and rule-based lose
/// memory and drift) and validated; throws ValidationError when invalid.
SessionMetrics run_session(StrategyConfig config, const Dataset& dataset, std::span<const Physician> roster,
                           const IntensityProfile& profile, const SessionOptions& options = {});

inline constexpr std::string_view kTraceHeader = "time,kind,patient,physician\n";

/// Seeds base_seed .. base_seed + n_runs - 1, in that order. Runs execute on
/// up to `jobs` threads (0 = hardware concurrency).
std::vector<SessionMetrics> run_experiment(const StrategyConfig& config, std::size_t n_runs, std::uint64_t base_seed,
                                           const Dataset& dataset, std::span<const Physician> roster,
                                           unsigned jobs = 0);

enum class Ablation : std::uint8_t { Full, NoMemory, NoDrift, Neither };
inline constexpr std::array<Ablation, 4> kAllAblations = {Ablation::Full, Ablation::NoMemory, Ablation::NoDrift,
                                                          Ablation::Neither};
std::string_view to_string(Ablation);
StrategyConfig apply_ablation(StrategyConfig config, Ablation ablation);

struct AblationResults {
  std::array<std::vector<SessionMetrics>, 4> runs;  // kAllAblations order
};

/// Agentic sessions under the four flag combinations on one seed ladder.
AblationResults run_ablations(const StrategyConfig& config, std::size_t n_runs, std::uint64_t base_seed,
                              const Dataset& dataset, std::span<const Physician> roster, unsigned jobs = 0);

}  // namespace opdsim
