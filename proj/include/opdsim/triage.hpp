#pragma once

// Severity-prediction backends. The simulator talks to a TriageBackend; the
// default is a calibrated stochastic model of an LLM triage agent.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "opdsim/patientgen.hpp"
#include "opdsim/rng.hpp"
#include "opdsim/types.hpp"

namespace opdsim {

struct TriageResult {
  Urgency urgency{};
  int acuity = 1;
  std::string reasoning;
  std::vector<std::string> red_flags;
  Specialty specialty{};
  double confidence = 1.0;
};

struct DriftParams {
  Minutes check_interval = 5.0;
  double p_high = 0.015;
  double p_medium = 0.030;
  double p_low = 0.020;
  // Drift multiplier for patients whose history is visible to the agent.
  double history_multiplier = 0.8;
  // Per-check probability that a history-aware reassessment fires.
  double p_history_escalation = 0.07;

  /// Per-check deterioration probability of a level; 0 for Critical.
  double base_probability(Urgency u) const;
  void validate() const;  // throws ValidationError
  bool operator==(const DriftParams&) const = default;
};

class TriageBackend {
 public:
  virtual ~TriageBackend() = default;

  virtual std::string name() const = 0;

  /// Face-value triage from the presenting complaint only.
  virtual TriageResult triage_face_value(const Patient& patient, Rng& rng) = 0;

  /// History-aware reassessment; fires at most once per patient per session.
  virtual std::optional<TriageResult> assess_history_escalation(const Patient& patient,
                                                                const HistoryRecord& record, Rng& rng,
                                                                const DriftParams& params) = 0;

  /// Deterioration check for a waiting patient; returns the next level up on
  /// a hit. Critical never drifts.
  virtual std::optional<Urgency> assess_drift(Urgency current, bool has_history, Rng& rng,
                                              const DriftParams& params) = 0;

  // Number of backend calls made so far (stands in for API usage).
  std::uint64_t calls() const { return calls_; }

 protected:
  std::uint64_t calls_ = 0;
};

// Stochastic stand-in for the LLM agent, calibrated against the published
// session-level results.
class CalibratedTriageBackend final : public TriageBackend {
 public:
  std::string name() const override { return "calibrated"; }
  TriageResult triage_face_value(const Patient& patient, Rng& rng) override;
  std::optional<TriageResult> assess_history_escalation(const Patient& patient, const HistoryRecord& record,
                                                        Rng& rng, const DriftParams& params) override;
  std::optional<Urgency> assess_drift(Urgency current, bool has_history, Rng& rng,
                                      const DriftParams& params) override;

  bool already_escalated(const std::string& patient_id) const { return escalated_.count(patient_id) > 0; }

 private:
  std::unordered_set<std::string> escalated_;
};

// Seam for a live model adapter. Same result contract; requests beyond the
// per-minute budget must be queued by the implementation.
struct LiveBackendLimits {
  int requests_per_minute = 40;
  int input_tokens_per_call = 569;
  int output_tokens_per_call = 172;
};

/// One alert per recorded allergy, for the physician summary.
std::vector<std::string> generate_medication_alerts(const HistoryRecord& record);

}  // namespace opdsim
