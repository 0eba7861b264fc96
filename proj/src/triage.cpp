#include "opdsim/triage.hpp"

#include <fmt/format.h>

namespace opdsim {

double DriftParams::base_probability(Urgency u) const {
  switch (u) {
    case Urgency::Critical: return 0.0;
    case Urgency::High: return p_high;
    case Urgency::Medium: return p_medium;
    case Urgency::Low: return p_low;
  }
  return 0.0;
}

void DriftParams::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(fmt::format("drift parameter {}={} not in [0,1]", name, p));
  };
  prob(p_high, "p_high");
  prob(p_medium, "p_medium");
  prob(p_low, "p_low");
  prob(p_history_escalation, "p_history_escalation");
  if (!(check_interval > 0.0)) throw ValidationError("drift check_interval must be positive");
  if (!(history_multiplier >= 0.0)) throw ValidationError("history_multiplier must be non-negative");
  for (Urgency u : {Urgency::High, Urgency::Medium, Urgency::Low})
    prob(base_probability(u) * history_multiplier, "base probability x history_multiplier");
}

TriageResult CalibratedTriageBackend::triage_face_value(const Patient& patient, Rng& /*rng*/) {
  ++calls_;
  TriageResult r;
  r.urgency = patient.face_urgency;
  r.acuity = patient.face_acuity;
  r.specialty = patient.required_specialty;
  r.reasoning = fmt::format("Presenting complaint '{}' assessed as {}", patient.complaint, to_string(r.urgency));
  if (r.urgency == Urgency::Critical) r.red_flags.push_back(patient.complaint);
  r.confidence = 0.9;
  return r;
}

std::optional<TriageResult> CalibratedTriageBackend::assess_history_escalation(const Patient& patient,
                                                                               const HistoryRecord& record,
                                                                               Rng& rng,
                                                                               const DriftParams& params) {
  ++calls_;
  if (escalated_.count(patient.id)) return std::nullopt;
  if (!bernoulli(rng, params.p_history_escalation)) return std::nullopt;
  escalated_.insert(patient.id);
  const auto& rule = record.escalation_rule;
  TriageResult r;
  r.urgency = rule.target;
  r.acuity = escalated_acuity(rule.target);
  r.specialty = patient.required_specialty;
  r.reasoning = rule.reason;
  r.red_flags.push_back(rule.reason);
  r.confidence = 0.85;
  return r;
}

std::optional<Urgency> CalibratedTriageBackend::assess_drift(Urgency current, bool has_history, Rng& rng,
                                                             const DriftParams& params) {
  ++calls_;
  if (current == Urgency::Critical) return std::nullopt;
  const double p = params.base_probability(current) * (has_history ? params.history_multiplier : 1.0);
  if (!bernoulli(rng, p)) return std::nullopt;
  return raised(current);
}

std::vector<std::string> generate_medication_alerts(const HistoryRecord& record) {
  std::vector<std::string> alerts;
  alerts.reserve(record.allergies.size());
  for (const auto& allergen : record.allergies)
    alerts.push_back(fmt::format("ALLERGY: {} - avoid {} and related drugs", allergen, allergen));
  return alerts;
}

}  // namespace opdsim
