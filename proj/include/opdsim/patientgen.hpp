#pragma once

// Synthetic outpatient dataset: 368 patients with fixed urgency counts and a
// 120-record longitudinal history store.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opdsim/types.hpp"

namespace opdsim {

inline constexpr std::size_t kDatasetSize = 368;
inline constexpr std::size_t kHistorySize = 120;
inline constexpr int kDatasetSchemaVersion = 1;

// Face-value urgency counts, Critical..Low.
inline constexpr std::array<std::size_t, 4> kFaceUrgencyCounts = {13, 36, 158, 161};

// Unique-patient counts per condition across the history store, in
// Condition enumerator order.
inline constexpr std::array<std::size_t, kConditionCount> kConditionCounts = {
    61,  // diabetes
    46,  // hypertension
    12,  // COPD
    12,  // CKD
    11,  // anaemia
    11,  // high-risk pregnancy
    10,  // tuberculosis
    5,   // IHD
    5,   // sickle cell
    4,   // epilepsy
    3,   // cancer
    2,   // liver disease
    1,   // SLE
};

struct Patient {
  std::string id;
  AgeBand age_band{};
  int age = 0;
  Gender gender{};
  Locality locality{};
  Language language{};
  Payment payment{};
  std::string complaint;
  Urgency face_urgency{};
  int face_acuity = 1;
  Specialty required_specialty{};

  bool operator==(const Patient&) const = default;
};

struct EscalationRule {
  Urgency target{};
  std::string reason;

  bool operator==(const EscalationRule&) const = default;
};

struct HistoryRecord {
  std::vector<Condition> conditions;
  std::vector<std::string> medications;
  std::vector<std::string> allergies;
  EscalationRule escalation_rule;

  bool has(Condition c) const;
  bool operator==(const HistoryRecord&) const = default;
};

using HistoryStore = std::map<std::string, HistoryRecord>;

struct Dataset {
  std::vector<Patient> patients;
  HistoryStore history;

  const HistoryRecord* history_of(const std::string& patient_id) const;
  bool operator==(const Dataset&) const = default;
};

/// Builds the 368-patient dataset, including its history store. Pure
/// function of `seed`.
Dataset generate_dataset(std::uint64_t seed);

/// Demographics, complaints and face-value triage only (no history).
std::vector<Patient> generate_patients(std::uint64_t seed);

/// Assigns longitudinal records to 120 non-Critical adult patients. May
/// rewrite the complaint, age and specialty of the seven showcase patients so
/// their presentation matches their record. Throws ValidationError when fewer
/// than 120 eligible patients exist.
HistoryStore generate_history_store(std::vector<Patient>& patients, std::uint64_t seed);

// Throws ValidationError describing the first broken invariant.
void validate_dataset(const Dataset& dataset);

std::string dataset_to_json(const Dataset& dataset);
Dataset dataset_from_json(const std::string& text);

// File round trip; export writes atomically. Throws IoError / ValidationError.
void export_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset import_dataset(const std::filesystem::path& path);

// Complaints of the seven showcase patients whose mild presentation hides
// history-driven urgency.
struct Archetype {
  const char* complaint;
  int age;
  AgeBand band;
  Gender gender;
  Specialty specialty;
  std::vector<Condition> conditions;
  std::vector<std::string> medications;
  std::vector<std::string> allergies;
  Urgency target;
  const char* reason;
};
const std::vector<Archetype>& archetypes();

}  // namespace opdsim
