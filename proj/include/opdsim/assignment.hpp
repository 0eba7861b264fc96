#pragma once

// Physician roster and load-aware assignment scoring.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opdsim/patientgen.hpp"
#include "opdsim/types.hpp"

namespace opdsim {

enum class PhysicianState : std::uint8_t { Idle, Busy };

struct Physician {
  std::string id;
  Specialty specialty{};
  PhysicianState state = PhysicianState::Idle;
  int queue_length = 0;
  int served_count = 0;
  Minutes busy_until = 0.0;

  bool operator==(const Physician&) const = default;
};

struct AssignmentWeights {
  double specialty = 0.50;
  double load = 0.30;
  double availability = 0.20;

  bool operator==(const AssignmentWeights&) const = default;
};

struct AssignmentScore {
  std::string physician_id;
  double specialty_match = 0.0;
  double load_balance = 0.0;
  double availability = 0.0;
  double total = 0.0;
};

/// 1.0 for the exact specialty, 0.5 for a General Medicine fallback, else 0.
double specialty_match(Specialty physician, Specialty required);

/// Queue length of `physician` normalised by the longest queue in `roster`
/// (denominator at least 1).
double normalized_load(const Physician& physician, std::span<const Physician> roster);

AssignmentScore score(const Physician& physician, const Patient& patient, std::span<const Physician> roster,
                      const AssignmentWeights& weights = {});

// Picks physicians for patients under each strategy. Holds the FCFS
// round-robin cursor, so one instance belongs to one simulation run.
class Assigner {
 public:
  explicit Assigner(Strategy strategy, AssignmentWeights weights = {}) : strategy_(strategy), weights_(weights) {}

  /// Index into `roster` of the chosen physician. `candidates` restricts the
  /// choice (empty = whole roster); scores are still normalised over the
  /// whole roster. Ties go to the lexicographically lowest physician id.
  std::size_t assign(const Patient& patient, std::span<const Physician> roster,
                     std::span<const std::size_t> candidates = {});

  Strategy strategy() const { return strategy_; }

 private:
  Strategy strategy_;
  AssignmentWeights weights_;
  std::size_t next_round_robin_ = 0;
};

/// GeneralMedicine x2, Pediatrics, ObGyn, Orthopedics, Surgery.
std::vector<Physician> default_roster();

// Roster file: JSON array of {"id", "specialty"}.
std::string roster_to_json(std::span<const Physician> roster);
std::vector<Physician> roster_from_json(const std::string& text);
std::vector<Physician> load_roster(const std::filesystem::path& path);

}  // namespace opdsim
