#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace opdsim {

using Minutes = double;

// Thrown when input data (files, configs) breaks a documented invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Four triage levels, most urgent first. The underlying value doubles as an
// array index; "more urgent" means a smaller enumerator.
enum class Urgency : std::uint8_t { Critical = 0, High = 1, Medium = 2, Low = 3 };

inline constexpr std::array<Urgency, 4> kAllUrgencies = {Urgency::Critical, Urgency::High,
                                                         Urgency::Medium, Urgency::Low};

constexpr std::size_t index_of(Urgency u) { return static_cast<std::size_t>(u); }

/// Orchestrator urgency score: Critical 1.0, High 0.75, Medium 0.50, Low 0.25.
constexpr double u_score(Urgency u) {
  switch (u) {
    case Urgency::Critical: return 1.0;
    case Urgency::High: return 0.75;
    case Urgency::Medium: return 0.50;
    case Urgency::Low: return 0.25;
  }
  return 0.0;
}

constexpr bool more_urgent(Urgency a, Urgency b) {
  return static_cast<int>(a) < static_cast<int>(b);
}

/// Next level up; Critical stays Critical.
constexpr Urgency raised(Urgency u) {
  return u == Urgency::Critical ? Urgency::Critical
                                : static_cast<Urgency>(static_cast<int>(u) - 1);
}

struct AcuityBand {
  int lo;
  int hi;
  constexpr bool contains(int acuity) const { return acuity >= lo && acuity <= hi; }
};

constexpr AcuityBand acuity_band(Urgency u) {
  switch (u) {
    case Urgency::Critical: return {9, 10};
    case Urgency::High: return {7, 8};
    case Urgency::Medium: return {4, 6};
    case Urgency::Low: return {1, 3};
  }
  return {1, 10};
}

// Acuity assigned when a patient is escalated into a band.
constexpr int escalated_acuity(Urgency u) {
  switch (u) {
    case Urgency::Critical: return 9;
    case Urgency::High: return 7;
    case Urgency::Medium: return 5;
    case Urgency::Low: return 2;
  }
  return 1;
}

enum class Specialty : std::uint8_t { GeneralMedicine, Pediatrics, ObGyn, Orthopedics, Surgery };
inline constexpr std::array<Specialty, 5> kAllSpecialties = {
    Specialty::GeneralMedicine, Specialty::Pediatrics, Specialty::ObGyn, Specialty::Orthopedics,
    Specialty::Surgery};

enum class AgeBand : std::uint8_t { Pediatric, YoungAdult, Adult, MiddleAged, Elderly };
enum class Gender : std::uint8_t { F, M };
enum class Locality : std::uint8_t { Urban, SemiUrban, Rural };
enum class Language : std::uint8_t { Hindi, Bundeli, English };
enum class Payment : std::uint8_t { AyushmanBharat, SelfPay, Other };

enum class Condition : std::uint8_t {
  Diabetes,
  Hypertension,
  COPD,
  CKD,
  Anaemia,
  HighRiskPregnancy,
  Tuberculosis,
  IHD,
  SickleCell,
  Epilepsy,
  Cancer,
  LiverDisease,
  SLE,
};
inline constexpr std::size_t kConditionCount = 13;

enum class Strategy : std::uint8_t { FCFS, RuleBased, Agentic };

// Inclusive age range of each band, in years.
struct AgeRange {
  int lo;
  int hi;
};
constexpr AgeRange age_range(AgeBand b) {
  switch (b) {
    case AgeBand::Pediatric: return {1, 17};
    case AgeBand::YoungAdult: return {18, 30};
    case AgeBand::Adult: return {31, 45};
    case AgeBand::MiddleAged: return {46, 60};
    case AgeBand::Elderly: return {61, 85};
  }
  return {0, 120};
}

std::string_view to_string(Urgency);
std::string_view to_string(Specialty);
std::string_view to_string(AgeBand);
std::string_view to_string(Gender);
std::string_view to_string(Locality);
std::string_view to_string(Language);
std::string_view to_string(Payment);
std::string_view to_string(Condition);
std::string_view to_string(Strategy);

// Inverse lookups. Throw ValidationError on unknown names.
Urgency parse_urgency(std::string_view);
Specialty parse_specialty(std::string_view);
AgeBand parse_age_band(std::string_view);
Gender parse_gender(std::string_view);
Locality parse_locality(std::string_view);
Language parse_language(std::string_view);
Payment parse_payment(std::string_view);
Condition parse_condition(std::string_view);
// Accepts "fcfs", "rule-based"/"rulebased"/"rb", "agentic" in any case.
Strategy parse_strategy(std::string_view);

}  // namespace opdsim
