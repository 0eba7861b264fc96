#include "opdsim/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>

namespace opdsim {
namespace {

template <typename Enum, std::size_t N>
using NameTable = std::array<std::pair<Enum, std::string_view>, N>;

constexpr NameTable<Urgency, 4> kUrgencyNames{{{Urgency::Critical, "Critical"},
                                               {Urgency::High, "High"},
                                               {Urgency::Medium, "Medium"},
                                               {Urgency::Low, "Low"}}};
constexpr NameTable<Specialty, 5> kSpecialtyNames{{{Specialty::GeneralMedicine, "GeneralMedicine"},
                                                   {Specialty::Pediatrics, "Pediatrics"},
                                                   {Specialty::ObGyn, "ObGyn"},
                                                   {Specialty::Orthopedics, "Orthopedics"},
                                                   {Specialty::Surgery, "Surgery"}}};
constexpr NameTable<AgeBand, 5> kAgeBandNames{{{AgeBand::Pediatric, "Pediatric"},
                                               {AgeBand::YoungAdult, "YoungAdult"},
                                               {AgeBand::Adult, "Adult"},
                                               {AgeBand::MiddleAged, "MiddleAged"},
                                               {AgeBand::Elderly, "Elderly"}}};
constexpr NameTable<Gender, 2> kGenderNames{{{Gender::F, "F"}, {Gender::M, "M"}}};
constexpr NameTable<Locality, 3> kLocalityNames{
    {{Locality::Urban, "Urban"}, {Locality::SemiUrban, "SemiUrban"}, {Locality::Rural, "Rural"}}};
constexpr NameTable<Language, 3> kLanguageNames{
    {{Language::Hindi, "Hindi"}, {Language::Bundeli, "Bundeli"}, {Language::English, "English"}}};
constexpr NameTable<Payment, 3> kPaymentNames{{{Payment::AyushmanBharat, "AyushmanBharat"},
                                               {Payment::SelfPay, "SelfPay"},
                                               {Payment::Other, "Other"}}};
constexpr NameTable<Condition, kConditionCount> kConditionNames{{
    {Condition::Diabetes, "diabetes"},
    {Condition::Hypertension, "hypertension"},
    {Condition::COPD, "copd"},
    {Condition::CKD, "ckd"},
    {Condition::Anaemia, "anaemia"},
    {Condition::HighRiskPregnancy, "high_risk_pregnancy"},
    {Condition::Tuberculosis, "tuberculosis"},
    {Condition::IHD, "ihd"},
    {Condition::SickleCell, "sickle_cell"},
    {Condition::Epilepsy, "epilepsy"},
    {Condition::Cancer, "cancer"},
    {Condition::LiverDisease, "liver_disease"},
    {Condition::SLE, "sle"},
}};
constexpr NameTable<Strategy, 3> kStrategyNames{
    {{Strategy::FCFS, "fcfs"}, {Strategy::RuleBased, "rule-based"}, {Strategy::Agentic, "agentic"}}};

template <typename Enum, std::size_t N>
std::string_view name_of(const NameTable<Enum, N>& table, Enum value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
Enum lookup(const NameTable<Enum, N>& table, std::string_view name, const char* what) {
  for (const auto& [e, n] : table) {
    if (n == name) return e;
  }
  throw ValidationError(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

}  // namespace

std::string_view to_string(Urgency v) { return name_of(kUrgencyNames, v); }
std::string_view to_string(Specialty v) { return name_of(kSpecialtyNames, v); }
std::string_view to_string(AgeBand v) { return name_of(kAgeBandNames, v); }
std::string_view to_string(Gender v) { return name_of(kGenderNames, v); }
std::string_view to_string(Locality v) { return name_of(kLocalityNames, v); }
std::string_view to_string(Language v) { return name_of(kLanguageNames, v); }
std::string_view to_string(Payment v) { return name_of(kPaymentNames, v); }
std::string_view to_string(Condition v) { return name_of(kConditionNames, v); }
std::string_view to_string(Strategy v) { return name_of(kStrategyNames, v); }

Urgency parse_urgency(std::string_view s) { return lookup(kUrgencyNames, s, "urgency"); }
Specialty parse_specialty(std::string_view s) { return lookup(kSpecialtyNames, s, "specialty"); }
AgeBand parse_age_band(std::string_view s) { return lookup(kAgeBandNames, s, "age band"); }
Gender parse_gender(std::string_view s) { return lookup(kGenderNames, s, "gender"); }
Locality parse_locality(std::string_view s) { return lookup(kLocalityNames, s, "locality"); }
Language parse_language(std::string_view s) { return lookup(kLanguageNames, s, "language"); }
Payment parse_payment(std::string_view s) { return lookup(kPaymentNames, s, "payment"); }
Condition parse_condition(std::string_view s) { return lookup(kConditionNames, s, "condition"); }

Strategy parse_strategy(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "fcfs") return Strategy::FCFS;
  if (lower == "rule-based" || lower == "rulebased" || lower == "rb" || lower == "rule_based")
    return Strategy::RuleBased;
  if (lower == "agentic") return Strategy::Agentic;
  throw ValidationError("unknown strategy '" + std::string(s) + "'");
}

}  // namespace opdsim
