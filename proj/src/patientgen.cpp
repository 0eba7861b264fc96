#include "opdsim/patientgen.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <numeric>
#include <set>

#include "json.hpp"
#include "opdsim/io.hpp"
#include "opdsim/rng.hpp"

namespace opdsim {
namespace {

using json = nlohmann::json;

// Marginal quotas (rounded from the regional demographic percentages so each
// sums to 368).
constexpr std::array<std::size_t, 5> kAgeQuota = {55, 74, 92, 81, 66};  // 15/20/25/22/18 %
constexpr std::array<std::size_t, 2> kGenderQuota = {228, 140};        // 62 % female
constexpr std::array<std::size_t, 3> kLocalityQuota = {166, 92, 110};  // 45/25/30 %
constexpr std::array<std::size_t, 3> kLanguageQuota = {313, 37, 18};   // 85/10/5 %
constexpr std::array<std::size_t, 3> kPaymentQuota = {129, 147, 92};   // 35/40/25 %

// Specialty demand among adults; every pediatric patient needs Pediatrics.
// Half of all patients need General Medicine, which puts the match rate of a
// uniformly random physician from the default roster at (1 + 0.5) / 6 = 25 %.
constexpr std::size_t kGeneralMedicineDemand = 184;
constexpr std::size_t kObGynDemand = 50;
constexpr std::size_t kOrthopedicsDemand = 40;
constexpr std::size_t kSurgeryDemand = 39;

// Face urgency of history patients (High, Medium, Low). History patients are
// mostly deceptively mild presentations.
constexpr std::array<std::size_t, 3> kHistoryFaceMix = {3, 17, 100};

template <typename Enum, std::size_t N>
std::vector<Enum> quota_vector(const std::array<std::size_t, N>& quota, Rng& rng) {
  std::vector<Enum> out;
  for (std::size_t i = 0; i < N; ++i) out.insert(out.end(), quota[i], static_cast<Enum>(i));
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

using ComplaintList = std::vector<std::string>;

const ComplaintList& complaints_for(Urgency u, Specialty s) {
  // [urgency][specialty]
  static const std::array<std::array<ComplaintList, 5>, 4> catalog = {{
      // Critical
      {{
          {"Crushing chest pain radiating to left arm", "Sudden breathlessness at rest",
           "Slurred speech and facial droop since morning", "Vomiting blood"},
          {"Child with high fever and seizure", "Infant not feeding, lethargic",
           "Child with severe breathing difficulty"},
          {"Heavy vaginal bleeding with dizziness", "Severe lower abdominal pain, missed period",
           "White discharge with itching and burning, fever and rigors"},
          {"Open fracture of forearm after fall", "Suspected hip fracture, unable to stand"},
          {"Severe abdominal pain with rigid abdomen", "Deep laceration with active bleeding"},
      }},
      // High
      {{
          {"High fever with chills for three days", "Chest tightness on exertion",
           "Persistent vomiting and dehydration", "Blood sugar above 400 on glucometer"},
          {"Child with fever and rash", "Child with diarrhoea and sunken eyes",
           "Wheezing child after cold exposure"},
          {"Bleeding in pregnancy, second trimester", "Reduced fetal movements",
           "Severe headache with swelling in pregnancy"},
          {"Swollen painful knee after fall, cannot bear weight", "Dislocated shoulder"},
          {"Painful swelling in groin", "Abscess with spreading redness", "Right lower abdominal pain"},
      }},
      // Medium
      {{
          {"Fever and body ache for two days", "Burning urination", "Cough with sputum for a week",
           "Loose stools since yesterday", "Giddiness on standing", "Epigastric pain after meals"},
          {"Child with cough and cold", "Ear pain in child", "Child with mild fever and poor appetite"},
          {"Irregular periods with pain", "Lower abdominal pain", "Routine antenatal check with leg swelling"},
          {"Lower back pain radiating to leg", "Neck pain with tingling in fingers",
           "Ankle sprain with swelling"},
          {"Painful piles", "Small lump in breast", "Ingrown toenail with pus"},
      }},
      // Low
      {{
          {"Prescription refill", "Mild headache", "Routine blood pressure check", "Mild acidity",
           "Follow-up for lab reports", "Sore throat", "Mild cold"},
          {"Vaccination visit", "Child growth check", "Mild skin rash in child"},
          {"Routine antenatal visit", "White discharge", "Contraception advice"},
          {"Knee pain in morning", "Heel pain", "Follow-up after plaster removal"},
          {"Dressing change", "Suture removal", "Small sebaceous cyst"},
      }},
  }};
  return catalog[index_of(u)][static_cast<std::size_t>(s)];
}

// Higher value = reported first when explaining an escalation.
int severity_rank(Condition c) {
  switch (c) {
    case Condition::IHD: return 13;
    case Condition::HighRiskPregnancy: return 12;
    case Condition::Cancer: return 11;
    case Condition::SickleCell: return 10;
    case Condition::CKD: return 9;
    case Condition::LiverDisease: return 8;
    case Condition::SLE: return 7;
    case Condition::COPD: return 6;
    case Condition::Epilepsy: return 5;
    case Condition::Tuberculosis: return 4;
    case Condition::Anaemia: return 3;
    case Condition::Diabetes: return 2;
    case Condition::Hypertension: return 1;
  }
  return 0;
}

const char* escalation_reason(Condition c) {
  switch (c) {
    case Condition::Diabetes: return "Diabetes with current symptoms -> DKA / hypoglycaemia risk";
    case Condition::Hypertension: return "Long-standing hypertension -> hypertensive urgency risk";
    case Condition::COPD: return "COPD with prior exacerbations -> respiratory decompensation risk";
    case Condition::CKD: return "Chronic kidney disease -> hyperkalemia / fluid overload risk";
    case Condition::Anaemia: return "Severe anaemia -> cardiac decompensation risk";
    case Condition::HighRiskPregnancy: return "High-risk pregnancy -> obstetric complication risk";
    case Condition::Tuberculosis: return "Tuberculosis on treatment -> drug toxicity / relapse risk";
    case Condition::IHD: return "Ischaemic heart disease -> acute coronary syndrome risk";
    case Condition::SickleCell: return "Sickle cell disease -> vaso-occlusive crisis risk";
    case Condition::Epilepsy: return "Epilepsy -> breakthrough seizure risk";
    case Condition::Cancer: return "Cancer on chemotherapy -> neutropenic sepsis risk";
    case Condition::LiverDisease: return "Chronic liver disease -> decompensation / bleeding risk";
    case Condition::SLE: return "Immunosuppressed (SLE) -> opportunistic infection risk";
  }
  return "History-driven risk";
}

const std::vector<std::string>& medications_for(Condition c) {
  static const std::array<std::vector<std::string>, kConditionCount> meds = {{
      {"Metformin 500 mg", "Glimepiride 1 mg"},
      {"Amlodipine 5 mg", "Telmisartan 40 mg"},
      {"Tiotropium inhaler", "Salbutamol inhaler"},
      {"Furosemide 40 mg", "Sodium bicarbonate"},
      {"Ferrous sulphate", "Folic acid"},
      {"Iron-folic acid", "Low-dose aspirin"},
      {"Isoniazid", "Rifampicin"},
      {"Atorvastatin 40 mg", "Clopidogrel 75 mg"},
      {"Hydroxyurea", "Folic acid"},
      {"Levetiracetam 500 mg"},
      {"Ondansetron", "Capecitabine"},
      {"Propranolol 40 mg", "Lactulose"},
      {"Hydroxychloroquine", "Mycophenolate mofetil"},
  }};
  return meds[static_cast<std::size_t>(c)];
}

const std::vector<std::string> kAllergyPool = {"Penicillin", "Sulfonamides", "NSAIDs", "Aspirin",
                                               "Cotrimoxazole", "Iodinated contrast"};
constexpr double kAllergyProbability = 0.15;

bool eligible_for_history(const Patient& p) {
  return p.face_urgency != Urgency::Critical && p.age_band != AgeBand::Pediatric;
}

bool can_carry_pregnancy(const Patient& p) {
  return p.gender == Gender::F &&
         (p.age_band == AgeBand::YoungAdult || p.age_band == AgeBand::Adult);
}

std::size_t history_face_slot(Urgency u) {
  switch (u) {
    case Urgency::High: return 0;
    case Urgency::Medium: return 1;
    case Urgency::Low: return 2;
    case Urgency::Critical: break;
  }
  throw ContractViolation("Critical patients carry no history");
}

void sort_unique(std::vector<Condition>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

bool HistoryRecord::has(Condition c) const {
  return std::find(conditions.begin(), conditions.end(), c) != conditions.end();
}

const HistoryRecord* Dataset::history_of(const std::string& patient_id) const {
  auto it = history.find(patient_id);
  return it == history.end() ? nullptr : &it->second;
}

const std::vector<Archetype>& archetypes() {
  static const std::vector<Archetype> list = {
      {"Mild headache, dizziness", 62, AgeBand::Elderly, Gender::M, Specialty::GeneralMedicine,
       {Condition::Hypertension}, {"Aspirin 75 mg", "Amlodipine 5 mg"}, {}, Urgency::Critical,
       "TIA 6 months ago -> stroke warning"},
      {"Minor bruising, bleeding", 55, AgeBand::MiddleAged, Gender::F, Specialty::GeneralMedicine,
       {Condition::Hypertension}, {"Warfarin 5 mg", "Telmisartan 40 mg"}, {}, Urgency::Critical,
       "On Warfarin -> possible hemorrhage"},
      {"Nausea, weakness", 48, AgeBand::MiddleAged, Gender::M, Specialty::GeneralMedicine,
       {Condition::CKD, Condition::Diabetes}, {"Insulin glargine", "Furosemide 40 mg"}, {},
       Urgency::High, "CKD Stage 3 -> hyperkalemia risk"},
      {"Mild abdominal pain", 35, AgeBand::Adult, Gender::F, Specialty::ObGyn,
       {Condition::HighRiskPregnancy}, {"Iron-folic acid"}, {}, Urgency::Critical,
       "High-risk pregnancy + prev. cesarean"},
      {"Cough, mild fever", 70, AgeBand::Elderly, Gender::M, Specialty::GeneralMedicine,
       {Condition::COPD}, {"Tiotropium inhaler", "Salbutamol inhaler"}, {}, Urgency::High,
       "Severe COPD, ICU admission history"},
      {"Drowsy, confused", 28, AgeBand::YoungAdult, Gender::M, Specialty::GeneralMedicine,
       {Condition::Epilepsy}, {"Levetiracetam 500 mg"}, {"Phenytoin"}, Urgency::High,
       "Status epilepticus + Phenytoin allergy"},
      {"Low-grade fever", 58, AgeBand::MiddleAged, Gender::F, Specialty::GeneralMedicine,
       {Condition::SLE}, {"Mycophenolate mofetil", "Hydroxychloroquine"}, {}, Urgency::High,
       "Immunosuppressed (SLE on MMF)"},
  };
  return list;
}

std::vector<Patient> generate_patients(std::uint64_t seed) {
  Rng rng = make_stream(seed, Stream::Demographics);
  const auto ages = quota_vector<AgeBand>(kAgeQuota, rng);
  const auto genders = quota_vector<Gender>(kGenderQuota, rng);
  const auto localities = quota_vector<Locality>(kLocalityQuota, rng);
  const auto languages = quota_vector<Language>(kLanguageQuota, rng);
  const auto payments = quota_vector<Payment>(kPaymentQuota, rng);
  const auto urgencies = quota_vector<Urgency>(kFaceUrgencyCounts, rng);

  std::vector<Patient> patients(kDatasetSize);
  for (std::size_t i = 0; i < kDatasetSize; ++i) {
    Patient& p = patients[i];
    p.id = fmt::format("JAB-{:04d}", i + 1);
    p.age_band = ages[i];
    const auto range = age_range(p.age_band);
    p.age = uniform_int(rng, range.lo, range.hi);
    p.gender = genders[i];
    p.locality = localities[i];
    p.language = languages[i];
    p.payment = payments[i];
    p.face_urgency = urgencies[i];
    const auto band = acuity_band(p.face_urgency);
    p.face_acuity = uniform_int(rng, band.lo, band.hi);
  }

  // Specialty demand: pediatric -> Pediatrics; ObGyn drawn from adult women.
  std::vector<std::size_t> adults;
  for (std::size_t i = 0; i < kDatasetSize; ++i) {
    if (patients[i].age_band == AgeBand::Pediatric)
      patients[i].required_specialty = Specialty::Pediatrics;
    else
      adults.push_back(i);
  }
  std::shuffle(adults.begin(), adults.end(), rng);
  std::vector<std::size_t> rest;
  std::size_t obgyn = 0;
  for (std::size_t idx : adults) {
    if (obgyn < kObGynDemand && patients[idx].gender == Gender::F) {
      patients[idx].required_specialty = Specialty::ObGyn;
      ++obgyn;
    } else {
      rest.push_back(idx);
    }
  }
  std::vector<Specialty> other;
  other.insert(other.end(), kGeneralMedicineDemand, Specialty::GeneralMedicine);
  other.insert(other.end(), kOrthopedicsDemand, Specialty::Orthopedics);
  other.insert(other.end(), kSurgeryDemand, Specialty::Surgery);
  std::shuffle(other.begin(), other.end(), rng);
  // Pediatric quota and ObGyn quota absorb the difference if the adult count
  // drifts from 313; trim or pad with General Medicine.
  other.resize(rest.size(), Specialty::GeneralMedicine);
  for (std::size_t k = 0; k < rest.size(); ++k) patients[rest[k]].required_specialty = other[k];

  for (Patient& p : patients) p.complaint = pick(complaints_for(p.face_urgency, p.required_specialty), rng);
  return patients;
}

HistoryStore generate_history_store(std::vector<Patient>& patients, std::uint64_t seed) {
  Rng rng = make_stream(seed, Stream::History);

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < patients.size(); ++i)
    if (eligible_for_history(patients[i])) eligible.push_back(i);
  if (eligible.size() < kHistorySize)
    throw ValidationError(fmt::format("history store needs {} eligible non-Critical adults, found {}",
                                      kHistorySize, eligible.size()));
  std::shuffle(eligible.begin(), eligible.end(), rng);

  std::set<std::size_t> chosen;
  std::array<std::size_t, 3> face_taken = {0, 0, 0};
  std::map<std::size_t, HistoryRecord> records;

  auto take = [&](std::size_t idx) {
    chosen.insert(idx);
    ++face_taken[history_face_slot(patients[idx].face_urgency)];
  };
  auto face_room = [&](const Patient& p) {
    const auto slot = history_face_slot(p.face_urgency);
    return face_taken[slot] < kHistoryFaceMix[slot];
  };

  std::array<std::size_t, kConditionCount> remaining = kConditionCounts;

  // Showcase patients first: mild Low-urgency presentations with a fixed record.
  for (const Archetype& a : archetypes()) {
    auto it = std::find_if(eligible.begin(), eligible.end(), [&](std::size_t idx) {
      const Patient& p = patients[idx];
      return !chosen.count(idx) && p.face_urgency == Urgency::Low && p.age_band == a.band &&
             p.gender == a.gender;
    });
    if (it == eligible.end())
      throw ValidationError(fmt::format("no eligible patient for showcase record '{}'", a.complaint));
    Patient& p = patients[*it];
    p.complaint = a.complaint;
    p.age = a.age;
    p.required_specialty = a.specialty;
    HistoryRecord rec;
    rec.conditions = a.conditions;
    rec.medications = a.medications;
    rec.allergies = a.allergies;
    rec.escalation_rule = {a.target, a.reason};
    for (Condition c : a.conditions) --remaining[static_cast<std::size_t>(c)];
    take(*it);
    records.emplace(*it, std::move(rec));
  }

  // Pregnancy needs women of child-bearing age; reserve them before the
  // face-urgency quotas fill up.
  auto& hrp_left = remaining[static_cast<std::size_t>(Condition::HighRiskPregnancy)];
  for (std::size_t idx : eligible) {
    if (hrp_left == 0) break;
    const Patient& p = patients[idx];
    if (chosen.count(idx) || !can_carry_pregnancy(p) || p.face_urgency == Urgency::High || !face_room(p))
      continue;
    take(idx);
    records[idx].conditions.push_back(Condition::HighRiskPregnancy);
    --hrp_left;
  }
  if (hrp_left != 0) throw ValidationError("not enough eligible patients for high-risk pregnancy records");

  for (std::size_t idx : eligible) {
    if (chosen.size() == kHistorySize) break;
    if (!chosen.count(idx) && face_room(patients[idx])) {
      take(idx);
      records[idx];
    }
  }
  if (chosen.size() != kHistorySize)
    throw ValidationError("not enough eligible patients to fill the history face-urgency mix");

  // Spread the remaining condition tags so that every record gets at least
  // one condition; later tags become comorbidities.
  std::vector<Condition> order;
  for (std::size_t c = 0; c < kConditionCount; ++c)
    if (static_cast<Condition>(c) != Condition::HighRiskPregnancy) order.push_back(static_cast<Condition>(c));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> holders(chosen.begin(), chosen.end());
  for (Condition c : order) {
    std::shuffle(holders.begin(), holders.end(), rng);
    std::stable_partition(holders.begin(), holders.end(),
                          [&](std::size_t idx) { return records[idx].conditions.empty(); });
    std::size_t need = remaining[static_cast<std::size_t>(c)];
    for (std::size_t idx : holders) {
      if (need == 0) break;
      if (records[idx].has(c)) continue;
      records[idx].conditions.push_back(c);
      --need;
    }
    if (need != 0) throw ValidationError("cannot place all condition tags");
  }

  HistoryStore store;
  for (auto& [idx, rec] : records) {
    if (rec.conditions.empty()) throw ValidationError("history record without a condition");
    const Patient& p = patients[idx];
    const bool showcase = !rec.escalation_rule.reason.empty();
    if (!showcase) {
      sort_unique(rec.conditions);
      const Condition primary = *std::max_element(
          rec.conditions.begin(), rec.conditions.end(),
          [](Condition a, Condition b) { return severity_rank(a) < severity_rank(b); });
      for (Condition c : rec.conditions) {
        const auto& meds = medications_for(c);
        rec.medications.insert(rec.medications.end(), meds.begin(), meds.end());
      }
      if (bernoulli(rng, kAllergyProbability)) rec.allergies.push_back(pick(kAllergyPool, rng));
      Urgency target = p.face_urgency == Urgency::High ? Urgency::Critical : Urgency::High;
      // A lone metabolic condition only lifts a Low presentation by one level.
      if (p.face_urgency == Urgency::Low && rec.conditions.size() == 1 && severity_rank(primary) <= 2)
        target = Urgency::Medium;
      rec.escalation_rule = {target, escalation_reason(primary)};
    }
    store.emplace(p.id, std::move(rec));
  }
  return store;
}

Dataset generate_dataset(std::uint64_t seed) {
  Dataset ds;
  ds.patients = generate_patients(seed);
  ds.history = generate_history_store(ds.patients, seed);
  return ds;
}

void validate_dataset(const Dataset& ds) {
  if (ds.patients.size() != kDatasetSize)
    throw ValidationError(fmt::format("dataset must hold {} patients, found {}", kDatasetSize,
                                      ds.patients.size()));
  std::set<std::string> ids;
  std::array<std::size_t, 4> urgency_counts{};
  for (const Patient& p : ds.patients) {
    if (!ids.insert(p.id).second) throw ValidationError("duplicate patient id " + p.id);
    if (!acuity_band(p.face_urgency).contains(p.face_acuity))
      throw ValidationError(fmt::format("patient {}: acuity {} outside {} band", p.id, p.face_acuity,
                                        to_string(p.face_urgency)));
    const auto range = age_range(p.age_band);
    if (p.age < range.lo || p.age > range.hi)
      throw ValidationError(fmt::format("patient {}: age {} outside band {}", p.id, p.age, to_string(p.age_band)));
    ++urgency_counts[index_of(p.face_urgency)];
  }
  if (urgency_counts != kFaceUrgencyCounts)
    throw ValidationError(fmt::format("face urgency counts {}/{}/{}/{} != 13/36/158/161", urgency_counts[0],
                                      urgency_counts[1], urgency_counts[2], urgency_counts[3]));
  if (ds.history.size() != kHistorySize)
    throw ValidationError(fmt::format("history store must hold {} records, found {}", kHistorySize,
                                      ds.history.size()));
  std::array<std::size_t, kConditionCount> condition_counts{};
  for (const auto& [id, rec] : ds.history) {
    auto it = std::find_if(ds.patients.begin(), ds.patients.end(), [&](const Patient& p) { return p.id == id; });
    if (it == ds.patients.end()) throw ValidationError("history record for unknown patient " + id);
    if (!more_urgent(rec.escalation_rule.target, it->face_urgency))
      throw ValidationError(fmt::format("patient {}: escalation target {} is not above face urgency {}", id,
                                        to_string(rec.escalation_rule.target), to_string(it->face_urgency)));
    if (rec.escalation_rule.reason.empty()) throw ValidationError("patient " + id + ": escalation without reason");
    if (rec.conditions.empty()) throw ValidationError("patient " + id + ": history without conditions");
    auto conds = rec.conditions;
    sort_unique(conds);
    if (conds.size() != rec.conditions.size()) throw ValidationError("patient " + id + ": duplicate condition");
    for (Condition c : conds) ++condition_counts[static_cast<std::size_t>(c)];
  }
  if (condition_counts != kConditionCounts) throw ValidationError("condition counts do not match the regional burden table");
}

namespace {

json patient_to_json(const Patient& p) {
  return json{{"id", p.id},
              {"age", p.age},
              {"age_band", to_string(p.age_band)},
              {"gender", to_string(p.gender)},
              {"locality", to_string(p.locality)},
              {"language", to_string(p.language)},
              {"payment", to_string(p.payment)},
              {"complaint", p.complaint},
              {"face_urgency", to_string(p.face_urgency)},
              {"face_acuity", p.face_acuity},
              {"required_specialty", to_string(p.required_specialty)}};
}

Patient patient_from_json(const json& j) {
  Patient p;
  p.id = j.at("id").get<std::string>();
  p.age = j.at("age").get<int>();
  p.age_band = parse_age_band(j.at("age_band").get<std::string>());
  p.gender = parse_gender(j.at("gender").get<std::string>());
  p.locality = parse_locality(j.at("locality").get<std::string>());
  p.language = parse_language(j.at("language").get<std::string>());
  p.payment = parse_payment(j.at("payment").get<std::string>());
  p.complaint = j.at("complaint").get<std::string>();
  p.face_urgency = parse_urgency(j.at("face_urgency").get<std::string>());
  p.face_acuity = j.at("face_acuity").get<int>();
  p.required_specialty = parse_specialty(j.at("required_specialty").get<std::string>());
  return p;
}

json record_to_json(const HistoryRecord& r) {
  json conds = json::array();
  for (Condition c : r.conditions) conds.push_back(to_string(c));
  return json{{"conditions", conds},
              {"medications", r.medications},
              {"allergies", r.allergies},
              {"escalation_rule",
               {{"target", to_string(r.escalation_rule.target)}, {"reason", r.escalation_rule.reason}}}};
}

HistoryRecord record_from_json(const json& j) {
  HistoryRecord r;
  for (const auto& c : j.at("conditions")) r.conditions.push_back(parse_condition(c.get<std::string>()));
  r.medications = j.at("medications").get<std::vector<std::string>>();
  r.allergies = j.at("allergies").get<std::vector<std::string>>();
  const auto& rule = j.at("escalation_rule");
  r.escalation_rule.target = parse_urgency(rule.at("target").get<std::string>());
  r.escalation_rule.reason = rule.at("reason").get<std::string>();
  return r;
}

}  // namespace

std::string dataset_to_json(const Dataset& ds) {
  json patients = json::array();
  for (const Patient& p : ds.patients) patients.push_back(patient_to_json(p));
  json history = json::object();
  for (const auto& [id, rec] : ds.history) history[id] = record_to_json(rec);
  json root{{"version", kDatasetSchemaVersion}, {"patients", patients}, {"history", history}};
  return root.dump(2) + "\n";
}

Dataset dataset_from_json(const std::string& text) {
  Dataset ds;
  try {
    const json root = json::parse(text);
    const int version = root.at("version").get<int>();
    if (version != kDatasetSchemaVersion)
      throw ValidationError(fmt::format("dataset schema version {} unsupported (expected {})", version,
                                        kDatasetSchemaVersion));
    for (const auto& p : root.at("patients")) ds.patients.push_back(patient_from_json(p));
    for (const auto& [id, rec] : root.at("history").items()) ds.history.emplace(id, record_from_json(rec));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed dataset file: ") + e.what());
  }
  validate_dataset(ds);
  return ds;
}

void export_dataset(const Dataset& ds, const std::filesystem::path& path) {
  write_text_file_atomic(path, dataset_to_json(ds));
}

Dataset import_dataset(const std::filesystem::path& path) { return dataset_from_json(read_text_file(path)); }

}  // namespace opdsim
