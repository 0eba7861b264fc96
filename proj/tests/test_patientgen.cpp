#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "opdsim/io.hpp"
#include "opdsim/patientgen.hpp"

using namespace opdsim;

namespace {

template <typename E, std::size_t N>
void check_marginal(const std::vector<Patient>& ps, E Patient::*field, const std::array<double, N>& pct) {
  std::array<int, N> counts{};
  for (const auto& p : ps) ++counts[static_cast<std::size_t>(p.*field)];
  for (std::size_t i = 0; i < N; ++i) CHECK(std::abs(counts[i] - pct[i] * 368.0) <= 2.0);
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("opdsim_test_" + name);
}

}  // namespace

TEST_CASE("seed 42 dataset has the fixed urgency counts and 120 histories") {
  const Dataset d = generate_dataset(42);
  REQUIRE(d.patients.size() == 368);
  std::array<int, 4> counts{};
  for (const auto& p : d.patients) ++counts[index_of(p.face_urgency)];
  CHECK(counts == std::array<int, 4>{13, 36, 158, 161});
  CHECK(d.history.size() == 120);
}

TEST_CASE("generation is deterministic per seed") {
  CHECK(dataset_to_json(generate_dataset(42)) == dataset_to_json(generate_dataset(42)));
  CHECK(dataset_to_json(generate_dataset(42)) != dataset_to_json(generate_dataset(43)));
}

TEST_CASE("invariants hold across seeds") {
  for (std::uint64_t seed : {0ull, 1ull, 7ull, 42ull, 1234567ull, 0xffffffffffffffffull}) {
    CAPTURE(seed);
    const Dataset d = generate_dataset(seed);
    CHECK_NOTHROW(validate_dataset(d));

    std::set<std::string> ids;
    std::array<int, 4> counts{};
    for (const auto& p : d.patients) {
      ids.insert(p.id);
      ++counts[index_of(p.face_urgency)];
      CHECK(acuity_band(p.face_urgency).contains(p.face_acuity));
      const auto r = age_range(p.age_band);
      CHECK(p.age >= r.lo);
      CHECK(p.age <= r.hi);
    }
    CHECK(ids.size() == 368);
    CHECK(counts == std::array<int, 4>{13, 36, 158, 161});

    check_marginal(d.patients, &Patient::age_band, std::array<double, 5>{.15, .20, .25, .22, .18});
    check_marginal(d.patients, &Patient::gender, std::array<double, 2>{.62, .38});
    check_marginal(d.patients, &Patient::locality, std::array<double, 3>{.45, .25, .30});
    check_marginal(d.patients, &Patient::language, std::array<double, 3>{.85, .10, .05});
    check_marginal(d.patients, &Patient::payment, std::array<double, 3>{.35, .40, .25});

    std::array<std::size_t, kConditionCount> tags{};
    for (const auto& [id, rec] : d.history) {
      const auto it = std::find_if(d.patients.begin(), d.patients.end(), [&](const Patient& p) { return p.id == id; });
      REQUIRE(it != d.patients.end());
      CHECK(it->face_urgency != Urgency::Critical);
      CHECK(more_urgent(rec.escalation_rule.target, it->face_urgency));
      CHECK_FALSE(rec.escalation_rule.reason.empty());
      for (Condition c : rec.conditions) ++tags[static_cast<std::size_t>(c)];
    }
    CHECK(tags == kConditionCounts);
  }
}

TEST_CASE("condition counts match the published disease burden") {
  const Dataset d = generate_dataset(42);
  std::size_t diabetes = 0, hypertension = 0;
  for (const auto& [id, rec] : d.history) {
    diabetes += rec.has(Condition::Diabetes);
    hypertension += rec.has(Condition::Hypertension);
  }
  CHECK(diabetes == 61);
  CHECK(hypertension == 46);
}

TEST_CASE("the seven showcase presentations appear with their records") {
  const Dataset d = generate_dataset(42);
  int found = 0;
  for (const auto& a : archetypes()) {
    for (const auto& p : d.patients) {
      if (p.complaint != a.complaint) continue;
      const HistoryRecord* rec = d.history_of(p.id);
      REQUIRE(rec != nullptr);
      CHECK(p.face_urgency == Urgency::Low);
      CHECK(rec->escalation_rule.target == a.target);
      ++found;
      break;
    }
  }
  CHECK(found == 7);

  bool tia = false;
  for (const auto& p : d.patients) {
    if (p.complaint != "Mild headache, dizziness") continue;
    const HistoryRecord* rec = d.history_of(p.id);
    tia = rec && rec->escalation_rule.target == Urgency::Critical &&
          rec->escalation_rule.reason.find("TIA") != std::string::npos;
  }
  CHECK(tia);
}

TEST_CASE("export and import round-trip") {
  const Dataset d = generate_dataset(42);
  const auto path = temp_path("roundtrip.json");
  export_dataset(d, path);
  CHECK(import_dataset(path) == d);
  std::filesystem::remove(path);
}

TEST_CASE("import rejects broken files") {
  const Dataset d = generate_dataset(42);
  auto j = nlohmann::json::parse(dataset_to_json(d));

  SUBCASE("367 patients") {
    j["patients"].erase(j["patients"].end() - 1);
    CHECK_THROWS_AS(dataset_from_json(j.dump()), ValidationError);
  }
  SUBCASE("target not above face urgency") {
    auto& first = *j["history"].begin();
    first["escalation_rule"]["target"] = "Low";
    CHECK_THROWS_AS(dataset_from_json(j.dump()), ValidationError);
  }
  SUBCASE("schema version mismatch") {
    j["version"] = kDatasetSchemaVersion + 1;
    CHECK_THROWS_AS(dataset_from_json(j.dump()), ValidationError);
  }
  SUBCASE("not json") { CHECK_THROWS_AS(dataset_from_json("{"), ValidationError); }
}

TEST_CASE("missing file raises an I/O error") {
  CHECK_THROWS_AS(import_dataset(temp_path("does_not_exist.json")), IoError);
}

TEST_CASE("history store needs enough eligible patients") {
  auto patients = generate_patients(42);
  for (auto& p : patients) {
    p.face_urgency = Urgency::Critical;
    p.face_acuity = 9;
  }
  CHECK_THROWS_AS(generate_history_store(patients, 42), ValidationError);
}
