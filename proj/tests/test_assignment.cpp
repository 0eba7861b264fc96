#include <set>

#include "doctest.h"
#include "opdsim/assignment.hpp"

using namespace opdsim;

namespace {

Patient patient_needing(Specialty s) {
  Patient p;
  p.id = "P-TEST";
  p.required_specialty = s;
  return p;
}

}  // namespace

TEST_CASE("hand-computed scores at the extremes") {
  auto roster = default_roster();
  const Patient child = patient_needing(Specialty::Pediatrics);

  const auto best = score(roster[2], child, roster);
  CHECK(best.specialty_match == 1.0);
  CHECK(best.load_balance == 1.0);
  CHECK(best.availability == 1.0);
  CHECK(best.total == doctest::Approx(1.00));

  roster[5].queue_length = 4;
  roster[5].state = PhysicianState::Busy;
  const auto worst = score(roster[5], child, roster);
  CHECK(worst.total == doctest::Approx(0.00));

  roster[0].queue_length = 2;
  const auto gm = score(roster[0], child, roster);
  CHECK(gm.specialty_match == 0.5);
  CHECK(gm.load_balance == doctest::Approx(0.5));
  CHECK(gm.total == doctest::Approx(0.5 * 0.5 + 0.3 * 0.5 + 0.2));
}

TEST_CASE("scores stay inside [0, 1]") {
  auto roster = default_roster();
  for (int q = 0; q < 5; ++q) {
    for (std::size_t i = 0; i < roster.size(); ++i) {
      roster[i].queue_length = static_cast<int>((i * 7 + q) % 5);
      roster[i].state = (i + q) % 2 ? PhysicianState::Busy : PhysicianState::Idle;
    }
    for (Specialty s : kAllSpecialties)
      for (const auto& ph : roster) {
        const auto sc = score(ph, patient_needing(s), roster);
        CHECK(sc.total >= 0.0);
        CHECK(sc.total <= 1.0);
      }
  }
}

TEST_CASE("FCFS cycles through the roster in order") {
  auto roster = default_roster();
  Assigner a(Strategy::FCFS);
  const Patient p = patient_needing(Specialty::Surgery);
  for (int round = 0; round < 2; ++round)
    for (std::size_t i = 0; i < roster.size(); ++i) CHECK(a.assign(p, roster) == i);
}

TEST_CASE("rule-based picks the shortest queue among exact matches, else overall") {
  auto roster = default_roster();
  Assigner a(Strategy::RuleBased);
  roster[0].queue_length = 3;
  CHECK(a.assign(patient_needing(Specialty::GeneralMedicine), roster) == 1);
  roster[1].queue_length = 3;
  CHECK(a.assign(patient_needing(Specialty::GeneralMedicine), roster) == 0);
  const std::vector<std::size_t> cands = {0, 1, 5};
  roster[5].queue_length = 1;
  CHECK(a.assign(patient_needing(Specialty::Pediatrics), roster, cands) == 5);
}

TEST_CASE("ties go to the lowest physician id") {
  auto roster = default_roster();
  Assigner a(Strategy::Agentic);
  // Both GM physicians score the same for a GM patient.
  CHECK(a.assign(patient_needing(Specialty::GeneralMedicine), roster) == 0);
  std::swap(roster[0], roster[1]);
  CHECK(roster[a.assign(patient_needing(Specialty::GeneralMedicine), roster)].id == "DR-01");
}

TEST_CASE("agentic choice is invariant to scaling the weights") {
  for (double k : {0.5, 2.0, 10.0, 1e6}) {
    auto roster = default_roster();
    Assigner base(Strategy::Agentic);
    Assigner scaled(Strategy::Agentic, AssignmentWeights{0.5 * k, 0.3 * k, 0.2 * k});
    for (int step = 0; step < 40; ++step) {
      for (std::size_t i = 0; i < roster.size(); ++i) {
        roster[i].queue_length = static_cast<int>((i * 3 + step) % 4);
        roster[i].state = (i + step) % 3 == 0 ? PhysicianState::Busy : PhysicianState::Idle;
      }
      const Patient p = patient_needing(kAllSpecialties[step % kAllSpecialties.size()]);
      CHECK(base.assign(p, roster) == scaled.assign(p, roster));
    }
  }
}

TEST_CASE("default roster has six physicians with two in general medicine") {
  const auto roster = default_roster();
  CHECK(roster.size() == 6);
  std::set<std::string> ids;
  int gm = 0;
  for (const auto& p : roster) {
    ids.insert(p.id);
    gm += p.specialty == Specialty::GeneralMedicine;
    CHECK(p.state == PhysicianState::Idle);
  }
  CHECK(ids.size() == 6);
  CHECK(gm == 2);
}

TEST_CASE("roster JSON round trip and rejection") {
  const auto roster = default_roster();
  CHECK(roster_from_json(roster_to_json(roster)) == roster);
  CHECK_THROWS_AS(roster_from_json("[]"), ValidationError);
  CHECK_THROWS_AS(roster_from_json(R"([{"id":"A","specialty":"Surgery"},{"id":"A","specialty":"Surgery"}])"),
                  ValidationError);
  CHECK_THROWS_AS(roster_from_json(R"([{"id":"A","specialty":"Dentistry"}])"), ValidationError);
  CHECK_THROWS_AS(roster_from_json("{"), ValidationError);
}

TEST_CASE("empty roster is a contract violation") {
  Assigner a(Strategy::Agentic);
  CHECK_THROWS_AS(a.assign(patient_needing(Specialty::Surgery), {}), ContractViolation);
}
