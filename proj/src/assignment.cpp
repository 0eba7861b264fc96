#include "opdsim/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "json.hpp"
#include "opdsim/io.hpp"

namespace opdsim {
namespace {

// Scores this close are treated as equal, so that rescaling the weights
// cannot flip a tie through rounding.
bool nearly_equal(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace

double specialty_match(Specialty physician, Specialty required) {
  if (physician == required) return 1.0;
  if (physician == Specialty::GeneralMedicine) return 0.5;
  return 0.0;
}

double normalized_load(const Physician& physician, std::span<const Physician> roster) {
  int max_queue = 1;
  for (const auto& p : roster) max_queue = std::max(max_queue, p.queue_length);
  return static_cast<double>(physician.queue_length) / max_queue;
}

AssignmentScore score(const Physician& physician, const Patient& patient, std::span<const Physician> roster,
                      const AssignmentWeights& weights) {
  AssignmentScore s;
  s.physician_id = physician.id;
  s.specialty_match = specialty_match(physician.specialty, patient.required_specialty);
  s.load_balance = 1.0 - normalized_load(physician, roster);
  s.availability = physician.state == PhysicianState::Idle ? 1.0 : 0.0;
  s.total = weights.specialty * s.specialty_match + weights.load * s.load_balance +
            weights.availability * s.availability;
  return s;
}

std::size_t Assigner::assign(const Patient& patient, std::span<const Physician> roster,
                             std::span<const std::size_t> candidates) {
  if (roster.empty()) throw ContractViolation("assign: empty roster");
  std::vector<std::size_t> pool = candidates.empty() ? all_indices(roster.size())
                                                     : std::vector<std::size_t>(candidates.begin(), candidates.end());
  for (std::size_t idx : pool)
    if (idx >= roster.size()) throw ContractViolation("assign: candidate index out of range");

  auto lower_id = [&](std::size_t a, std::size_t b) { return roster[a].id < roster[b].id; };

  switch (strategy_) {
    case Strategy::FCFS: {
      // Cycle over the roster; skip physicians outside the candidate set.
      for (std::size_t step = 0; step < roster.size(); ++step) {
        const std::size_t idx = (next_round_robin_ + step) % roster.size();
        if (std::find(pool.begin(), pool.end(), idx) != pool.end()) {
          next_round_robin_ = (idx + 1) % roster.size();
          return idx;
        }
      }
      throw ContractViolation("assign: no candidate physician");
    }
    case Strategy::RuleBased: {
      auto shortest = [&](const std::vector<std::size_t>& group) {
        return *std::min_element(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
          if (roster[a].queue_length != roster[b].queue_length)
            return roster[a].queue_length < roster[b].queue_length;
          return lower_id(a, b);
        });
      };
      std::vector<std::size_t> exact;
      for (std::size_t idx : pool)
        if (roster[idx].specialty == patient.required_specialty) exact.push_back(idx);
      return shortest(exact.empty() ? pool : exact);
    }
    case Strategy::Agentic: {
      std::size_t best = pool.front();
      double best_total = score(roster[best], patient, roster, weights_).total;
      for (std::size_t k = 1; k < pool.size(); ++k) {
        const std::size_t idx = pool[k];
        const double total = score(roster[idx], patient, roster, weights_).total;
        if (nearly_equal(total, best_total)) {
          if (lower_id(idx, best)) best = idx;
        } else if (total > best_total) {
          best = idx;
          best_total = total;
        }
      }
      return best;
    }
  }
  throw ContractViolation("assign: unknown strategy");
}

std::vector<Physician> default_roster() {
  return {
      {"DR-01", Specialty::GeneralMedicine}, {"DR-02", Specialty::GeneralMedicine},
      {"DR-03", Specialty::Pediatrics},      {"DR-04", Specialty::ObGyn},
      {"DR-05", Specialty::Orthopedics},     {"DR-06", Specialty::Surgery},
  };
}

std::string roster_to_json(std::span<const Physician> roster) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : roster) arr.push_back({{"id", p.id}, {"specialty", to_string(p.specialty)}});
  return arr.dump(2) + "\n";
}

std::vector<Physician> roster_from_json(const std::string& text) {
  std::vector<Physician> roster;
  try {
    const auto arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw ValidationError("roster file must be a JSON array");
    for (const auto& entry : arr) {
      Physician p;
      p.id = entry.at("id").get<std::string>();
      p.specialty = parse_specialty(entry.at("specialty").get<std::string>());
      roster.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed roster file: ") + e.what());
  }
  if (roster.empty()) throw ValidationError("roster must contain at least one physician");
  std::set<std::string> ids;
  for (const auto& p : roster)
    if (!ids.insert(p.id).second) throw ValidationError("duplicate physician id " + p.id);
  return roster;
}

std::vector<Physician> load_roster(const std::filesystem::path& path) {
  return roster_from_json(read_text_file(path));
}

}  // namespace opdsim
