#include "opdsim/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <initializer_list>

#include "json.hpp"
#include "opdsim/io.hpp"

namespace opdsim {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ValidationError(fmt::format("config: '{}' must be an object", where));
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ValidationError(fmt::format("config: unknown key '{}' in {}", key, where));
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

constexpr std::array<const char*, 4> kUrgencyKeys = {"critical", "high", "medium", "low"};

}  // namespace

Minutes StrategyConfig::effective_registration_mean() const {
  return strategy == Strategy::Agentic ? registration_mean * (1.0 - voice_capture_reduction) : registration_mean;
}

IntensityProfile StrategyConfig::intensity_profile() const {
  if (profile.empty()) return default_profile(static_cast<double>(kDatasetSize), session_length);
  double lmax = lambda_max;
  if (lmax <= 0.0)
    for (const auto& b : profile) lmax = std::max(lmax, b.rate);
  return IntensityProfile(profile, lmax);
}

void StrategyConfig::normalize() {
  if (strategy != Strategy::Agentic) {
    memory_enabled = false;
    drift_enabled = false;
  }
}

void StrategyConfig::validate() const {
  if (reg_desks < 1) throw ValidationError("reg_desks must be at least 1");
  if (!(registration_mean > 0.0) || registration_std < 0.0 || registration_min < 0.0)
    throw ValidationError("registration times must be positive");
  if (voice_capture_reduction < 0.0 || voice_capture_reduction >= 1.0)
    throw ValidationError("voice_capture_reduction must lie in [0,1)");
  if (effective_registration_mean() + 6.0 * registration_std < registration_min)
    throw ValidationError("registration truncation bound unreachable");
  for (const auto& c : consult) {
    if (!(c.mean > 0.0) || c.sd < 0.0) throw ValidationError("consult times must be positive");
    if (c.mean + 6.0 * c.sd < consult_min) throw ValidationError("consult truncation bound unreachable");
  }
  if (consult_min < 0.0) throw ValidationError("consult_min must be non-negative");
  if (!(session_length > 0.0)) throw ValidationError("session_length must be positive");
  if (strategy != Strategy::Agentic && (memory_enabled || drift_enabled))
    throw ValidationError("memory and drift apply to the agentic strategy only");
  drift.validate();
  priority_weights.validate();
  (void)intensity_profile();
}

std::string config_to_json(const StrategyConfig& c) {
  json consult = json::object();
  for (std::size_t i = 0; i < 4; ++i) consult[kUrgencyKeys[i]] = {{"mean", c.consult[i].mean}, {"sd", c.consult[i].sd}};
  consult["min"] = c.consult_min;

  json profile = json::array();
  for (const auto& b : c.profile) profile.push_back({b.t, b.rate});

  json j = {
      {"strategy", to_string(c.strategy)},
      {"memory_enabled", c.memory_enabled},
      {"drift_enabled", c.drift_enabled},
      {"registration",
       {{"mean", c.registration_mean},
        {"std", c.registration_std},
        {"min", c.registration_min},
        {"voice_capture_reduction", c.voice_capture_reduction},
        {"desks", c.reg_desks}}},
      {"consult", consult},
      {"session_length", c.session_length},
      {"seed", c.seed},
      {"dataset_seed", c.dataset_seed},
      {"drift",
       {{"check_interval", c.drift.check_interval},
        {"p_high", c.drift.p_high},
        {"p_medium", c.drift.p_medium},
        {"p_low", c.drift.p_low},
        {"history_multiplier", c.drift.history_multiplier},
        {"p_history_escalation", c.drift.p_history_escalation}}},
      {"priority_weights",
       {{"urgency", c.priority_weights.urgency},
        {"acuity", c.priority_weights.acuity},
        {"wait", c.priority_weights.wait},
        {"load", c.priority_weights.load},
        {"wait_cap", c.priority_weights.wait_cap},
        {"wait_horizon", c.priority_weights.wait_horizon}}},
      {"assignment_weights",
       {{"specialty", c.assignment_weights.specialty},
        {"load", c.assignment_weights.load},
        {"availability", c.assignment_weights.availability}}},
      {"profile", {{"breakpoints", profile}, {"lambda_max", c.lambda_max}}},
  };
  return j.dump(2) + "\n";
}

StrategyConfig config_from_json(const std::string& text, StrategyConfig c) {
  try {
    const json j = json::parse(text);
    check_keys(j, "config",
               {"strategy", "memory_enabled", "drift_enabled", "registration", "consult", "session_length", "seed",
                "dataset_seed", "drift", "priority_weights", "assignment_weights", "profile"});
    if (j.contains("strategy")) c.strategy = parse_strategy(j.at("strategy").get<std::string>());
    read(j, "memory_enabled", c.memory_enabled);
    read(j, "drift_enabled", c.drift_enabled);
    read(j, "session_length", c.session_length);
    read(j, "seed", c.seed);
    read(j, "dataset_seed", c.dataset_seed);

    if (j.contains("registration")) {
      const auto& r = j.at("registration");
      check_keys(r, "registration", {"mean", "std", "min", "voice_capture_reduction", "desks"});
      read(r, "mean", c.registration_mean);
      read(r, "std", c.registration_std);
      read(r, "min", c.registration_min);
      read(r, "voice_capture_reduction", c.voice_capture_reduction);
      read(r, "desks", c.reg_desks);
    }
    if (j.contains("consult")) {
      const auto& cs = j.at("consult");
      check_keys(cs, "consult", {"critical", "high", "medium", "low", "min"});
      for (std::size_t i = 0; i < 4; ++i) {
        if (!cs.contains(kUrgencyKeys[i])) continue;
        const auto& e = cs.at(kUrgencyKeys[i]);
        check_keys(e, kUrgencyKeys[i], {"mean", "sd"});
        read(e, "mean", c.consult[i].mean);
        read(e, "sd", c.consult[i].sd);
      }
      read(cs, "min", c.consult_min);
    }
    if (j.contains("drift")) {
      const auto& d = j.at("drift");
      check_keys(d, "drift",
                 {"check_interval", "p_high", "p_medium", "p_low", "history_multiplier", "p_history_escalation"});
      read(d, "check_interval", c.drift.check_interval);
      read(d, "p_high", c.drift.p_high);
      read(d, "p_medium", c.drift.p_medium);
      read(d, "p_low", c.drift.p_low);
      read(d, "history_multiplier", c.drift.history_multiplier);
      read(d, "p_history_escalation", c.drift.p_history_escalation);
    }
    if (j.contains("priority_weights")) {
      const auto& w = j.at("priority_weights");
      check_keys(w, "priority_weights", {"urgency", "acuity", "wait", "load", "wait_cap", "wait_horizon"});
      read(w, "urgency", c.priority_weights.urgency);
      read(w, "acuity", c.priority_weights.acuity);
      read(w, "wait", c.priority_weights.wait);
      read(w, "load", c.priority_weights.load);
      read(w, "wait_cap", c.priority_weights.wait_cap);
      read(w, "wait_horizon", c.priority_weights.wait_horizon);
    }
    if (j.contains("assignment_weights")) {
      const auto& w = j.at("assignment_weights");
      check_keys(w, "assignment_weights", {"specialty", "load", "availability"});
      read(w, "specialty", c.assignment_weights.specialty);
      read(w, "load", c.assignment_weights.load);
      read(w, "availability", c.assignment_weights.availability);
    }
    if (j.contains("profile")) {
      const auto& p = j.at("profile");
      check_keys(p, "profile", {"breakpoints", "lambda_max"});
      if (p.contains("breakpoints")) {
        c.profile.clear();
        for (const auto& bp : p.at("breakpoints")) c.profile.push_back({bp.at(0).get<double>(), bp.at(1).get<double>()});
      }
      read(p, "lambda_max", c.lambda_max);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  return c;
}

StrategyConfig load_config(const std::filesystem::path& path, StrategyConfig base) {
  return config_from_json(read_text_file(path), std::move(base));
}

}  // namespace opdsim
