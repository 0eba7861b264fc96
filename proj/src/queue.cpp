#include "opdsim/queue.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace opdsim {

std::string_view to_string(EscalationCause c) { return c == EscalationCause::Drift ? "drift" : "memory"; }

void PriorityWeights::validate() const {
  const double sum = urgency + acuity + wait + load;
  if (std::fabs(sum - 1.0) > 1e-9) throw ValidationError(fmt::format("priority weights sum to {}, expected 1", sum));
  if (!(wait_horizon > 0.0)) throw ValidationError("wait_horizon must be positive");
  if (wait_cap < 0.0 || wait_cap > 1.0) throw ValidationError("wait_cap must lie in [0,1]");
}

double wait_factor(Minutes waited, const PriorityWeights& w) {
  return w.wait_cap * std::min(waited / w.wait_horizon, 1.0);
}

double priority(const QueueEntry& entry, Minutes now, double physician_load, const PriorityWeights& w) {
  if (now < entry.enqueue_time)
    throw ContractViolation(fmt::format("priority: now {} precedes enqueue time {}", now, entry.enqueue_time));
  const double u = u_score(entry.effective_urgency);
  const double a = entry.effective_acuity / 10.0;
  const double wf = wait_factor(now - entry.enqueue_time, w);
  const double l = 1.0 - std::clamp(physician_load, 0.0, 1.0);
  return w.urgency * u + w.acuity * a + w.wait * wf + w.load * l;
}

void AdaptiveQueue::push(QueueEntry entry) { entries_.push_back(std::move(entry)); }

double AdaptiveQueue::load_of(const QueueEntry& e, std::span<const double> loads) const {
  if (!e.assigned_physician || *e.assigned_physician >= loads.size()) return 0.0;
  return loads[*e.assigned_physician];
}

void AdaptiveQueue::refresh_priorities(Minutes now, std::span<const double> loads) {
  for (auto& e : entries_) e.priority = priority(e, now, load_of(e, loads), weights_);
}

std::vector<EscalationEvent> AdaptiveQueue::reassess_tick(Minutes now, ReassessContext& ctx,
                                                          std::span<const double> loads) {
  std::vector<EscalationEvent> events;
  if (!ctx.flags.drift) return events;

  for (auto& e : entries_) {
    const Patient& patient = ctx.dataset.patients[e.patient_index];
    const HistoryRecord* record = ctx.flags.memory ? ctx.dataset.history_of(patient.id) : nullptr;

    auto apply = [&](Urgency to, int acuity, EscalationCause cause) {
      EscalationEvent ev{now, e.patient_id, e.effective_urgency, to, cause};
      e.effective_urgency = to;
      e.effective_acuity = std::max(e.effective_acuity, acuity);
      e.escalation_log.push_back(ev);
      events.push_back(std::move(ev));
    };

    if (record && more_urgent(record->escalation_rule.target, e.effective_urgency)) {
      if (auto res = ctx.backend.assess_history_escalation(patient, *record, ctx.memory_rng, ctx.params)) {
        if (more_urgent(res->urgency, e.effective_urgency)) {
          apply(res->urgency, res->acuity, EscalationCause::Memory);
          continue;
        }
      }
    }
    if (e.effective_urgency == Urgency::Critical) continue;
    if (auto next = ctx.backend.assess_drift(e.effective_urgency, record != nullptr, ctx.drift_rng, ctx.params)) {
      if (more_urgent(*next, e.effective_urgency)) apply(*next, escalated_acuity(*next), EscalationCause::Drift);
    }
  }
  refresh_priorities(now, loads);
  return events;
}

std::optional<std::size_t> AdaptiveQueue::select_next(Strategy strategy, Minutes now, std::span<const double> loads,
                                                      std::optional<std::size_t> physician) const {
  std::optional<std::size_t> best;
  double best_priority = 0.0;
  auto earlier = [&](const QueueEntry& a, const QueueEntry& b) {
    if (a.enqueue_time != b.enqueue_time) return a.enqueue_time < b.enqueue_time;
    return a.patient_id < b.patient_id;
  };
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const QueueEntry& e = entries_[i];
    if (physician && e.assigned_physician != physician) continue;
    if (!best) {
      best = i;
      if (strategy == Strategy::Agentic) best_priority = priority(e, now, load_of(e, loads), weights_);
      continue;
    }
    const QueueEntry& cur = entries_[*best];
    switch (strategy) {
      case Strategy::FCFS:
        if (earlier(e, cur)) best = i;
        break;
      case Strategy::RuleBased:
        if (more_urgent(e.face_urgency, cur.face_urgency) || (e.face_urgency == cur.face_urgency && earlier(e, cur)))
          best = i;
        break;
      case Strategy::Agentic: {
        const double p = priority(e, now, load_of(e, loads), weights_);
        const bool tie = std::fabs(p - best_priority) <= 1e-12;
        if ((!tie && p > best_priority) || (tie && earlier(e, cur))) {
          best = i;
          best_priority = p;
        }
        break;
      }
    }
  }
  return best;
}

QueueEntry AdaptiveQueue::dequeue_next(Strategy strategy, Minutes now, std::span<const double> loads,
                                       std::optional<std::size_t> physician) {
  const auto pos = select_next(strategy, now, loads, physician);
  if (!pos) throw ContractViolation("dequeue_next: no waiting entry qualifies");
  QueueEntry out = std::move(entries_[*pos]);
  entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(*pos));
  if (strategy == Strategy::Agentic) out.priority = priority(out, now, load_of(out, loads), weights_);
  return out;
}

std::vector<QueueEntry> AdaptiveQueue::drain() {
  std::vector<QueueEntry> out;
  out.swap(entries_);
  return out;
}

}  // namespace opdsim
