#include "opdsim/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <queue>
#include <thread>

#include "opdsim/stats.hpp"

namespace opdsim {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::ConsultEnd: return "ConsultEnd";
    case EventKind::ReassessTick: return "ReassessTick";
    case EventKind::RegistrationDone: return "RegistrationDone";
    case EventKind::Arrival: return "Arrival";
    case EventKind::ConsultStart: return "ConsultStart";
    case EventKind::SessionEnd: return "SessionEnd";
  }
  return "?";
}

bool SimEvent::before(const SimEvent& a, const SimEvent& b) {
  if (a.time != b.time) return a.time < b.time;
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.id < b.id;
}

Minutes PatientOutcome::wait() const {
  if (!consult_start || !registration_done) throw ContractViolation("wait of an unserved patient");
  return *consult_start - *registration_done;
}

Minutes PatientOutcome::critical_wait() const {
  if (!consult_start || !critical_since) throw ContractViolation("critical wait of a non-critical patient");
  return *consult_start - *critical_since;
}

std::string_view to_string(Ablation a) {
  switch (a) {
    case Ablation::Full: return "full";
    case Ablation::NoMemory: return "no-memory";
    case Ablation::NoDrift: return "no-drift";
    case Ablation::Neither: return "neither";
  }
  return "?";
}

StrategyConfig apply_ablation(StrategyConfig config, Ablation ablation) {
  config.strategy = Strategy::Agentic;
  config.memory_enabled = ablation == Ablation::Full || ablation == Ablation::NoDrift;
  config.drift_enabled = ablation == Ablation::Full || ablation == Ablation::NoMemory;
  return config;
}

namespace {

struct EventAfter {
  bool operator()(const SimEvent& a, const SimEvent& b) const { return SimEvent::before(b, a); }
};

class Session {
 public:
  Session(const StrategyConfig& config, const Dataset& dataset, std::span<const Physician> roster,
          const IntensityProfile& profile, const SessionOptions& options)
      : cfg_(config),
        dataset_(dataset),
        roster_(roster.begin(), roster.end()),
        profile_(profile),
        trace_(options.trace),
        backend_(options.backend),
        assigner_(config.strategy, config.assignment_weights),
        queue_(config.priority_weights),
        reg_rng_(make_stream(config.seed, Stream::Registration)),
        consult_rng_(make_stream(config.seed, Stream::Consult)),
        drift_rng_(make_stream(config.seed, Stream::Drift)),
        memory_rng_(make_stream(config.seed, Stream::Memory)),
        triage_rng_(make_stream(config.seed, Stream::Triage)) {
    if (!backend_) {
      owned_backend_ = std::make_unique<CalibratedTriageBackend>();
      backend_ = owned_backend_.get();
    }
    for (auto& p : roster_) p = Physician{p.id, p.specialty};
    assignments_.assign(roster_.size(), 0);
    tokens_.resize(roster_.size());
  }

  SessionMetrics run() {
    const std::size_t n = dataset_.patients.size();
    const ArrivalSample arrivals = sample_arrivals(profile_, n, cfg_.seed);
    arrival_attempts_ = arrivals.attempts;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng pairing = make_stream(cfg_.seed, Stream::Pairing);
    std::shuffle(order.begin(), order.end(), pairing);

    outcomes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Patient& p = dataset_.patients[i];
      auto& o = outcomes_[i];
      o.patient_id = p.id;
      o.face_urgency = p.face_urgency;
      o.final_urgency = p.face_urgency;
      o.has_history = dataset_.history_of(p.id) != nullptr;
    }
    for (std::size_t k = 0; k < n; ++k) {
      outcomes_[order[k]].arrival = arrivals.times[k];
      schedule(arrivals.times[k], EventKind::Arrival, order[k]);
    }
    if (cfg_.drift_enabled) {
      const Minutes step = cfg_.drift.check_interval;
      for (int k = 1; k * step < cfg_.session_length; ++k) schedule(k * step, EventKind::ReassessTick);
    }
    schedule(cfg_.session_length, EventKind::SessionEnd);

    desks_free_ = cfg_.reg_desks;
    while (!calendar_.empty()) {
      const SimEvent ev = calendar_.top();
      calendar_.pop();
      if (ev.kind == EventKind::ConsultStart) {
        dispatch_pending_ = false;
        dispatch(ev.time);
        continue;
      }
      log(ev.time, ev.kind, ev.patient, ev.physician);
      switch (ev.kind) {
        case EventKind::Arrival: on_arrival(ev.time, *ev.patient); break;
        case EventKind::RegistrationDone: on_registration_done(ev.time, *ev.patient); break;
        case EventKind::ReassessTick: on_tick(ev.time); break;
        case EventKind::ConsultEnd: on_consult_end(ev.time, *ev.patient, *ev.physician); break;
        case EventKind::SessionEnd: return finish();
        case EventKind::ConsultStart: break;
      }
    }
    throw ContractViolation("event calendar drained before session end");
  }

 private:
  void schedule(Minutes t, EventKind kind, std::optional<std::size_t> patient = std::nullopt,
                std::optional<std::size_t> physician = std::nullopt) {
    calendar_.push(SimEvent{t, kind, patient, physician, next_event_id_++});
  }

  void request_dispatch(Minutes t) {
    if (dispatch_pending_) return;
    dispatch_pending_ = true;
    schedule(t, EventKind::ConsultStart);
  }

  void log(Minutes t, EventKind kind, std::optional<std::size_t> patient, std::optional<std::size_t> physician) {
    if (!trace_) return;
    fmt::format_to(std::back_inserter(*trace_), "{:.6f},{},{},{}\n", t, to_string(kind),
                   patient ? dataset_.patients[*patient].id : std::string(),
                   physician ? roster_[*physician].id : std::string());
  }

  Minutes registration_time() {
    return truncated_normal(reg_rng_, cfg_.effective_registration_mean(), cfg_.registration_std,
                            cfg_.registration_min);
  }

  void on_arrival(Minutes t, std::size_t p) {
    if (desks_free_ > 0) {
      --desks_free_;
      schedule(t + registration_time(), EventKind::RegistrationDone, p);
    } else {
      registration_line_.push_back(p);
    }
  }

  std::vector<double> physician_loads() const {
    std::vector<double> loads(roster_.size());
    for (std::size_t i = 0; i < roster_.size(); ++i) loads[i] = normalized_load(roster_[i], roster_);
    return loads;
  }

  void on_registration_done(Minutes t, std::size_t p) {
    auto& o = outcomes_[p];
    o.registration_done = t;
    if (!registration_line_.empty()) {
      const std::size_t next = registration_line_.front();
      registration_line_.pop_front();
      schedule(t + registration_time(), EventKind::RegistrationDone, next);
    } else {
      ++desks_free_;
    }

    const Patient& patient = dataset_.patients[p];
    QueueEntry entry;
    entry.patient_index = p;
    entry.patient_id = patient.id;
    entry.enqueue_time = t;
    entry.face_urgency = patient.face_urgency;
    entry.effective_urgency = patient.face_urgency;
    entry.effective_acuity = patient.face_acuity;
    if (cfg_.strategy != Strategy::FCFS) {
      const TriageResult triage = backend_->triage_face_value(patient, triage_rng_);
      entry.effective_urgency = triage.urgency;
      entry.effective_acuity = triage.acuity;
    }
    if (cfg_.memory_enabled) {
      if (const HistoryRecord* record = dataset_.history_of(patient.id)) o.alerts = generate_medication_alerts(*record);
    }
    o.final_urgency = entry.effective_urgency;
    if (entry.effective_urgency == Urgency::Critical) o.critical_since = t;

    const std::size_t doc = assigner_.assign(patient, roster_);
    entry.assigned_physician = doc;
    ++roster_[doc].queue_length;
    ++assignments_[doc];
    if (cfg_.strategy == Strategy::FCFS) tokens_[doc].push_back(p);
    const auto loads = physician_loads();
    entry.priority = priority(entry, t, loads[doc], cfg_.priority_weights);
    queue_.push(std::move(entry));
    request_dispatch(t);
  }

  void on_tick(Minutes t) {
    ReassessContext ctx{dataset_, *backend_, drift_rng_, memory_rng_, cfg_.drift,
                        ReassessFlags{cfg_.memory_enabled, cfg_.drift_enabled}};
    const auto loads = physician_loads();
    for (auto& ev : queue_.reassess_tick(t, ctx, loads)) {
      const std::size_t p = index_of_patient(ev.patient_id);
      auto& o = outcomes_[p];
      o.final_urgency = ev.to;
      if (ev.to == Urgency::Critical && !o.critical_since) o.critical_since = t;
      if (ev.cause == EscalationCause::Memory) ++memory_escalations_;
      ++drift_events_;
      o.escalations.push_back(std::move(ev));
    }
  }

  std::size_t index_of_patient(const std::string& id) const {
    for (const auto& e : queue_.entries())
      if (e.patient_id == id) return e.patient_index;
    throw ContractViolation("escalation for a patient not in the queue");
  }

  void start_consult(Minutes t, QueueEntry entry, std::size_t doc) {
    const std::size_t p = entry.patient_index;
    auto& o = outcomes_[p];
    --roster_[*entry.assigned_physician].queue_length;
    Physician& phys = roster_[doc];
    const ServiceTime st = cfg_.consult[index_of(entry.effective_urgency)];
    const Minutes length = truncated_normal(consult_rng_, st.mean, st.sd, cfg_.consult_min);
    phys.state = PhysicianState::Busy;
    phys.busy_until = t + length;
    ++phys.served_count;
    o.consult_start = t;
    o.consult_urgency = entry.effective_urgency;
    o.final_urgency = entry.effective_urgency;
    o.physician = doc;
    o.specialty_match = phys.specialty == dataset_.patients[p].required_specialty;
    log(t, EventKind::ConsultStart, p, doc);
    schedule(t + length, EventKind::ConsultEnd, p, doc);
  }

  void dispatch(Minutes t) {
    if (cfg_.strategy == Strategy::FCFS) {
      for (std::size_t d = 0; d < roster_.size(); ++d) {
        if (roster_[d].state != PhysicianState::Idle || tokens_[d].empty()) continue;
        tokens_[d].pop_front();
        QueueEntry entry = queue_.dequeue_next(Strategy::FCFS, t, {}, d);
        start_consult(t, std::move(entry), d);
      }
      return;
    }
    for (;;) {
      std::vector<std::size_t> idle;
      for (std::size_t d = 0; d < roster_.size(); ++d)
        if (roster_[d].state == PhysicianState::Idle) idle.push_back(d);
      if (idle.empty() || queue_.empty()) return;
      const auto loads = physician_loads();
      QueueEntry entry = queue_.dequeue_next(cfg_.strategy, t, loads);
      const std::size_t doc = assigner_.assign(dataset_.patients[entry.patient_index], roster_, idle);
      start_consult(t, std::move(entry), doc);
    }
  }

  void on_consult_end(Minutes t, std::size_t p, std::size_t doc) {
    outcomes_[p].consult_end = t;
    roster_[doc].state = PhysicianState::Idle;
    request_dispatch(t);
  }

  SessionMetrics finish() {
    // Consults still running finish after closing time.
    while (!calendar_.empty()) {
      const SimEvent ev = calendar_.top();
      calendar_.pop();
      if (ev.kind == EventKind::ConsultEnd) outcomes_[*ev.patient].consult_end = ev.time;
    }

    SessionMetrics m;
    m.strategy = cfg_.strategy;
    m.memory_enabled = cfg_.memory_enabled;
    m.drift_enabled = cfg_.drift_enabled;
    m.seed = cfg_.seed;
    m.session_length = cfg_.session_length;
    m.arrivals = outcomes_.size();
    m.drift_event_count = drift_events_;
    m.memory_escalation_count = memory_escalations_;
    m.backend_calls = backend_->calls();
    m.arrival_attempts = arrival_attempts_;
    m.physician_assignments = assignments_;
    for (const auto& p : roster_) m.physician_served.push_back(p.served_count);

    std::vector<double> waits;
    std::array<std::vector<double>, 4> by_urgency, by_face;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& o : outcomes_) {
      ++m.final_composition[index_of(o.final_urgency)];
      if (o.served()) {
        ++m.served_count;
        if (o.specialty_match) ++m.specialty_matches;
        const Minutes w = o.wait();
        waits.push_back(w);
        by_face[index_of(o.face_urgency)].push_back(w);
        const Urgency u = *o.consult_urgency;
        by_urgency[index_of(u)].push_back(u == Urgency::Critical ? o.critical_wait() : w);
        if (u == Urgency::Critical) {
          const Minutes cw = o.critical_wait();
          ++m.critical_denominator10;
          ++m.critical_denominator15;
          if (cw < 10.0) ++m.critical_within10;
          if (cw < 15.0) ++m.critical_within15;
        }
      } else if (o.final_urgency == Urgency::Critical && o.critical_since) {
        const Minutes censored = cfg_.session_length - *o.critical_since;
        if (censored >= 10.0) ++m.critical_denominator10;
        if (censored >= 15.0) ++m.critical_denominator15;
      }
    }
    m.unserved_count = m.arrivals - m.served_count;
    m.critical_count_effective = m.final_composition[index_of(Urgency::Critical)];
    m.throughput_per_hour = static_cast<double>(m.served_count) / (cfg_.session_length / 60.0);
    m.specialty_match_rate = m.served_count ? static_cast<double>(m.specialty_matches) / m.served_count : 0.0;
    if (!waits.empty()) {
      m.avg_wait = mean(waits);
      m.median_wait = median(waits);
      m.p95_wait = quantile(waits, 0.95);
    }
    for (std::size_t u = 0; u < 4; ++u) {
      m.served_by_urgency[u] = by_urgency[u].size();
      m.mean_wait_by_urgency[u] = by_urgency[u].empty() ? nan : mean(by_urgency[u]);
      m.served_by_face[u] = by_face[u].size();
      m.mean_wait_by_face[u] = by_face[u].empty() ? nan : mean(by_face[u]);
    }
    auto pct = [](std::size_t k, std::size_t n) { return n ? 100.0 * static_cast<double>(k) / n : 100.0; };
    m.pct_critical_within10 = pct(m.critical_within10, m.critical_denominator10);
    m.pct_critical_within15 = pct(m.critical_within15, m.critical_denominator15);
    m.patients = std::move(outcomes_);
    return m;
  }

  const StrategyConfig& cfg_;
  const Dataset& dataset_;
  std::vector<Physician> roster_;
  const IntensityProfile& profile_;
  std::string* trace_;
  TriageBackend* backend_;
  std::unique_ptr<TriageBackend> owned_backend_;
  Assigner assigner_;
  AdaptiveQueue queue_;
  Rng reg_rng_, consult_rng_, drift_rng_, memory_rng_, triage_rng_;

  std::priority_queue<SimEvent, std::vector<SimEvent>, EventAfter> calendar_;
  std::uint64_t next_event_id_ = 0;
  bool dispatch_pending_ = false;
  int desks_free_ = 0;
  std::deque<std::size_t> registration_line_;
  std::vector<std::deque<std::size_t>> tokens_;
  std::vector<int> assignments_;
  std::vector<PatientOutcome> outcomes_;
  std::size_t drift_events_ = 0;
  std::size_t memory_escalations_ = 0;
  std::size_t arrival_attempts_ = 0;
};

}  // namespace

SessionMetrics run_session(StrategyConfig config, const Dataset& dataset, std::span<const Physician> roster,
                           const IntensityProfile& profile, const SessionOptions& options) {
  config.normalize();
  config.validate();
  if (roster.empty()) throw ValidationError("roster must contain at least one physician");
  if (dataset.patients.empty()) throw ValidationError("dataset has no patients");
  if (options.trace) {
    options.trace->clear();
    options.trace->append(kTraceHeader);
  }
  Session session(config, dataset, roster, profile, options);
  return session.run();
}

std::vector<SessionMetrics> run_experiment(const StrategyConfig& config, std::size_t n_runs, std::uint64_t base_seed,
                                           const Dataset& dataset, std::span<const Physician> roster,
                                           unsigned jobs) {
  if (n_runs == 0) throw ValidationError("n_runs must be at least 1");
  const IntensityProfile profile = config.intensity_profile();
  std::vector<SessionMetrics> out(n_runs);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n_runs));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n_runs; i = next++) {
      try {
        StrategyConfig c = config;
        c.seed = base_seed + i;
        out[i] = run_session(c, dataset, roster, profile);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

AblationResults run_ablations(const StrategyConfig& config, std::size_t n_runs, std::uint64_t base_seed,
                              const Dataset& dataset, std::span<const Physician> roster, unsigned jobs) {
  AblationResults r;
  for (std::size_t i = 0; i < kAllAblations.size(); ++i)
    r.runs[i] = run_experiment(apply_ablation(config, kAllAblations[i]), n_runs, base_seed, dataset, roster, jobs);
  return r;
}

}  // namespace opdsim
