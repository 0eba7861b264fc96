// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "opdsim/arrivals.hpp"
#include "opdsim/assignment.hpp"
#include "opdsim/engine.hpp"
#include "opdsim/queue.hpp"
#include "opdsim/report.hpp"
#include "opdsim/stats.hpp"

using namespace opdsim;

namespace {

constexpr std::size_t kRuns = 30;
constexpr std::uint64_t kBaseSeed = 1;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  fmt::print("criterion {:>2}: {}  {}\n", id, pass ? "PASS" : "FAIL", detail);
  if (!pass) ++failures;
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

StrategyConfig config_for(Strategy s) {
  StrategyConfig c;
  c.strategy = s;
  c.memory_enabled = c.drift_enabled = s == Strategy::Agentic;
  c.normalize();
  return c;
}

std::vector<double> finite(std::vector<double> xs) {
  std::erase_if(xs, [](double x) { return !std::isfinite(x); });
  return xs;
}

// Returns the first broken invariant, or an empty string.
std::string check_run(const SessionMetrics& m) {
  if (m.arrivals != 368 || m.patients.size() != 368) return "arrival count";
  if (m.served_count + m.unserved_count != m.arrivals) return "served + unserved != arrivals";
  std::size_t composition = 0;
  for (std::size_t c : m.final_composition) composition += c;
  if (composition != 368) return "composition does not sum to 368";

  std::vector<std::vector<std::pair<Minutes, Minutes>>> busy(m.physician_served.size());
  std::size_t escalations = 0;
  for (const auto& o : m.patients) {
    if (o.registration_done && *o.registration_done < o.arrival) return o.patient_id + " registered before arrival";
    if (o.served()) {
      if (!o.registration_done || !o.consult_end || !o.physician) return o.patient_id + " incomplete record";
      if (*o.consult_start < *o.registration_done) return o.patient_id + " consult before registration";
      if (*o.consult_end <= *o.consult_start) return o.patient_id + " empty consult";
      if (*o.consult_start > m.session_length) return o.patient_id + " consult after close";
      busy[*o.physician].push_back({*o.consult_start, *o.consult_end});
    }
    escalations += o.escalations.size();
  }
  if (escalations != m.drift_event_count) return "escalation log does not match the drift count";
  for (auto& spans : busy) {
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 1; i < spans.size(); ++i)
      if (spans[i].first < spans[i - 1].second) return "overlapping consults";
  }
  return {};
}

std::string check_escalations(const SessionMetrics& m) {
  for (const auto& o : m.patients) {
    Urgency level = o.face_urgency;
    int memory = 0;
    for (const auto& ev : o.escalations) {
      if (ev.from != level || !more_urgent(ev.to, ev.from)) return o.patient_id + " non-monotone escalation";
      if (ev.cause == EscalationCause::Memory) ++memory;
      level = ev.to;
    }
    if (memory > 1) return o.patient_id + " escalated from memory twice";
    if (memory && !o.has_history) return o.patient_id + " memory escalation without history";
    if (level != o.final_urgency) return o.patient_id + " final urgency mismatch";
  }
  return {};
}

}  // namespace

int main() {
  const Dataset dataset = generate_dataset(42);
  const auto roster = default_roster();

  const auto fcfs_runs = run_experiment(config_for(Strategy::FCFS), kRuns, kBaseSeed, dataset, roster);
  const auto rb_runs = run_experiment(config_for(Strategy::RuleBased), kRuns, kBaseSeed, dataset, roster);
  const auto ag_runs = run_experiment(config_for(Strategy::Agentic), kRuns, kBaseSeed, dataset, roster);
  const auto ablations = run_ablations(config_for(Strategy::Agentic), kRuns, kBaseSeed, dataset, roster);

  const StrategySummary fcfs = summarize(fcfs_runs, "fcfs");
  const StrategySummary rb = summarize(rb_runs, "rule-based");
  const StrategySummary ag = summarize(ag_runs, "agentic");

  {
    const double w = fcfs.avg_wait.mean, c10 = fcfs.pct_critical_within10.mean;
    report(1, within(w, 33.1 - 6, 33.1 + 6) && within(c10, 30.8 - 8, 30.8 + 8),
           fmt::format("FCFS avg wait {:.1f} in [27.1, 39.1]; critical <10 min {:.1f}% in [22.8, 38.8]", w, c10));
  }
  {
    const double cw = rb.wait_by_urgency[0].mean, c10 = rb.pct_critical_within10.mean,
                 low = rb.wait_by_urgency[3].mean;
    report(2, cw < 3.0 && c10 >= 99.0 && within(low, 66.0, 106.0),
           fmt::format("rule-based critical wait {:.2f} < 3; <10 min {:.1f}% >= 99; Low wait {:.1f} in [66, 106]", cw,
                       c10, low));
  }
  {
    const double c10 = ag.pct_critical_within10.mean, cw = ag.wait_by_urgency[0].mean,
                 drifts = ag.drift_events.mean, crit = ag.critical_count.mean;
    report(3, c10 >= 88.0 && cw < 12.0 && within(drifts, 190, 282) && within(crit, 21, 29),
           fmt::format("agentic <10 min {:.1f}% >= 88; critical wait {:.2f} < 12; drifts {:.1f} in [190, 282]; "
                       "critical/session {:.1f} in [21, 29]",
                       c10, cw, drifts, crit));
  }
  {
    const std::array<double, 4> target = {25, 178, 115, 50};
    bool ok = true;
    for (const auto& m : ag_runs) {
      std::array<std::size_t, 4> start{};
      for (const auto& o : m.patients) ++start[index_of(o.face_urgency)];
      ok = ok && start == std::array<std::size_t, 4>{13, 36, 158, 161};
    }
    for (std::size_t u = 0; u < 4; ++u)
      ok = ok && std::fabs(ag.final_composition[u] - target[u]) <= 0.15 * target[u];
    report(4, ok,
           fmt::format("final composition ({:.1f}, {:.1f}, {:.1f}, {:.1f}) vs (25, 178, 115, 50) +-15%",
                       ag.final_composition[0], ag.final_composition[1], ag.final_composition[2],
                       ag.final_composition[3]));
  }
  {
    const auto full = summarize(ablations.runs[0], "full");
    const auto no_mem = summarize(ablations.runs[1], "no-memory");
    bool zero_ok = true;
    for (std::size_t v : {2u, 3u})
      for (const auto& m : ablations.runs[v]) zero_ok = zero_ok && m.drift_event_count == 0 && m.critical_count_effective == 13;
    const double delta = full.critical_count.mean - no_mem.critical_count.mean;
    report(5, within(no_mem.drift_events.mean, 55, 85) && zero_ok && within(delta, 8, 14),
           fmt::format("no-memory drifts {:.1f} in [55, 85]; no-drift/neither 0 drifts and 13 critical: {}; "
                       "full - no-memory critical {:.1f} in [8, 14]",
                       no_mem.drift_events.mean, zero_ok ? "yes" : "no", delta));
  }
  {
    const double f = fcfs.throughput.mean, r = rb.throughput.mean, a = ag.throughput.mean;
    report(6, within(f, 37, 43) && within(r, 37, 43) && within(a, 37, 43) && std::fabs(f - r) < 1.0,
           fmt::format("throughput FCFS {:.1f}, rule-based {:.1f}, agentic {:.1f} in [37, 43]; |FCFS - RB| {:.2f} < 1",
                       f, r, a, std::fabs(f - r)));
  }
  {
    const auto w1 = wilson_ci(118, 120), w2 = wilson_ci(173, 368);
    auto close = [](double x, double pct) { return std::fabs(100.0 * x - pct) <= 0.1 + 1e-9; };
    const bool wilson = close(w1.lo, 94.1) && close(w1.hi, 99.5) && close(w2.lo, 42.0) && close(w2.hi, 52.1);
    const auto t = welch_t(finite(column(fcfs_runs, field_critical_wait)), finite(column(ag_runs, field_critical_wait)),
                           "critical_wait");
    report(7, wilson && t.p_value < 1e-6 && t.cohens_d > 3.0,
           fmt::format("Wilson [{:.1f}, {:.1f}] and [{:.1f}, {:.1f}]; FCFS vs agentic critical wait t={:.1f} "
                       "df={:.1f} p={:.2e} d={:.2f}",
                       100 * w1.lo, 100 * w1.hi, 100 * w2.lo, 100 * w2.hi, t.t_stat, t.df, t.p_value, t.cohens_d));
  }
  {
    StrategyConfig c = config_for(Strategy::Agentic);
    c.seed = 17;
    std::string first_json, first_trace;
    bool same = true;
    for (int i = 0; i < 10; ++i) {
      std::string trace;
      SessionOptions o;
      o.trace = &trace;
      const std::string json = metrics_to_json(run_session(c, dataset, roster, c.intensity_profile(), o), true);
      if (i == 0) {
        first_json = json;
        first_trace = trace;
      } else {
        same = same && json == first_json && trace == first_trace;
      }
    }
    report(8, same, "10 repeated sessions with seed 17 give byte-identical metrics JSON and trace");
  }
  {
    std::string broken, broken_esc;
    for (std::uint64_t seed = 1; seed <= 100 && broken.empty() && broken_esc.empty(); ++seed) {
      for (Strategy s : {Strategy::FCFS, Strategy::RuleBased, Strategy::Agentic}) {
        StrategyConfig c = config_for(s);
        c.seed = seed * 7919;
        const auto m = run_session(c, dataset, roster, c.intensity_profile());
        if (auto e = check_run(m); !e.empty() && broken.empty())
          broken = fmt::format("seed {} {}: {}", c.seed, to_string(s), e);
        if (auto e = check_escalations(m); !e.empty() && broken_esc.empty())
          broken_esc = fmt::format("seed {} {}: {}", c.seed, to_string(s), e);
      }
    }
    report(9, broken.empty(), broken.empty() ? "conservation and causality hold on 100 seeds x 3 strategies" : broken);
    report(10, broken_esc.empty(),
           broken_esc.empty() ? "monotone escalation, at most one memory escalation, on 100 seeds x 3 strategies"
                              : broken_esc);
  }
  {
    auto r = default_roster();
    Patient child;
    child.required_specialty = Specialty::Pediatrics;
    const double best = score(r[2], child, r).total;
    r[5].queue_length = 3;
    r[5].state = PhysicianState::Busy;
    const double worst = score(r[5], child, r).total;
    QueueEntry crit;
    crit.effective_urgency = Urgency::Critical;
    crit.effective_acuity = 10;
    QueueEntry low;
    low.effective_urgency = Urgency::Low;
    low.effective_acuity = 1;
    const double p1 = priority(crit, 0.0, 0.0), p2 = priority(low, 120.0, 1.0);
    const bool ok = std::fabs(best - 1.00) <= 1e-12 && std::fabs(worst) <= 1e-12 && std::fabs(p1 - 0.80) <= 1e-12 &&
                    std::fabs(p2 - 0.1925) <= 1e-12;
    report(11, ok, fmt::format("scores {:.12f}, {:.12f}, {:.12f}, {:.12f}", best, worst, p1, p2));
  }
  {
    const IntensityProfile constant({{0.0, 1.0}, {12000.0, 1.0}}, 1.0);
    Rng rng = make_stream(2024, Stream::Arrivals);
    const auto times = thin_once(constant, rng);
    std::vector<double> gaps;
    double prev = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(times.size(), 10000); ++i) {
      gaps.push_back(times[i] - prev);
      prev = times[i];
    }
    std::sort(gaps.begin(), gaps.end());
    const double n = static_cast<double>(gaps.size());
    double d = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      const double f = 1.0 - std::exp(-gaps[i]);
      d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    const double critical = 1.628 / std::sqrt(n);

    const IntensityProfile gap({{0.0, 1.5}, {100.0, 1.5}, {100.001, 0.0}, {199.999, 0.0}, {200.0, 1.5}, {300.0, 1.5}},
                               1.5);
    std::size_t in_gap = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng g = make_stream(seed, Stream::Arrivals);
      for (double t : thin_once(gap, g)) in_gap += t >= 100.001 && t <= 199.999;
    }
    report(12, gaps.size() == 10000 && d < critical && in_gap == 0,
           fmt::format("KS D={:.4f} < {:.4f} (n={}); arrivals in zero-intensity interval: {}", d, critical,
                       gaps.size(), in_gap));
  }
  {
    int crit = 0, p95 = 0, low = 0;
    for (std::size_t i = 0; i < kRuns; ++i) {
      const double af = field_critical_wait(ag_runs[i]), ff = field_critical_wait(fcfs_runs[i]);
      crit += std::isfinite(af) && std::isfinite(ff) && af < ff;
      p95 += ag_runs[i].p95_wait > rb_runs[i].p95_wait && rb_runs[i].p95_wait > fcfs_runs[i].p95_wait;
      low += field_low_wait(rb_runs[i]) > field_low_wait(fcfs_runs[i]);
    }
    report(13, crit >= 28 && p95 >= 28 && low >= 28,
           fmt::format("paired seeds: critical wait agentic < FCFS {}/30; P95 agentic > RB > FCFS {}/30; "
                       "Low wait RB > FCFS {}/30",
                       crit, p95, low));
  }

  fmt::print("{} of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
