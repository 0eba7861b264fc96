#include "opdsim/report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace opdsim {
namespace {

using nlohmann::json;

constexpr std::array<const char*, 4> kClassNames = {"critical", "high", "medium", "low"};
constexpr std::array<const char*, 4> kClassLabels = {"Critical", "High", "Medium", "Low"};

json opt(const std::optional<Minutes>& v) { return v ? json(*v) : json(nullptr); }

json per_class(const std::array<double, 4>& v) {
  json j = json::object();
  for (std::size_t i = 0; i < 4; ++i) j[kClassNames[i]] = std::isnan(v[i]) ? json(nullptr) : json(v[i]);
  return j;
}

json per_class(const std::array<std::size_t, 4>& v) {
  json j = json::object();
  for (std::size_t i = 0; i < 4; ++i) j[kClassNames[i]] = v[i];
  return j;
}

void read_class(const json& j, std::array<double, 4>& out) {
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& v = j.at(kClassNames[i]);
    out[i] = v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  }
}

void read_class(const json& j, std::array<std::size_t, 4>& out) {
  for (std::size_t i = 0; i < 4; ++i) out[i] = j.at(kClassNames[i]).get<std::size_t>();
}

std::string pm(const SampleSummary& s, int digits = 1) {
  return fmt::format("{:.{}f} ± {:.{}f}", s.mean, digits, s.std, digits);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

SampleSummary summary_of(const std::vector<double>& xs) {
  if (xs.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0, 0};
  return summarize_sample(xs);
}

}  // namespace

std::string metrics_to_json(const SessionMetrics& m, bool include_patients) {
  json j = {
      {"strategy", to_string(m.strategy)},
      {"memory_enabled", m.memory_enabled},
      {"drift_enabled", m.drift_enabled},
      {"seed", m.seed},
      {"session_length", m.session_length},
      {"arrivals", m.arrivals},
      {"served_count", m.served_count},
      {"unserved_count", m.unserved_count},
      {"throughput_per_hour", m.throughput_per_hour},
      {"avg_wait", m.avg_wait},
      {"median_wait", m.median_wait},
      {"p95_wait", m.p95_wait},
      {"mean_wait_by_urgency", per_class(m.mean_wait_by_urgency)},
      {"served_by_urgency", per_class(m.served_by_urgency)},
      {"mean_wait_by_face", per_class(m.mean_wait_by_face)},
      {"served_by_face", per_class(m.served_by_face)},
      {"specialty_matches", m.specialty_matches},
      {"specialty_match_rate", m.specialty_match_rate},
      {"drift_event_count", m.drift_event_count},
      {"memory_escalation_count", m.memory_escalation_count},
      {"final_composition", per_class(m.final_composition)},
      {"critical_count_effective", m.critical_count_effective},
      {"critical_within10", m.critical_within10},
      {"critical_denominator10", m.critical_denominator10},
      {"critical_within15", m.critical_within15},
      {"critical_denominator15", m.critical_denominator15},
      {"pct_critical_within10", m.pct_critical_within10},
      {"pct_critical_within15", m.pct_critical_within15},
      {"physician_assignments", m.physician_assignments},
      {"physician_served", m.physician_served},
      {"backend_calls", m.backend_calls},
      {"arrival_attempts", m.arrival_attempts},
  };
  if (include_patients) {
    json arr = json::array();
    for (const auto& p : m.patients) {
      json esc = json::array();
      for (const auto& e : p.escalations)
        esc.push_back({{"time", e.time}, {"from", to_string(e.from)}, {"to", to_string(e.to)},
                       {"cause", to_string(e.cause)}});
      arr.push_back({{"id", p.patient_id},
                     {"face_urgency", to_string(p.face_urgency)},
                     {"final_urgency", to_string(p.final_urgency)},
                     {"has_history", p.has_history},
                     {"arrival", p.arrival},
                     {"registration_done", opt(p.registration_done)},
                     {"consult_start", opt(p.consult_start)},
                     {"consult_end", opt(p.consult_end)},
                     {"critical_since", opt(p.critical_since)},
                     {"physician", p.physician ? json(*p.physician) : json(nullptr)},
                     {"specialty_match", p.specialty_match},
                     {"escalations", esc},
                     {"alerts", p.alerts}});
    }
    j["patients"] = std::move(arr);
  }
  return j.dump();
}

SessionMetrics metrics_from_json(const std::string& line) {
  SessionMetrics m;
  try {
    const json j = json::parse(line);
    m.strategy = parse_strategy(j.at("strategy").get<std::string>());
    j.at("memory_enabled").get_to(m.memory_enabled);
    j.at("drift_enabled").get_to(m.drift_enabled);
    j.at("seed").get_to(m.seed);
    j.at("session_length").get_to(m.session_length);
    j.at("arrivals").get_to(m.arrivals);
    j.at("served_count").get_to(m.served_count);
    j.at("unserved_count").get_to(m.unserved_count);
    j.at("throughput_per_hour").get_to(m.throughput_per_hour);
    j.at("avg_wait").get_to(m.avg_wait);
    j.at("median_wait").get_to(m.median_wait);
    j.at("p95_wait").get_to(m.p95_wait);
    read_class(j.at("mean_wait_by_urgency"), m.mean_wait_by_urgency);
    read_class(j.at("served_by_urgency"), m.served_by_urgency);
    read_class(j.at("mean_wait_by_face"), m.mean_wait_by_face);
    read_class(j.at("served_by_face"), m.served_by_face);
    j.at("specialty_matches").get_to(m.specialty_matches);
    j.at("specialty_match_rate").get_to(m.specialty_match_rate);
    j.at("drift_event_count").get_to(m.drift_event_count);
    j.at("memory_escalation_count").get_to(m.memory_escalation_count);
    read_class(j.at("final_composition"), m.final_composition);
    j.at("critical_count_effective").get_to(m.critical_count_effective);
    j.at("critical_within10").get_to(m.critical_within10);
    j.at("critical_denominator10").get_to(m.critical_denominator10);
    j.at("critical_within15").get_to(m.critical_within15);
    j.at("critical_denominator15").get_to(m.critical_denominator15);
    j.at("pct_critical_within10").get_to(m.pct_critical_within10);
    j.at("pct_critical_within15").get_to(m.pct_critical_within15);
    j.at("physician_assignments").get_to(m.physician_assignments);
    j.at("physician_served").get_to(m.physician_served);
    j.at("backend_calls").get_to(m.backend_calls);
    j.at("arrival_attempts").get_to(m.arrival_attempts);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed metrics record: ") + e.what());
  }
  return m;
}

std::string metrics_to_jsonl(std::span<const SessionMetrics> runs) {
  std::string out;
  for (const auto& m : runs) out += metrics_to_json(m) + "\n";
  return out;
}

std::vector<SessionMetrics> metrics_from_jsonl(const std::string& text) {
  std::vector<SessionMetrics> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(metrics_from_json(line));
  return out;
}

std::string escalations_to_csv(const SessionMetrics& m) {
  std::vector<EscalationEvent> all;
  for (const auto& p : m.patients) all.insert(all.end(), p.escalations.begin(), p.escalations.end());
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
  std::string out = "time,patient_id,from,to,cause\n";
  for (const auto& e : all)
    out += fmt::format("{:.6f},{},{},{},{}\n", e.time, e.patient_id, to_string(e.from), to_string(e.to),
                       to_string(e.cause));
  return out;
}

StrategySummary summarize(std::span<const SessionMetrics> runs, std::string label) {
  if (runs.empty()) throw std::invalid_argument("summarize: no runs");
  StrategySummary s;
  s.label = std::move(label);
  s.runs = runs.size();
  std::vector<double> avg, med, p95, thr, match, drift, mem, crit, c10, c15;
  std::array<std::vector<double>, 4> by_class;
  for (const auto& m : runs) {
    avg.push_back(m.avg_wait);
    med.push_back(m.median_wait);
    p95.push_back(m.p95_wait);
    thr.push_back(m.throughput_per_hour);
    match.push_back(100.0 * m.specialty_match_rate);
    drift.push_back(static_cast<double>(m.drift_event_count));
    mem.push_back(static_cast<double>(m.memory_escalation_count));
    crit.push_back(static_cast<double>(m.critical_count_effective));
    c10.push_back(m.pct_critical_within10);
    c15.push_back(m.pct_critical_within15);
    for (std::size_t u = 0; u < 4; ++u) {
      if (!std::isnan(m.mean_wait_by_urgency[u])) by_class[u].push_back(m.mean_wait_by_urgency[u]);
      s.final_composition[u] += static_cast<double>(m.final_composition[u]);
    }
    s.critical_within10 += m.critical_within10;
    s.critical_denominator10 += m.critical_denominator10;
    s.served += m.served_count;
    s.specialty_matches += m.specialty_matches;
  }
  s.avg_wait = summarize_sample(avg);
  s.median_wait = summarize_sample(med);
  s.p95_wait = summarize_sample(p95);
  s.throughput = summarize_sample(thr);
  s.specialty_match_pct = summarize_sample(match);
  s.drift_events = summarize_sample(drift);
  s.memory_escalations = summarize_sample(mem);
  s.critical_count = summarize_sample(crit);
  s.pct_critical_within10 = summarize_sample(c10);
  s.pct_critical_within15 = summarize_sample(c15);
  for (std::size_t u = 0; u < 4; ++u) {
    s.wait_by_urgency[u] = summary_of(by_class[u]);
    s.final_composition[u] /= static_cast<double>(runs.size());
  }
  return s;
}

std::vector<double> column(std::span<const SessionMetrics> runs, double (*field)(const SessionMetrics&)) {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const auto& m : runs) out.push_back(field(m));
  return out;
}

double field_critical_wait(const SessionMetrics& m) { return m.mean_wait_by_urgency[0]; }
double field_avg_wait(const SessionMetrics& m) { return m.avg_wait; }
double field_throughput(const SessionMetrics& m) { return m.throughput_per_hour; }
double field_low_wait(const SessionMetrics& m) { return m.mean_wait_by_urgency[3]; }
double field_p95_wait(const SessionMetrics& m) { return m.p95_wait; }

std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_field(cells[i]);
    out += "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

std::string to_markdown(const Table& t) {
  std::string out = fmt::format("### {}\n\n", t.title);
  auto line = [&](const std::vector<std::string>& cells) {
    out += "|";
    for (const auto& c : cells) out += " " + c + " |";
    out += "\n";
  };
  line(t.header);
  out += "|";
  for (std::size_t i = 0; i < t.header.size(); ++i) out += i ? "---:|" : "---|";
  out += "\n";
  for (const auto& r : t.rows) line(r);
  for (const auto& n : t.notes) out += "\n" + n + "\n";
  return out;
}

Table performance_table(std::span<const StrategySummary> s) {
  Table t;
  t.title = "Performance metrics";
  t.header = {"Metric"};
  for (const auto& x : s) t.header.push_back(x.label);
  auto row = [&](std::string name, auto get, int digits) {
    std::vector<std::string> r{std::move(name)};
    for (const auto& x : s) r.push_back(pm(get(x), digits));
    t.rows.push_back(std::move(r));
  };
  row("Avg wait (min)", [](const StrategySummary& x) { return x.avg_wait; }, 1);
  row("Median wait (min)", [](const StrategySummary& x) { return x.median_wait; }, 1);
  row("P95 wait (min)", [](const StrategySummary& x) { return x.p95_wait; }, 1);
  row("Throughput (pts/hr)", [](const StrategySummary& x) { return x.throughput; }, 1);
  row("Specialty match (%)", [](const StrategySummary& x) { return x.specialty_match_pct; }, 1);
  row("Drift events", [](const StrategySummary& x) { return x.drift_events; }, 1);
  std::vector<std::string> counts{"Runs"};
  for (const auto& x : s) counts.push_back(std::to_string(x.runs));
  t.rows.push_back(std::move(counts));
  t.notes.push_back("Values are mean ± sample SD over runs. P95 uses linear-interpolation quantiles.");
  return t;
}

Table urgency_wait_table(std::span<const StrategySummary> s) {
  Table t;
  t.title = "Mean wait by urgency (min)";
  t.header = {"Urgency"};
  for (const auto& x : s) t.header.push_back(x.label);
  if (s.size() >= 2) t.header.push_back(fmt::format("Δ {} vs {}", s.back().label, s.front().label));
  for (std::size_t u = 0; u < 4; ++u) {
    std::vector<std::string> r{kClassLabels[u]};
    for (const auto& x : s) r.push_back(fmt::format("{:.1f}", x.wait_by_urgency[u].mean));
    if (s.size() >= 2) {
      const double a = s.front().wait_by_urgency[u].mean;
      const double b = s.back().wait_by_urgency[u].mean;
      r.push_back(fmt::format("{:+.1f}", b - a));
    }
    t.rows.push_back(std::move(r));
  }
  t.notes.push_back("Classes are urgency at consult start; Critical waits run from the moment the patient is known to be Critical.");
  return t;
}

Table critical_response_table(std::span<const StrategySummary> s) {
  Table t;
  t.title = "Critical patient response";
  t.header = {"Metric"};
  for (const auto& x : s) t.header.push_back(x.label);
  std::vector<std::string> r10{"Critical < 10 min (%)"}, r15{"Critical < 15 min (%)"}, rc{"Critical / session"},
      rk{"Critical < 10 min (pooled count)"};
  for (const auto& x : s) {
    r10.push_back(pm(x.pct_critical_within10));
    r15.push_back(pm(x.pct_critical_within15));
    rc.push_back(pm(x.critical_count));
    rk.push_back(fmt::format("{}/{}", x.critical_within10, x.critical_denominator10));
  }
  t.rows = {r10, r15, rc, rk};
  return t;
}

Table ablation_table(std::span<const StrategySummary> s) {
  Table t;
  t.title = "Ablation study";
  t.header = {"Variant", "Critical < 10 min (%)", "Critical / session", "Drift events", "Memory escalations",
              "Avg wait (min)"};
  for (const auto& x : s)
    t.rows.push_back({x.label, pm(x.pct_critical_within10), pm(x.critical_count), pm(x.drift_events),
                      pm(x.memory_escalations), pm(x.avg_wait)});
  return t;
}

Table comparison_table(std::span<const ComparisonResult> rows) {
  Table t;
  t.title = "Welch comparisons";
  t.header = {"Metric", "Mean A", "SD A", "n A", "Mean B", "SD B", "n B", "t", "df", "p (two-sided)", "Cohen's d"};
  for (const auto& c : rows)
    t.rows.push_back({c.metric, fmt::format("{:.3f}", c.a.mean), fmt::format("{:.3f}", c.a.std),
                      std::to_string(c.a.n), fmt::format("{:.3f}", c.b.mean), fmt::format("{:.3f}", c.b.std),
                      std::to_string(c.b.n), fmt::format("{:.3f}", c.t_stat), fmt::format("{:.2f}", c.df),
                      fmt::format("{:.3e}", c.p_value), fmt::format("{:.3f}", c.cohens_d)});
  return t;
}

std::string summary_to_json(const StrategySummary& s) {
  auto ss = [](const SampleSummary& x) {
    return json{{"mean", std::isnan(x.mean) ? json(nullptr) : json(x.mean)}, {"std", x.std}, {"n", x.n}};
  };
  json by_class = json::object();
  json comp = json::object();
  for (std::size_t u = 0; u < 4; ++u) {
    by_class[kClassNames[u]] = ss(s.wait_by_urgency[u]);
    comp[kClassNames[u]] = s.final_composition[u];
  }
  json j = {{"label", s.label},
            {"runs", s.runs},
            {"avg_wait", ss(s.avg_wait)},
            {"median_wait", ss(s.median_wait)},
            {"p95_wait", ss(s.p95_wait)},
            {"throughput", ss(s.throughput)},
            {"specialty_match_pct", ss(s.specialty_match_pct)},
            {"drift_events", ss(s.drift_events)},
            {"memory_escalations", ss(s.memory_escalations)},
            {"critical_count", ss(s.critical_count)},
            {"pct_critical_within10", ss(s.pct_critical_within10)},
            {"pct_critical_within15", ss(s.pct_critical_within15)},
            {"wait_by_urgency", by_class},
            {"final_composition", comp},
            {"critical_within10", s.critical_within10},
            {"critical_denominator10", s.critical_denominator10},
            {"served", s.served},
            {"specialty_matches", s.specialty_matches},
            {"quantile_method", "linear interpolation (type 7)"}};
  return j.dump(2) + "\n";
}

}  // namespace opdsim
