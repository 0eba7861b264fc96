#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "opdsim/report.hpp"

using namespace opdsim;

namespace {

const std::vector<SessionMetrics>& sample_runs() {
  static const std::vector<SessionMetrics> runs = [] {
    StrategyConfig c;
    return run_experiment(c, 5, 1, generate_dataset(42), default_roster());
  }();
  return runs;
}

}  // namespace

TEST_CASE("metrics JSON round trip") {
  for (const auto& m : sample_runs()) {
    const std::string text = metrics_to_json(m);
    CHECK(text.find('\n') == std::string::npos);
    const SessionMetrics back = metrics_from_json(text);
    CHECK(metrics_to_json(back) == text);
    CHECK(back.avg_wait == m.avg_wait);
    CHECK(back.final_composition == m.final_composition);
    CHECK(back.physician_served == m.physician_served);
  }
  const std::string jsonl = metrics_to_jsonl(sample_runs());
  const auto back = metrics_from_jsonl(jsonl);
  REQUIRE(back.size() == sample_runs().size());
  CHECK(metrics_to_jsonl(back) == jsonl);
}

TEST_CASE("empty classes serialise as null and read back as NaN") {
  SessionMetrics m = sample_runs().front();
  m.mean_wait_by_urgency[0] = std::nan("");
  const auto j = nlohmann::json::parse(metrics_to_json(m));
  CHECK(j["mean_wait_by_urgency"]["critical"].is_null());
  CHECK(std::isnan(metrics_from_json(j.dump()).mean_wait_by_urgency[0]));
}

TEST_CASE("malformed records are rejected") {
  CHECK_THROWS_AS(metrics_from_json("{}"), ValidationError);
  CHECK_THROWS_AS(metrics_from_json("not json"), ValidationError);
}

TEST_CASE("patients are only included on request") {
  const auto& m = sample_runs().front();
  CHECK_FALSE(nlohmann::json::parse(metrics_to_json(m)).contains("patients"));
  const auto j = nlohmann::json::parse(metrics_to_json(m, true));
  CHECK(j["patients"].size() == 368);
}

TEST_CASE("summary does not depend on run order") {
  auto runs = sample_runs();
  const auto s1 = summarize(runs, "agentic");
  std::reverse(runs.begin(), runs.end());
  std::rotate(runs.begin(), runs.begin() + 2, runs.end());
  const auto s2 = summarize(runs, "agentic");
  CHECK(s1.avg_wait.mean == doctest::Approx(s2.avg_wait.mean).epsilon(1e-12));
  CHECK(s1.avg_wait.std == doctest::Approx(s2.avg_wait.std).epsilon(1e-12));
  CHECK(s1.critical_count.mean == doctest::Approx(s2.critical_count.mean).epsilon(1e-12));
  for (std::size_t u = 0; u < 4; ++u)
    CHECK(s1.final_composition[u] == doctest::Approx(s2.final_composition[u]).epsilon(1e-12));
  CHECK(s1.critical_within10 == s2.critical_within10);
  CHECK(summary_to_json(s1) == summary_to_json(s2));
}

TEST_CASE("summary of a single run has zero spread") {
  const auto s = summarize(std::span(sample_runs()).first(1), "one");
  CHECK(s.runs == 1);
  CHECK(s.avg_wait.std == 0.0);
  CHECK(s.avg_wait.mean == sample_runs().front().avg_wait);
  CHECK_THROWS_AS(summarize(std::span<const SessionMetrics>{}, "none"), std::invalid_argument);
}

TEST_CASE("summary means match hand-computed means") {
  const auto& runs = sample_runs();
  const auto s = summarize(runs, "x");
  double total = 0.0;
  for (const auto& m : runs) total += m.throughput_per_hour;
  CHECK(s.throughput.mean == doctest::Approx(total / runs.size()));
  CHECK(column(runs, field_avg_wait).size() == runs.size());
  CHECK(column(runs, field_avg_wait)[2] == runs[2].avg_wait);
}

TEST_CASE("tables render to CSV and markdown") {
  const auto s = summarize(sample_runs(), "agentic");
  const std::vector<StrategySummary> v = {s, s};
  const Table t = performance_table(v);
  const std::string csv = to_csv(t);
  const std::string md = to_markdown(t);
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= static_cast<long>(t.rows.size() + 1));
  CHECK(md.find("|---|") != std::string::npos);
  for (const auto& row : t.rows) CHECK(row.size() == t.header.size());
  const Table u = urgency_wait_table(v);
  for (const auto& row : u.rows) CHECK(row.size() == u.header.size());
}

TEST_CASE("escalation CSV lists every event in time order") {
  const auto& m = sample_runs().front();
  const std::string csv = escalations_to_csv(m);
  CHECK(csv.starts_with("time,patient_id,from,to,cause\n"));
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == m.drift_event_count + 1);
}
