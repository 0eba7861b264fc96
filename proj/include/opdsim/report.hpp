#pragma once

// Multi-run summaries and their CSV / JSON / markdown renderings.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "opdsim/engine.hpp"
#include "opdsim/stats.hpp"

namespace opdsim {

/// Compact single-line JSON (the JSONL record format). Per-patient outcomes
/// are included only on request.
std::string metrics_to_json(const SessionMetrics& m, bool include_patients = false);
/// Inverse of metrics_to_json for the aggregate fields (patients are not
/// restored). Throws ValidationError on malformed input.
SessionMetrics metrics_from_json(const std::string& line);

std::string metrics_to_jsonl(std::span<const SessionMetrics> runs);
std::vector<SessionMetrics> metrics_from_jsonl(const std::string& text);

std::string escalations_to_csv(const SessionMetrics& m);

struct StrategySummary {
  std::string label;
  std::size_t runs = 0;
  SampleSummary avg_wait;
  SampleSummary median_wait;
  SampleSummary p95_wait;
  SampleSummary throughput;
  SampleSummary specialty_match_pct;
  SampleSummary drift_events;
  SampleSummary memory_escalations;
  SampleSummary critical_count;
  SampleSummary pct_critical_within10;
  SampleSummary pct_critical_within15;
  // Run means of per-class waits; runs without a served patient in the class
  // are skipped.
  std::array<SampleSummary, 4> wait_by_urgency;
  std::array<double, 4> final_composition{};
  // Counts pooled over all runs.
  std::size_t critical_within10 = 0;
  std::size_t critical_denominator10 = 0;
  std::size_t served = 0;
  std::size_t specialty_matches = 0;
};

/// Permutation-invariant summary. Throws std::invalid_argument when empty.
StrategySummary summarize(std::span<const SessionMetrics> runs, std::string label);

// Per-run column of a metric, for paired or Welch comparisons.
std::vector<double> column(std::span<const SessionMetrics> runs, double (*field)(const SessionMetrics&));
double field_critical_wait(const SessionMetrics& m);
double field_avg_wait(const SessionMetrics& m);
double field_throughput(const SessionMetrics& m);
double field_low_wait(const SessionMetrics& m);
double field_p95_wait(const SessionMetrics& m);

struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;
};

std::string to_csv(const Table& t);
std::string to_markdown(const Table& t);

// Wait and throughput overview, one column per strategy.
Table performance_table(std::span<const StrategySummary> s);
// Mean wait by urgency class, with the change of the last column relative to
// the first.
Table urgency_wait_table(std::span<const StrategySummary> s);
Table critical_response_table(std::span<const StrategySummary> s);
Table ablation_table(std::span<const StrategySummary> s);
Table comparison_table(std::span<const ComparisonResult> rows);

std::string summary_to_json(const StrategySummary& s);

}  // namespace opdsim
