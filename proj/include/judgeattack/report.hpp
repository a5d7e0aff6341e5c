#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "judgeattack/config.hpp"
#include "judgeattack/gcg.hpp"

namespace judgeattack {

// 100 * flips / attempts. Throws UndefinedMetricError when attempts == 0 and
// ContractError when flips > attempts.
double compute_asr(std::size_t flips, std::size_t attempts);

struct MethodSummary {
  std::string method;  // config key, e.g. "cua"
  std::size_t attempts = 0;
  std::size_t flips = 0;
  std::size_t failures = 0;  // excluded from attempts
  std::optional<double> asr;

  bool operator==(const MethodSummary&) const = default;
};

// One (method, instance) cell of a campaign.
struct InstanceOutcome {
  std::string method;
  std::size_t record_index = 0;
  std::string question_id;
  bool ok = true;
  std::string error;  // set when !ok
  bool swapped = false;  // answers exchanged during orientation
  double clean_p_a = 0.0;
  double clean_p_b = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
  bool flipped = false;
  std::vector<TokenId> suffix;
  std::string suffix_text;
  std::size_t iterations = 0;
  std::vector<TracePoint> trace;  // optimized methods only

  bool operator==(const InstanceOutcome&) const = default;
};

struct DatasetStats {
  std::size_t records_loaded = 0;
  std::size_t ties_skipped = 0;
  std::size_t invalid_skipped = 0;
  std::size_t orientation_skipped = 0;  // B-preferred in both answer orders
  std::size_t instances_used = 0;

  bool operator==(const DatasetStats&) const = default;
};

struct SeedProvenance {
  std::uint64_t campaign_seed = 0;
  std::uint64_t judge_seed = 0;
  std::string stream_derivation;

  bool operator==(const SeedProvenance&) const = default;
};

struct CampaignReport {
  std::vector<MethodSummary> methods;
  std::vector<InstanceOutcome> instances;
  std::vector<ComparisonRow> comparison_rows;
  DatasetStats dataset;
  SeedProvenance seeds;
  nlohmann::json config;

  const MethodSummary* find(std::string_view method) const;
  bool operator==(const CampaignReport&) const = default;
};

enum class ReportFormat { Table, Structured, Csv };

// Throws ConfigError for anything but "table", "structured" or "csv".
ReportFormat parse_report_format(std::string_view name);

// "CUA & 31.2"; an undefined ASR renders as "n/a".
std::string format_table_row(std::string_view display_name, std::optional<double> asr);

// table: "Method & ASR (%)" header then one row per method in the canonical
// order (controls first, comparison rows just before CUA, CUA last).
// structured: JSON document with every report field.
// csv: one row per (method, instance).
std::string emit_report(const CampaignReport& report, ReportFormat format);

// One row per trace point: method, record_index, question_id, iter, loss, p_a, p_b.
std::string emit_trace_csv(const CampaignReport& report);

CampaignReport parse_structured_report(std::string_view text);

}  // namespace judgeattack
