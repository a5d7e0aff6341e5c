#include "doctest.h"
#include "judgeattack/errors.hpp"
#include "judgeattack/report.hpp"

using namespace judgeattack;

namespace {

CampaignReport mock_report() {
  CampaignReport r;
  const std::pair<const char*, double> rows[] = {
      {"cua", 31.2}, {"jma", 15.2}, {"random_suffix", 1.2}, {"hard_prompt", 4.4}, {"token_shuffle", 2.0}};
  for (const auto& [m, asr] : rows) r.methods.push_back({m, 250, 0, 0, asr});
  r.comparison_rows.push_back({"JudgeDeceiver", 20.4});
  InstanceOutcome o;
  o.method = "cua";
  o.record_index = 3;
  o.question_id = "q,1";
  o.p_a = 0.1;
  o.p_b = 0.9;
  o.flipped = true;
  o.suffix = {4, 5};
  o.suffix_text = "a \"b\"";
  o.iterations = 2;
  o.trace = {{0.2, 0.6, 0.4}, {-0.8, 0.1, 0.9}};
  r.instances.push_back(o);
  r.dataset = {10, 2, 1, 1, 6};
  r.seeds = {1, 7, "splitmix64"};
  r.config = {{"dataset_path", "d.jsonl"}};
  return r;
}

}  // namespace

TEST_CASE("compute_asr") {
  CHECK(compute_asr(5, 10) == 50.0);
  CHECK(compute_asr(0, 10) == 0.0);
  CHECK(compute_asr(10, 10) == 100.0);
  CHECK(compute_asr(1, 3) == doctest::Approx(100.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(compute_asr(0, 0), UndefinedMetricError);
  CHECK_THROWS_AS(compute_asr(4, 3), ContractError);
}

TEST_CASE("table rows") {
  CHECK(format_table_row("CUA", 31.2) == "CUA & 31.2");
  CHECK(format_table_row("JMA", 15.25) == "JMA & 15.2");
  CHECK(format_table_row("CUA", std::nullopt) == "CUA & n/a");
}

TEST_CASE("table keeps the canonical method order") {
  CHECK(emit_report(mock_report(), ReportFormat::Table) ==
        "Method & ASR (%)\n"
        "Random-Suffix & 1.2\n"
        "Token-Shuffle & 2.0\n"
        "Hard Prompt & 4.4\n"
        "JMA & 15.2\n"
        "JudgeDeceiver & 20.4\n"
        "CUA & 31.2\n");
  CHECK(emit_report(CampaignReport{}, ReportFormat::Table) == "Method & ASR (%)\n");
}

TEST_CASE("structured report round trip") {
  const auto r = mock_report();
  const auto text = emit_report(r, ReportFormat::Structured);
  CHECK(parse_structured_report(text) == r);
  CHECK(emit_report(parse_structured_report(text), ReportFormat::Structured) == text);
}

TEST_CASE("csv has one row per instance") {
  const auto csv = emit_report(mock_report(), ReportFormat::Csv);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.find("\"q,1\"") != std::string::npos);
  const auto traces = emit_trace_csv(mock_report());
  CHECK(std::count(traces.begin(), traces.end(), '\n') == 3);
}

TEST_CASE("report format names") {
  CHECK(parse_report_format("csv") == ReportFormat::Csv);
  CHECK_THROWS_AS(parse_report_format("xml"), ConfigError);
}
