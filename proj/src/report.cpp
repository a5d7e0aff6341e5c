#include "judgeattack/report.hpp"

#include <cstdio>
#include <sstream>

#include "judgeattack/errors.hpp"

namespace judgeattack {

using nlohmann::json;

double compute_asr(std::size_t flips, std::size_t attempts) {
  if (attempts == 0) throw UndefinedMetricError("ASR is undefined with zero attempts");
  if (flips > attempts) throw ContractError("flips exceed attempts");
  return 100.0 * static_cast<double>(flips) / static_cast<double>(attempts);
}

const MethodSummary* CampaignReport::find(std::string_view method) const {
  for (const auto& m : methods) {
    if (m.method == method) return &m;
  }
  return nullptr;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "structured") return ReportFormat::Structured;
  if (name == "csv") return ReportFormat::Csv;
  throw ConfigError("unknown report format '" + std::string(name) + "' (expected table, structured or csv)");
}

std::string format_table_row(std::string_view display_name, std::optional<double> asr) {
  std::string out(display_name);
  out += " & ";
  if (!asr) return out + "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *asr);
  return out + buf;
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string emit_table(const CampaignReport& report) {
  std::ostringstream out;
  out << "Method & ASR (%)\n";
  bool comparison_done = false;
  auto comparisons = [&] {
    if (comparison_done) return;
    for (const auto& r : report.comparison_rows) out << format_table_row(r.name, r.asr) << '\n';
    comparison_done = true;
  };
  for (Method m : kAllMethods) {
    if (m == Method::Cua) comparisons();
    if (const MethodSummary* s = report.find(method_key(m))) {
      out << format_table_row(method_display(m), s->asr) << '\n';
    }
  }
  comparisons();
  return out.str();
}

std::string emit_csv(const CampaignReport& report) {
  std::ostringstream out;
  out << "method,record_index,question_id,status,flipped,swapped,clean_p_a,clean_p_b,p_a,p_b,iterations,final_loss,"
         "suffix\n";
  for (const auto& r : report.instances) {
    std::string ids;
    for (std::size_t i = 0; i < r.suffix.size(); ++i) ids += (i ? " " : "") + std::to_string(r.suffix[i]);
    out << r.method << ',' << r.record_index << ',' << csv_field(r.question_id) << ','
        << (r.ok ? "ok" : csv_field("error: " + r.error)) << ',' << (r.flipped ? 1 : 0) << ',' << (r.swapped ? 1 : 0)
        << ',' << num(r.clean_p_a) << ',' << num(r.clean_p_b) << ',' << num(r.p_a) << ',' << num(r.p_b) << ','
        << r.iterations << ',' << (r.trace.empty() ? "" : num(r.trace.back().loss)) << ',' << ids << '\n';
  }
  return out.str();
}

json to_json(const InstanceOutcome& r) {
  json trace = json::array();
  for (const auto& t : r.trace) trace.push_back({t.loss, t.p_a, t.p_b});
  return {{"method", r.method},       {"record_index", r.record_index},
          {"question_id", r.question_id}, {"ok", r.ok},
          {"error", r.error},         {"swapped", r.swapped},
          {"clean_p_a", r.clean_p_a}, {"clean_p_b", r.clean_p_b},
          {"p_a", r.p_a},             {"p_b", r.p_b},
          {"flipped", r.flipped},     {"suffix", r.suffix},
          {"suffix_text", r.suffix_text}, {"iterations", r.iterations},
          {"trace", trace}};
}

InstanceOutcome instance_from_json(const json& j) {
  InstanceOutcome r;
  j.at("method").get_to(r.method);
  j.at("record_index").get_to(r.record_index);
  j.at("question_id").get_to(r.question_id);
  j.at("ok").get_to(r.ok);
  j.at("error").get_to(r.error);
  j.at("swapped").get_to(r.swapped);
  j.at("clean_p_a").get_to(r.clean_p_a);
  j.at("clean_p_b").get_to(r.clean_p_b);
  j.at("p_a").get_to(r.p_a);
  j.at("p_b").get_to(r.p_b);
  j.at("flipped").get_to(r.flipped);
  j.at("suffix").get_to(r.suffix);
  j.at("suffix_text").get_to(r.suffix_text);
  j.at("iterations").get_to(r.iterations);
  for (const auto& t : j.at("trace")) r.trace.push_back({t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>()});
  return r;
}

json structured(const CampaignReport& report) {
  json methods = json::array();
  for (const auto& m : report.methods) {
    methods.push_back({{"method", m.method},
                       {"attempts", m.attempts},
                       {"flips", m.flips},
                       {"failures", m.failures},
                       {"asr", m.asr ? json(*m.asr) : json("n/a")}});
  }
  json rows = json::array();
  for (const auto& r : report.comparison_rows) rows.push_back({{"name", r.name}, {"asr", r.asr}});
  json instances = json::array();
  for (const auto& r : report.instances) instances.push_back(to_json(r));
  return {{"methods", methods},
          {"comparison_rows", rows},
          {"dataset",
           {{"records_loaded", report.dataset.records_loaded},
            {"ties_skipped", report.dataset.ties_skipped},
            {"invalid_skipped", report.dataset.invalid_skipped},
            {"orientation_skipped", report.dataset.orientation_skipped},
            {"instances_used", report.dataset.instances_used}}},
          {"seeds",
           {{"campaign_seed", report.seeds.campaign_seed},
            {"judge_seed", report.seeds.judge_seed},
            {"stream_derivation", report.seeds.stream_derivation}}},
          {"config", report.config},
          {"instances", instances}};
}

}  // namespace

std::string emit_report(const CampaignReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Table: return emit_table(report);
    case ReportFormat::Structured: return structured(report).dump(1) + "\n";
    case ReportFormat::Csv: return emit_csv(report);
  }
  throw ConfigError("unknown report format");
}

std::string emit_trace_csv(const CampaignReport& report) {
  std::ostringstream out;
  out << "method,record_index,question_id,iter,loss,p_a,p_b\n";
  for (const auto& r : report.instances) {
    for (std::size_t it = 0; it < r.trace.size(); ++it) {
      const auto& t = r.trace[it];
      out << r.method << ',' << r.record_index << ',' << csv_field(r.question_id) << ',' << it << ',' << num(t.loss)
          << ',' << num(t.p_a) << ',' << num(t.p_b) << '\n';
    }
  }
  return out.str();
}

CampaignReport parse_structured_report(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ParseError("structured report is not a JSON object");
  try {
    CampaignReport report;
    for (const auto& m : doc.at("methods")) {
      MethodSummary s;
      m.at("method").get_to(s.method);
      m.at("attempts").get_to(s.attempts);
      m.at("flips").get_to(s.flips);
      m.at("failures").get_to(s.failures);
      if (m.at("asr").is_number()) s.asr = m.at("asr").get<double>();
      report.methods.push_back(std::move(s));
    }
    for (const auto& r : doc.at("comparison_rows")) {
      report.comparison_rows.push_back({r.at("name").get<std::string>(), r.at("asr").get<double>()});
    }
    const auto& ds = doc.at("dataset");
    ds.at("records_loaded").get_to(report.dataset.records_loaded);
    ds.at("ties_skipped").get_to(report.dataset.ties_skipped);
    ds.at("invalid_skipped").get_to(report.dataset.invalid_skipped);
    ds.at("orientation_skipped").get_to(report.dataset.orientation_skipped);
    ds.at("instances_used").get_to(report.dataset.instances_used);
    const auto& seeds = doc.at("seeds");
    seeds.at("campaign_seed").get_to(report.seeds.campaign_seed);
    seeds.at("judge_seed").get_to(report.seeds.judge_seed);
    seeds.at("stream_derivation").get_to(report.seeds.stream_derivation);
    report.config = doc.at("config");
    for (const auto& r : doc.at("instances")) report.instances.push_back(instance_from_json(r));
    return report;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("structured report: ") + e.what());
  }
}

}  // namespace judgeattack
