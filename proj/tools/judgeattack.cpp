// Command-line front end: campaign, attack, gradcheck, report.
//
// Exit status: 0 success, 1 runtime or acceptance failure, 2 usage or
// configuration error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "judgeattack/campaign.hpp"
#include "judgeattack/errors.hpp"
#include "judgeattack/gradcheck.hpp"
#include "judgeattack/objectives.hpp"

namespace ja = judgeattack;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  int verbosity = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, std::string("campaign config file (default: $") +
                                                       ja::kConfigEnvVar + ")");
  cmd->add_option("-s,--set", args.overrides, "override a config key, e.g. gcg.max_iters=1")->take_all();
  cmd->add_flag("-v,--verbose", args.verbosity, "log progress to stderr");
}

ja::CampaignConfig resolve_config(const CommonArgs& args) {
  std::string path = args.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(ja::kConfigEnvVar)) path = env;
  }
  if (path.empty()) throw ja::ConfigError(std::string("no config file given (use --config or $") + ja::kConfigEnvVar + ")");
  return ja::load_config(path, args.overrides);
}

bool is_config_error(const std::exception& e) {
  return dynamic_cast<const ja::ConfigError*>(&e) || dynamic_cast<const ja::ParseError*>(&e) ||
         dynamic_cast<const ja::SchemaError*>(&e);
}

std::string fmt_prob(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int cmd_campaign(const CommonArgs& args) {
  ja::CampaignConfig config;
  ja::CampaignInputs inputs;
  try {
    config = resolve_config(args);
    inputs = ja::prepare_campaign(config);
  } catch (const std::exception& e) {
    std::cerr << "judgeattack: configuration error: " << e.what() << '\n';
    return is_config_error(e) ? kUsage : kFailure;
  }
  if (args.verbosity) {
    std::cerr << "loaded " << inputs.records.size() << " records (" << inputs.stats.ties_skipped << " ties, "
              << inputs.stats.invalid_skipped << " invalid skipped), vocabulary " << inputs.vocab->size()
              << " tokens\n";
  }
  ja::ProgressFn progress;
  if (args.verbosity) {
    progress = [](std::size_t done, std::size_t total) {
      if (done % 10 == 0 || done == total) std::cerr << "instances " << done << "/" << total << '\n';
    };
  }
  ja::CampaignReport report = ja::run_campaign(config, inputs, progress);
  ja::write_report_files(report, config.output_path);
  ja::save_vocab(*inputs.vocab, std::filesystem::path(config.output_path) / "vocab.txt");
  if (auto* toy = dynamic_cast<const ja::ToyJudge*>(inputs.judge.get())) {
    ja::save_params(toy->params(), std::filesystem::path(config.output_path) / "judge_params.bin");
  }
  std::cout << ja::emit_report(report, ja::ReportFormat::Table);
  for (const auto& m : report.methods) {
    if (m.failures) std::cerr << m.method << ": " << m.failures << " instance(s) excluded after errors\n";
  }
  return kOk;
}

int cmd_attack(const CommonArgs& args, std::size_t instance, const std::string& objective) {
  ja::CampaignConfig config;
  ja::CampaignInputs inputs;
  ja::ObjectiveSpec spec;
  try {
    config = resolve_config(args);
    inputs = ja::prepare_campaign(config);
    if (instance >= inputs.records.size()) {
      throw ja::ConfigError("instance " + std::to_string(instance) + " out of range (" +
                            std::to_string(inputs.records.size()) + " loaded records)");
    }
    if (objective == "cua") {
      spec = ja::ObjectiveSpec::cua();
    } else if (objective == "jma") {
      spec = ja::ObjectiveSpec::jma(inputs.lexicons, config.jma_weights);
    } else {
      throw ja::ConfigError("unknown objective '" + objective + "' (expected cua or jma)");
    }
  } catch (const std::exception& e) {
    std::cerr << "judgeattack: configuration error: " << e.what() << '\n';
    return is_config_error(e) ? kUsage : kFailure;
  }

  const auto& vocab = *inputs.vocab;
  const auto& record = inputs.records[instance];
  const auto oriented = ja::orient_instance(ja::encode_record(record, vocab), *inputs.judge);
  if (!oriented) {
    std::cout << "instance " << instance << " (question_id " << record.question_id
              << ") has no clean-A arrangement: the judge prefers slot B in both orders\n";
    return kFailure;
  }
  const auto& inst = *oriented;
  std::cout << "instance " << instance << " (question_id " << record.question_id << ")"
            << (inst.swapped ? ", answers swapped so the target sits in slot B" : "") << '\n'
            << "clean p_a=" << fmt_prob(inst.clean.p_a) << " p_b=" << fmt_prob(inst.clean.p_b) << '\n';

  ja::GcgConfig gcg = config.gcg.clamped_to(vocab);
  gcg.seed = ja::derive_stream_seed(config.gcg.seed, record.question_id, instance, objective);
  const ja::AttackResult r = ja::optimize(*inputs.judge, inst.triple, spec, gcg, vocab);
  for (std::size_t it = 0; it < r.trace.size(); ++it) {
    const auto& t = r.trace[it];
    std::cout << "iter " << it << " loss=" << t.loss << " p_a=" << fmt_prob(t.p_a) << " p_b=" << fmt_prob(t.p_b)
              << '\n';
  }
  std::cout << "objective " << ja::objective_name(spec.kind) << ", iterations " << r.iterations_used << ", "
            << (r.flipped ? "verdict flipped to B" : "verdict unchanged") << '\n'
            << "suffix: " << ja::decode(r.final_suffix.tokens, vocab) << '\n';
  if (spec.kind == ja::ObjectiveKind::JMA) {
    for (const auto& [t, presence] : r.final_output.markers) {
      std::cout << "marker " << vocab.token(t) << " presence=" << fmt_prob(presence) << '\n';
    }
  }
  return kOk;
}

// Test hook: perturbs one gradient entry so the checker must fail.
class CorruptedGradient final : public ja::JudgeOracle {
 public:
  explicit CorruptedGradient(const ja::JudgeOracle& inner) : inner_(inner) {}
  std::size_t vocab_size() const override { return inner_.vocab_size(); }
  ja::JudgeOutput evaluate(const ja::PromptTriple& t, std::span<const ja::TokenId> s,
                           std::span<const ja::TokenId> lex) const override {
    return inner_.evaluate(t, s, lex);
  }
  ja::GradientMatrix suffix_gradient(const ja::PromptTriple& t, std::span<const ja::TokenId> s,
                                     const ja::ObjectiveSpec& spec) const override {
    auto g = inner_.suffix_gradient(t, s, spec);
    if (g.rows() && g.cols()) g.at(0, g.cols() - 1) += 1e-3;
    return g;
  }

 private:
  const ja::JudgeOracle& inner_;
};

int cmd_gradcheck(const CommonArgs& args, std::size_t instances, bool corrupt) {
  ja::CampaignConfig config;
  ja::CampaignInputs inputs;
  try {
    config = resolve_config(args);
    inputs = ja::prepare_campaign(config);
  } catch (const std::exception& e) {
    std::cerr << "judgeattack: configuration error: " << e.what() << '\n';
    return is_config_error(e) ? kUsage : kFailure;
  }
  const auto* toy = dynamic_cast<const ja::ToyJudge*>(inputs.judge.get());
  std::vector<ja::PromptTriple> triples;
  for (const auto& r : inputs.records) triples.push_back(ja::encode_record(r, *inputs.vocab));
  if (triples.empty()) {
    std::cerr << "judgeattack: gradcheck needs at least one dataset record\n";
    return kUsage;
  }

  ja::GradcheckOptions options;
  options.instances = instances;
  options.suffix_len = config.gcg.suffix_len;
  options.seed = config.gcg.seed;
  const std::vector<ja::ObjectiveSpec> objectives = {ja::ObjectiveSpec::cua(),
                                                     ja::ObjectiveSpec::jma(inputs.lexicons, config.jma_weights)};
  CorruptedGradient corrupted(*toy);
  const ja::JudgeOracle& source = corrupt ? static_cast<const ja::JudgeOracle&>(corrupted) : *toy;
  const auto rep = ja::run_gradcheck(*toy, source, triples, *inputs.vocab, objectives, options);

  std::cout << "checked " << rep.entries << " gradient entries over " << instances
            << " instances (CUA and JMA)\nmax relative error " << rep.max_error << " (tolerance "
            << options.tolerance << ")\n";
  if (!rep.passed) {
    std::cout << "FAIL worst entry: instance " << rep.instance << ", position " << rep.position << ", token "
              << rep.token << " ('" << inputs.vocab->token(rep.token) << "'), objective "
              << ja::objective_name(rep.objective) << ", analytic " << rep.analytic << ", numeric " << rep.numeric
              << '\n';
    return kFailure;
  }
  std::cout << "PASS\n";
  return kOk;
}

int cmd_report(const std::string& input, const std::string& format) {
  ja::CampaignReport report;
  ja::ReportFormat fmt;
  try {
    fmt = ja::parse_report_format(format);
    std::ifstream in(input, std::ios::binary);
    if (!in) throw ja::ConfigError("cannot open report " + input);
    std::ostringstream buf;
    buf << in.rdbuf();
    report = ja::parse_structured_report(buf.str());
  } catch (const std::exception& e) {
    std::cerr << "judgeattack: " << e.what() << '\n';
    return kUsage;
  }
  std::cout << ja::emit_report(report, fmt);
  return kOk;
}

std::string config_footer() {
  std::ostringstream out;
  out << "\nConfig keys (JSON file, nested objects for dotted keys; defaults shown):\n";
  for (const auto& [key, text] : ja::config_key_help()) out << "  " << key << " = " << text << '\n';
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial suffix attacks on pairwise LLM judges"};
  app.footer(config_footer());
  app.require_subcommand(1);

  CommonArgs common;

  auto* campaign = app.add_subcommand("campaign", "run every configured method over the dataset and report ASR");
  add_common(campaign, common);

  auto* attack = app.add_subcommand("attack", "optimize one instance verbosely");
  add_common(attack, common);
  std::size_t instance = 0;
  std::string objective = "cua";
  attack->add_option("-i,--instance", instance, "record index in the loaded dataset (ties excluded)");
  attack->add_option("-o,--objective", objective, "cua or jma");

  auto* gradcheck = app.add_subcommand("gradcheck", "compare analytic suffix gradients with finite differences");
  add_common(gradcheck, common);
  std::size_t gc_instances = 100;
  bool corrupt = false;
  gradcheck->add_option("-n,--instances", gc_instances, "number of sampled instances");
  gradcheck->add_flag("--inject-gradient-fault", corrupt, "perturb one analytic entry (self-test)")->group("");

  auto* report = app.add_subcommand("report", "re-render a stored structured report");
  std::string report_input;
  std::string report_format = "table";
  report->add_option("input", report_input, "report.json written by a campaign")->required();
  report->add_option("-f,--format", report_format, "table, structured or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*campaign) return cmd_campaign(common);
    if (*attack) return cmd_attack(common, instance, objective);
    if (*gradcheck) return cmd_gradcheck(common, gc_instances, corrupt);
    if (*report) return cmd_report(report_input, report_format);
  } catch (const std::exception& e) {
    std::cerr << "judgeattack: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
