#pragma once

#include <functional>
#include <optional>
#include <memory>
#include <string>

#include "judgeattack/baselines.hpp"
#include "judgeattack/config.hpp"
#include "judgeattack/dataset.hpp"
#include "judgeattack/judge.hpp"
#include "judgeattack/report.hpp"

namespace judgeattack {

struct OrientedInstance {
  PromptTriple triple;        // clean verdict is A; slot B is the target
  bool swapped = false;
  VerdictDistribution clean;  // after orientation
};

// Puts the judge's clean favourite in slot A so slot B is the attack target.
// The given order is kept when its verdict is already A (exact ties included);
// otherwise the answers are swapped. Returns nullopt when the judge's
// position preference yields B in both orders, since no clean-A
// arrangement exists.
std::optional<OrientedInstance> orient_instance(const PromptTriple& triple, const JudgeOracle& judge);

// Everything a campaign needs once files are resolved.
struct CampaignInputs {
  std::shared_ptr<const Vocabulary> vocab;
  std::shared_ptr<const JudgeOracle> judge;
  std::vector<JudgmentRecord> records;
  DatasetStats stats;
  HardPromptPool prompts = HardPromptPool::defaults();
  LexiconSets lexicons;
};

// Loads the dataset, vocabulary, hard prompts and toy judge named by the
// config. Any failure is a ConfigError, ParseError or SchemaError; nothing is
// written.
CampaignInputs prepare_campaign(const CampaignConfig& config);

// Generator seed for one (instance, method) cell, independent of scheduling.
std::uint64_t derive_stream_seed(std::uint64_t campaign_seed, std::string_view question_id,
                                 std::size_t record_index, std::string_view method);

// Called after each finished instance with (done, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

CampaignReport run_campaign(const CampaignConfig& config, const CampaignInputs& inputs,
                            const ProgressFn& progress = {});
CampaignReport run_campaign(const CampaignConfig& config);

// report.json, report.csv, traces.csv and table.txt under config.output_path.
void write_report_files(const CampaignReport& report, const std::string& output_path);

}  // namespace judgeattack
