#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "judgeattack/gcg.hpp"

namespace judgeattack {

enum class Method { RandomSuffix, TokenShuffle, HardPrompt, Jma, Cua };

// Canonical ordering: controls first, CUA last.
inline constexpr Method kAllMethods[] = {Method::RandomSuffix, Method::TokenShuffle, Method::HardPrompt, Method::Jma,
                                         Method::Cua};

std::string_view method_key(Method m);      // "random_suffix", ...
std::string_view method_display(Method m);  // "Random-Suffix", ...
Method parse_method(std::string_view key);

struct JudgeSettings {
  std::uint64_t seed = 7;
  std::size_t dim = 8;
  double gamma = 0.9;
  bool flat = false;         // zero every head: nothing is attackable
  std::string params_path;   // load parameters instead of sampling them
};

// A row shown in the table for comparison only, never computed here.
struct ComparisonRow {
  std::string name;
  double asr = 0.0;
  bool operator==(const ComparisonRow&) const = default;
};

struct CampaignConfig {
  std::string dataset_path;
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  GcgConfig gcg;
  std::vector<std::string> positive_markers{"coherent", "accurate"};
  std::vector<std::string> negative_markers{"incorrect", "irrelevant"};
  JmaWeights jma_weights;
  JudgeSettings judge;
  std::string vocab_path;         // empty: build from the dataset
  std::string hard_prompts_path;  // empty: built-in pool
  std::string output_path = "out";
  long long instance_limit = -1;  // negative: every usable record
  std::size_t threads = 0;        // 0: hardware concurrency
  std::vector<ComparisonRow> comparison_rows;

  bool has(Method m) const;
  // Structural checks that need no vocabulary; throws ConfigError.
  void validate() const;
  nlohmann::json to_json() const;
};

// Every recognised dotted key with its default, for help output.
std::vector<std::pair<std::string, std::string>> config_key_help();

// Parses a config document. Unknown keys and a missing dataset_path are
// ConfigErrors naming the key. Overrides are "dotted.key=value"; the value
// is read as JSON when it parses, otherwise as a string (comma separated for
// list keys).
CampaignConfig parse_config(const nlohmann::json& doc, const std::vector<std::string>& overrides = {});
CampaignConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

inline constexpr const char* kConfigEnvVar = "JUDGEATTACK_CONFIG";

}  // namespace judgeattack
