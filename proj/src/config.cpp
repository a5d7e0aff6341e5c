#include "judgeattack/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "judgeattack/errors.hpp"

namespace judgeattack {

using nlohmann::json;

namespace {

enum class Kind { String, UInt, Int, Real, Bool, StringList, Rows };

struct KeyInfo {
  const char* key;
  Kind kind;
  const char* help;
};

constexpr KeyInfo kKeys[] = {
    {"dataset_path", Kind::String, "line-delimited judgment records"},
    {"methods", Kind::StringList, "subset of random_suffix, token_shuffle, hard_prompt, jma, cua"},
    {"instance_limit", Kind::Int, "maximum instances attacked; negative means all"},
    {"output_path", Kind::String, "directory receiving report.json, report.csv, traces.csv, table.txt"},
    {"vocab_path", Kind::String, "vocabulary file; empty builds one from the dataset"},
    {"hard_prompts_path", Kind::String, "hard prompt file; empty uses the built-in pool"},
    {"threads", Kind::UInt, "worker threads; 0 uses hardware concurrency"},
    {"comparison_rows", Kind::Rows, "externally supplied [{name, asr}] rows shown in the table"},
    {"gcg.suffix_len", Kind::UInt, "adversarial suffix length L"},
    {"gcg.top_k", Kind::UInt, "candidates kept per position (clamped to attackable count)"},
    {"gcg.batch", Kind::UInt, "substitutions scored per iteration"},
    {"gcg.max_iters", Kind::UInt, "iteration cap"},
    {"gcg.stop_margin", Kind::Real, "early stop once p_b - p_a reaches this"},
    {"gcg.seed", Kind::UInt, "campaign seed; per-instance streams derive from it"},
    {"gcg.exhaustive", Kind::Bool, "score every single-token substitution"},
    {"lexicons.positive", Kind::StringList, "positive justification markers"},
    {"lexicons.negative", Kind::StringList, "negative justification markers"},
    {"jma_weights.positive", Kind::Real, "weight on the positive marker sum"},
    {"jma_weights.negative", Kind::Real, "weight on the negative marker sum"},
    {"jma_weights.verdict", Kind::Real, "weight on p_b"},
    {"judge.seed", Kind::UInt, "toy judge parameter seed"},
    {"judge.dim", Kind::UInt, "toy judge embedding dimension"},
    {"judge.gamma", Kind::Real, "positional decay in (0, 1]"},
    {"judge.flat", Kind::Bool, "zero all judge heads (unattackable control judge)"},
    {"judge.params_path", Kind::String, "load toy judge parameters from a binary file"},
};

const KeyInfo* find_key(std::string_view key) {
  for (const auto& k : kKeys) {
    if (key == k.key) return &k;
  }
  return nullptr;
}

bool is_group(std::string_view name) {
  for (const auto& k : kKeys) {
    std::string_view key = k.key;
    if (key.size() > name.size() && key.substr(0, name.size()) == name && key[name.size()] == '.') return true;
  }
  return false;
}

void flatten(const json& node, const std::string& prefix, std::map<std::string, json>& out) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (find_key(key)) {
      out[key] = it.value();
    } else if (is_group(key)) {
      if (!it.value().is_object()) throw ConfigError("config key '" + key + "' must be an object");
      flatten(it.value(), key, out);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = std::min(s.find(',', start), s.size());
    std::string piece = s.substr(start, end - start);
    piece.erase(0, piece.find_first_not_of(' '));
    piece.erase(piece.find_last_not_of(' ') + 1);
    if (!piece.empty()) out.push_back(piece);
    start = end + 1;
  }
  return out;
}

json override_value(const KeyInfo& info, const std::string& raw) {
  json parsed = json::parse(raw, nullptr, false);
  if (!parsed.is_discarded()) {
    if (info.kind == Kind::String && !parsed.is_string()) return raw;
    if (info.kind == Kind::StringList && parsed.is_string()) return split_commas(parsed.get<std::string>());
    return parsed;
  }
  if (info.kind == Kind::StringList) return split_commas(raw);
  return raw;
}

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::String: return "a string";
    case Kind::UInt: return "a non-negative integer";
    case Kind::Int: return "an integer";
    case Kind::Real: return "a number";
    case Kind::Bool: return "a boolean";
    case Kind::StringList: return "a list of strings";
    case Kind::Rows: return "a list of {name, asr} objects";
  }
  return "?";
}

void check_kind(const std::string& key, Kind kind, const json& v) {
  bool ok = false;
  switch (kind) {
    case Kind::String: ok = v.is_string(); break;
    case Kind::UInt: ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); break;
    case Kind::Int: ok = v.is_number_integer(); break;
    case Kind::Real: ok = v.is_number(); break;
    case Kind::Bool: ok = v.is_boolean(); break;
    case Kind::StringList:
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_string(); });
      break;
    case Kind::Rows:
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) {
             return e.is_object() && e.size() == 2 && e.contains("name") && e["name"].is_string() &&
                    e.contains("asr") && e["asr"].is_number();
           });
      break;
  }
  if (!ok) throw ConfigError("config key '" + key + "' must be " + kind_name(kind));
}

}  // namespace

std::string_view method_key(Method m) {
  switch (m) {
    case Method::RandomSuffix: return "random_suffix";
    case Method::TokenShuffle: return "token_shuffle";
    case Method::HardPrompt: return "hard_prompt";
    case Method::Jma: return "jma";
    case Method::Cua: return "cua";
  }
  return "?";
}

std::string_view method_display(Method m) {
  switch (m) {
    case Method::RandomSuffix: return "Random-Suffix";
    case Method::TokenShuffle: return "Token-Shuffle";
    case Method::HardPrompt: return "Hard Prompt";
    case Method::Jma: return "JMA";
    case Method::Cua: return "CUA";
  }
  return "?";
}

Method parse_method(std::string_view key) {
  for (Method m : kAllMethods) {
    if (method_key(m) == key) return m;
  }
  throw ConfigError("unknown method '" + std::string(key) + "'");
}

bool CampaignConfig::has(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }

void CampaignConfig::validate() const {
  if (dataset_path.empty()) throw ConfigError("missing required config key 'dataset_path'");
  if (methods.empty()) throw ConfigError("config key 'methods' must name at least one method");
  std::set<Method> seen;
  for (Method m : methods) {
    if (!seen.insert(m).second) throw ConfigError("method '" + std::string(method_key(m)) + "' listed twice");
  }
  if (has(Method::TokenShuffle) && !has(Method::Cua)) {
    throw ConfigError("method 'token_shuffle' requires 'cua' (it shuffles CUA suffixes)");
  }
  if (gcg.suffix_len < 1) throw ConfigError("gcg.suffix_len must be >= 1");
  if (gcg.top_k < 1) throw ConfigError("gcg.top_k must be >= 1");
  if (gcg.batch < 1) throw ConfigError("gcg.batch must be >= 1");
  if (gcg.max_iters < 1) throw ConfigError("gcg.max_iters must be >= 1");
  if (!(gcg.stop_margin >= 0.0 && gcg.stop_margin < 1.0)) throw ConfigError("gcg.stop_margin must lie in [0, 1)");
  if (judge.params_path.empty()) {
    if (judge.dim < 1) throw ConfigError("judge.dim must be >= 1");
    if (!(judge.gamma > 0.0 && judge.gamma <= 1.0)) throw ConfigError("judge.gamma must lie in (0, 1]");
  }
  if (output_path.empty()) throw ConfigError("config key 'output_path' must not be empty");
}

json CampaignConfig::to_json() const {
  json methods_json = json::array();
  for (Method m : methods) methods_json.push_back(std::string(method_key(m)));
  json rows = json::array();
  for (const auto& r : comparison_rows) rows.push_back({{"name", r.name}, {"asr", r.asr}});
  return {
      {"dataset_path", dataset_path},
      {"methods", methods_json},
      {"instance_limit", instance_limit},
      {"output_path", output_path},
      {"vocab_path", vocab_path},
      {"hard_prompts_path", hard_prompts_path},
      {"threads", threads},
      {"comparison_rows", rows},
      {"gcg",
       {{"suffix_len", gcg.suffix_len},
        {"top_k", gcg.top_k},
        {"batch", gcg.batch},
        {"max_iters", gcg.max_iters},
        {"stop_margin", gcg.stop_margin},
        {"seed", gcg.seed},
        {"exhaustive", gcg.exhaustive}}},
      {"lexicons", {{"positive", positive_markers}, {"negative", negative_markers}}},
      {"jma_weights",
       {{"positive", jma_weights.positive}, {"negative", jma_weights.negative}, {"verdict", jma_weights.verdict}}},
      {"judge",
       {{"seed", judge.seed},
        {"dim", judge.dim},
        {"gamma", judge.gamma},
        {"flat", judge.flat},
        {"params_path", judge.params_path}}},
  };
}

std::vector<std::pair<std::string, std::string>> config_key_help() {
  std::map<std::string, json> defaults;
  flatten(CampaignConfig{}.to_json(), "", defaults);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : kKeys) {
    const std::string def = std::string(k.key) == "dataset_path" ? "(required)" : defaults.at(k.key).dump();
    out.emplace_back(k.key, def + "  " + k.help);
  }
  return out;
}

CampaignConfig parse_config(const json& doc, const std::vector<std::string>& overrides) {
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  std::map<std::string, json> values;
  flatten(doc, "", values);
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + ov + "' is not key=value");
    const std::string key = ov.substr(0, eq);
    const KeyInfo* info = find_key(key);
    if (!info) throw ConfigError("unknown config key '" + key + "' in override");
    values[key] = override_value(*info, ov.substr(eq + 1));
  }
  for (const auto& [key, v] : values) check_kind(key, find_key(key)->kind, v);

  CampaignConfig cfg;
  auto get = [&](const char* key, auto& dst) {
    if (auto it = values.find(key); it != values.end()) it->second.get_to(dst);
  };
  get("dataset_path", cfg.dataset_path);
  if (auto it = values.find("methods"); it != values.end()) {
    cfg.methods.clear();
    for (const auto& m : it->second) cfg.methods.push_back(parse_method(m.get<std::string>()));
  }
  get("instance_limit", cfg.instance_limit);
  get("output_path", cfg.output_path);
  get("vocab_path", cfg.vocab_path);
  get("hard_prompts_path", cfg.hard_prompts_path);
  get("threads", cfg.threads);
  if (auto it = values.find("comparison_rows"); it != values.end()) {
    for (const auto& r : it->second) cfg.comparison_rows.push_back({r["name"].get<std::string>(), r["asr"].get<double>()});
  }
  get("gcg.suffix_len", cfg.gcg.suffix_len);
  get("gcg.top_k", cfg.gcg.top_k);
  get("gcg.batch", cfg.gcg.batch);
  get("gcg.max_iters", cfg.gcg.max_iters);
  get("gcg.stop_margin", cfg.gcg.stop_margin);
  get("gcg.seed", cfg.gcg.seed);
  get("gcg.exhaustive", cfg.gcg.exhaustive);
  get("lexicons.positive", cfg.positive_markers);
  get("lexicons.negative", cfg.negative_markers);
  get("jma_weights.positive", cfg.jma_weights.positive);
  get("jma_weights.negative", cfg.jma_weights.negative);
  get("jma_weights.verdict", cfg.jma_weights.verdict);
  get("judge.seed", cfg.judge.seed);
  get("judge.dim", cfg.judge.dim);
  get("judge.gamma", cfg.judge.gamma);
  get("judge.flat", cfg.judge.flat);
  get("judge.params_path", cfg.judge.params_path);
  cfg.validate();
  return cfg;
}

CampaignConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc = json::parse(in, nullptr, false, true);
  if (doc.is_discarded()) throw ConfigError("config file " + path.string() + " is not valid JSON");
  return parse_config(doc, overrides);
}

}  // namespace judgeattack
