#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "judgeattack/gcg.hpp"

namespace judgeattack {

class HardPromptPool {
 public:
  // Throws ConfigError for an empty pool or a blank prompt.
  explicit HardPromptPool(std::vector<std::string> prompts);

  const std::vector<std::string>& prompts() const { return prompts_; }
  std::size_t size() const { return prompts_.size(); }

  static HardPromptPool defaults();
  // One prompt per line; blank lines are skipped.
  static HardPromptPool load(const std::filesystem::path& path);

 private:
  std::vector<std::string> prompts_;
};

// Picks one prompt uniformly and encodes it.
std::vector<TokenId> hard_prompt_suffix(const HardPromptPool& pool, const Vocabulary& vocab, Rng& rng);
// Index form of the draw above, for reporting which prompt was used.
std::size_t pick_hard_prompt(const HardPromptPool& pool, Rng& rng);

// `length` uniform draws from the attackable tokens.
std::vector<TokenId> random_suffix(std::size_t length, const Vocabulary& vocab, Rng& rng);

// Uniform permutation of `suffix`.
std::vector<TokenId> token_shuffle(std::vector<TokenId> suffix, Rng& rng);

}  // namespace judgeattack
