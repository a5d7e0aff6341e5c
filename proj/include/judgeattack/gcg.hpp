#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "judgeattack/judge.hpp"
#include "judgeattack/types.hpp"

namespace judgeattack {

using Rng = std::mt19937_64;

struct GcgConfig {
  std::size_t suffix_len = 20;
  std::size_t top_k = 256;
  std::size_t batch = 512;
  std::size_t max_iters = 500;
  double stop_margin = 0.1;  // stop once p_b - p_a reaches this
  std::uint64_t seed = 0;
  bool exhaustive = false;  // score every (position, attackable token) pair

  // Throws ConfigError unless L >= 1, 1 <= top_k <= attackable count,
  // batch >= 1, max_iters >= 1 and stop_margin in [0, 1).
  void validate(const Vocabulary& vocab) const;
  // Copy with top_k reduced to the attackable count.
  GcgConfig clamped_to(const Vocabulary& vocab) const;
};

struct SuffixState {
  std::vector<TokenId> tokens;

  bool legal(const Vocabulary& vocab, std::size_t length) const;
  bool operator==(const SuffixState&) const = default;
};

struct TracePoint {
  double loss = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;

  bool operator==(const TracePoint&) const = default;
};

struct AttackResult {
  SuffixState final_suffix;
  std::vector<TracePoint> trace;  // trace[0] is the initial suffix
  bool flipped = false;
  std::size_t iterations_used = 0;
  ObjectiveSpec objective;
  VerdictDistribution clean;
  JudgeOutput final_output;

  std::vector<double> loss_trace() const;
};

SuffixState init_suffix(const GcgConfig& config, const Vocabulary& vocab, Rng& rng);

// Per position, the k attackable tokens with the most negative gradient;
// ties go to the lower token id.
std::vector<std::vector<TokenId>> top_k_candidates(const GradientMatrix& grad, std::size_t k,
                                                   const Vocabulary& vocab);

struct StepResult {
  SuffixState suffix;
  double loss = 0.0;
  JudgeOutput output;
  bool accepted = false;
  // Every candidate pair was scored, so a rejected step is a fixed point.
  bool complete = false;
  std::size_t evaluated = 0;
};

// One greedy coordinate step. `current` is the already-known evaluation of
// `suffix`; when absent it is computed through the oracle.
StepResult gcg_step(const JudgeOracle& oracle, const PromptTriple& triple, const SuffixState& suffix,
                    const ObjectiveSpec& spec, const GcgConfig& config, const Vocabulary& vocab, Rng& rng,
                    const std::optional<JudgeOutput>& current = std::nullopt);

// Requires the clean verdict on `triple` to be A.
AttackResult optimize(const JudgeOracle& oracle, const PromptTriple& triple, const ObjectiveSpec& spec,
                      const GcgConfig& config, const Vocabulary& vocab);

}  // namespace judgeattack
