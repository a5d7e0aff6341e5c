#pragma once

#include <cstdint>
#include <vector>

#include "judgeattack/judge.hpp"

namespace judgeattack {

struct GradcheckOptions {
  std::size_t instances = 100;
  std::size_t suffix_len = 20;
  double step = 1e-5;        // central difference step on the one-hot entry
  double tolerance = 1e-6;   // max relative error
  double abs_floor = 1e-9;   // absolute error always accepted
  std::uint64_t seed = 0;
  std::size_t tokens_per_position = 0;  // 0 checks every vocabulary entry
};

struct GradcheckReport {
  double max_error = 0.0;
  std::size_t entries = 0;
  // Location of the worst entry.
  std::size_t instance = 0;
  std::size_t position = 0;
  TokenId token = 0;
  ObjectiveKind objective = ObjectiveKind::CUA;
  double analytic = 0.0;
  double numeric = 0.0;
  bool passed = true;

  void merge(const GradcheckReport& other);
};

// |a - n| / max(|a|, |n|, abs_floor / tolerance): at most `tolerance` exactly
// when the relative error is within tolerance or the absolute error is within
// abs_floor.
double gradient_error(double analytic, double numeric, const GradcheckOptions& options);

// Compares `analytic_source`'s suffix gradient against central differences of
// `judge`'s loss, perturbing b's pooled vector along w_i * E[t].
GradcheckReport check_suffix_gradient(const ToyJudge& judge, const JudgeOracle& analytic_source,
                                      const PromptTriple& triple, std::span<const TokenId> suffix,
                                      const ObjectiveSpec& spec, const GradcheckOptions& options,
                                      std::size_t instance_index = 0);

// Draws `options.instances` (triple, random suffix) pairs from `triples` with
// a seeded generator and checks every objective in `objectives`.
GradcheckReport run_gradcheck(const ToyJudge& judge, const JudgeOracle& analytic_source,
                              const std::vector<PromptTriple>& triples, const Vocabulary& vocab,
                              const std::vector<ObjectiveSpec>& objectives, const GradcheckOptions& options);

}  // namespace judgeattack
