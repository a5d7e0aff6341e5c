#pragma once

#include "judgeattack/types.hpp"

namespace judgeattack {

// Attack losses are negated objectives: lower is better for the attacker.

// p_a - p_b, in [-1, 1].
double cua_loss(const JudgeOutput& output);

// -(w+ * sum_P presence - w- * sum_N presence + wv * p_b).
// Throws ContractError if a lexicon token has no marker score.
double jma_loss(const JudgeOutput& output, const LexiconSets& lexicons, const JmaWeights& weights = {});

double loss(const JudgeOutput& output, const ObjectiveSpec& spec);

// Partial derivatives of the loss with respect to each observable, treating
// p_a, p_b and every presence as independent inputs.
struct LossPartials {
  double d_pa = 0.0;
  double d_pb = 0.0;
  MarkerScores d_markers;
};

LossPartials loss_partials(const ObjectiveSpec& spec);

// Default marker words for JMA.
std::vector<std::string> default_positive_markers();
std::vector<std::string> default_negative_markers();

LexiconSets encode_lexicons(const std::vector<std::string>& positive, const std::vector<std::string>& negative,
                            const Vocabulary& vocab);

}  // namespace judgeattack
