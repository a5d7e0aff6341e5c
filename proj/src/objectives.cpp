#include "judgeattack/objectives.hpp"

#include <algorithm>
#include <string>

#include "judgeattack/errors.hpp"

namespace judgeattack {

std::vector<TokenId> LexiconSets::all() const {
  std::vector<TokenId> out(positive.begin(), positive.end());
  out.insert(out.end(), negative.begin(), negative.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<TokenId> ObjectiveSpec::marker_tokens() const {
  return kind == ObjectiveKind::JMA ? lexicons.all() : std::vector<TokenId>{};
}

void ObjectiveSpec::validate() const {
  for (TokenId t : lexicons.positive) {
    if (lexicons.negative.count(t)) {
      throw ConfigError("token " + std::to_string(t) + " is in both positive and negative lexicons");
    }
  }
}

const char* objective_name(ObjectiveKind kind) { return kind == ObjectiveKind::CUA ? "CUA" : "JMA"; }

double cua_loss(const JudgeOutput& output) { return output.dist.p_a - output.dist.p_b; }

namespace {

double presence_sum(const JudgeOutput& output, const std::set<TokenId>& tokens) {
  double sum = 0.0;
  for (TokenId t : tokens) {
    auto it = output.markers.find(t);
    if (it == output.markers.end()) {
      throw ContractError("judge output has no marker score for lexicon token " + std::to_string(t));
    }
    sum += it->second;
  }
  return sum;
}

}  // namespace

double jma_loss(const JudgeOutput& output, const LexiconSets& lexicons, const JmaWeights& weights) {
  const double pos = presence_sum(output, lexicons.positive);
  const double neg = presence_sum(output, lexicons.negative);
  return -(weights.positive * pos - weights.negative * neg + weights.verdict * output.dist.p_b);
}

double loss(const JudgeOutput& output, const ObjectiveSpec& spec) {
  switch (spec.kind) {
    case ObjectiveKind::CUA:
      return cua_loss(output);
    case ObjectiveKind::JMA:
      return jma_loss(output, spec.lexicons, spec.weights);
  }
  throw ContractError("unknown objective kind");
}

LossPartials loss_partials(const ObjectiveSpec& spec) {
  LossPartials d;
  if (spec.kind == ObjectiveKind::CUA) {
    d.d_pa = 1.0;
    d.d_pb = -1.0;
    return d;
  }
  d.d_pb = -spec.weights.verdict;
  for (TokenId t : spec.lexicons.positive) d.d_markers[t] = -spec.weights.positive;
  for (TokenId t : spec.lexicons.negative) d.d_markers[t] = spec.weights.negative;
  return d;
}

std::vector<std::string> default_positive_markers() { return {"coherent", "accurate"}; }
std::vector<std::string> default_negative_markers() { return {"incorrect", "irrelevant"}; }

LexiconSets encode_lexicons(const std::vector<std::string>& positive, const std::vector<std::string>& negative,
                            const Vocabulary& vocab) {
  LexiconSets lex;
  for (const auto& w : positive) lex.positive.insert(vocab.require(w));
  for (const auto& w : negative) lex.negative.insert(vocab.require(w));
  ObjectiveSpec probe{ObjectiveKind::JMA, lex, {}};
  probe.validate();
  return lex;
}

}  // namespace judgeattack
