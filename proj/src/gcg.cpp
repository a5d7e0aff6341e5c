#include "judgeattack/gcg.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <string>

#include "judgeattack/errors.hpp"
#include "judgeattack/objectives.hpp"

namespace judgeattack {

void GcgConfig::validate(const Vocabulary& vocab) const {
  const std::size_t attackable = vocab.attackable_tokens().size();
  if (suffix_len < 1) throw ConfigError("gcg.suffix_len must be >= 1");
  if (top_k < 1 || top_k > attackable) {
    throw ConfigError("gcg.top_k must lie in [1, " + std::to_string(attackable) + "], got " + std::to_string(top_k));
  }
  if (batch < 1) throw ConfigError("gcg.batch must be >= 1");
  if (max_iters < 1) throw ConfigError("gcg.max_iters must be >= 1");
  if (!(stop_margin >= 0.0 && stop_margin < 1.0)) throw ConfigError("gcg.stop_margin must lie in [0, 1)");
}

GcgConfig GcgConfig::clamped_to(const Vocabulary& vocab) const {
  GcgConfig out = *this;
  out.top_k = std::min(top_k, vocab.attackable_tokens().size());
  return out;
}

bool SuffixState::legal(const Vocabulary& vocab, std::size_t length) const {
  return tokens.size() == length &&
         std::all_of(tokens.begin(), tokens.end(), [&](TokenId t) { return vocab.attackable(t); });
}

std::vector<double> AttackResult::loss_trace() const {
  std::vector<double> out;
  out.reserve(trace.size());
  for (const auto& p : trace) out.push_back(p.loss);
  return out;
}

SuffixState init_suffix(const GcgConfig& config, const Vocabulary& vocab, Rng& rng) {
  const auto pool = vocab.attackable_tokens();
  if (pool.empty()) throw ConfigError("vocabulary has no attackable tokens");
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  SuffixState s;
  s.tokens.reserve(config.suffix_len);
  for (std::size_t i = 0; i < config.suffix_len; ++i) s.tokens.push_back(pool[pick(rng)]);
  return s;
}

std::vector<std::vector<TokenId>> top_k_candidates(const GradientMatrix& grad, std::size_t k,
                                                   const Vocabulary& vocab) {
  if (grad.cols() != vocab.size()) throw ContractError("gradient width does not match the vocabulary");
  const auto pool = vocab.attackable_tokens();
  if (k < 1 || k > pool.size()) {
    throw ConfigError("top_k " + std::to_string(k) + " outside [1, " + std::to_string(pool.size()) + "]");
  }
  std::vector<std::vector<TokenId>> out(grad.rows());
  for (std::size_t i = 0; i < grad.rows(); ++i) {
    const double* row = grad.row(i);
    std::vector<TokenId> ids = pool;
    auto better = [row](TokenId x, TokenId y) { return row[x] < row[y] || (row[x] == row[y] && x < y); };
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(), better);
    ids.resize(k);
    out[i] = std::move(ids);
  }
  return out;
}

StepResult gcg_step(const JudgeOracle& oracle, const PromptTriple& triple, const SuffixState& suffix,
                    const ObjectiveSpec& spec, const GcgConfig& config, const Vocabulary& vocab, Rng& rng,
                    const std::optional<JudgeOutput>& current) {
  const auto lexicon = spec.marker_tokens();
  StepResult result;
  result.suffix = suffix;
  result.output = current ? *current : oracle.evaluate(triple, suffix.tokens, lexicon);
  result.loss = loss(result.output, spec);

  std::vector<Substitution> pairs;
  if (config.exhaustive) {
    const auto pool = vocab.attackable_tokens();
    pairs.reserve(suffix.tokens.size() * pool.size());
    for (std::size_t i = 0; i < suffix.tokens.size(); ++i) {
      for (TokenId t : pool) pairs.push_back({i, t});
    }
  } else {
    const auto grad = oracle.suffix_gradient(triple, suffix.tokens, spec);
    const auto candidates = top_k_candidates(grad, config.top_k, vocab);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      for (TokenId t : candidates[i]) pairs.push_back({i, t});
    }
  }

  std::vector<Substitution> chosen;
  if (config.exhaustive || config.batch >= pairs.size()) {
    chosen = std::move(pairs);
    result.complete = true;
  } else {
    chosen.reserve(config.batch);
    std::sample(pairs.begin(), pairs.end(), std::back_inserter(chosen), config.batch, rng);
  }
  result.evaluated = chosen.size();
  if (chosen.empty()) return result;

  const auto outputs = oracle.evaluate_substitutions(triple, suffix.tokens, chosen, lexicon);
  std::size_t best = 0;
  double best_loss = loss(outputs[0], spec);
  for (std::size_t c = 1; c < chosen.size(); ++c) {
    const double l = loss(outputs[c], spec);
    // Equal losses resolve to the lowest (position, token) so the outcome
    // does not depend on sampling order.
    const bool earlier = chosen[c].position < chosen[best].position ||
                         (chosen[c].position == chosen[best].position && chosen[c].token < chosen[best].token);
    if (l < best_loss || (l == best_loss && earlier)) {
      best = c;
      best_loss = l;
    }
  }
  if (best_loss < result.loss) {
    result.suffix.tokens[chosen[best].position] = chosen[best].token;
    result.loss = best_loss;
    result.output = outputs[best];
    result.accepted = true;
  }
  return result;
}

AttackResult optimize(const JudgeOracle& oracle, const PromptTriple& triple, const ObjectiveSpec& spec,
                      const GcgConfig& config, const Vocabulary& vocab) {
  config.validate(vocab);
  spec.validate();
  const auto lexicon = spec.marker_tokens();

  AttackResult result;
  result.objective = spec;
  result.clean = oracle.evaluate(triple, {}, lexicon).dist;
  if (result.clean.decide() != Verdict::A) {
    throw ContractError("optimize requires an instance whose clean verdict is A");
  }

  Rng rng(config.seed);
  SuffixState suffix = init_suffix(config, vocab, rng);
  JudgeOutput output = oracle.evaluate(triple, suffix.tokens, lexicon);
  double current = loss(output, spec);
  result.trace.push_back({current, output.dist.p_a, output.dist.p_b});

  while (result.iterations_used < config.max_iters && output.dist.margin_b() < config.stop_margin) {
    StepResult step = gcg_step(oracle, triple, suffix, spec, config, vocab, rng, output);
    ++result.iterations_used;
    if (step.accepted) {
      suffix = std::move(step.suffix);
      output = std::move(step.output);
      current = step.loss;
    }
    result.trace.push_back({current, output.dist.p_a, output.dist.p_b});
    if (!step.accepted && step.complete) break;
  }

  result.final_suffix = std::move(suffix);
  result.final_output = std::move(output);
  result.flipped = result.final_output.dist.decide() == Verdict::B;
  return result;
}

}  // namespace judgeattack
