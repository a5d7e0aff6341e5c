#include "judgeattack/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "judgeattack/errors.hpp"
#include "judgeattack/gcg.hpp"
#include "judgeattack/objectives.hpp"

namespace judgeattack {

void GradcheckReport::merge(const GradcheckReport& other) {
  entries += other.entries;
  passed = passed && other.passed;
  if (other.max_error > max_error) {
    max_error = other.max_error;
    instance = other.instance;
    position = other.position;
    token = other.token;
    objective = other.objective;
    analytic = other.analytic;
    numeric = other.numeric;
  }
}

double gradient_error(double analytic, double numeric, const GradcheckOptions& options) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), options.abs_floor / options.tolerance});
  return std::abs(analytic - numeric) / scale;
}

GradcheckReport check_suffix_gradient(const ToyJudge& judge, const JudgeOracle& analytic_source,
                                      const PromptTriple& triple, std::span<const TokenId> suffix,
                                      const ObjectiveSpec& spec, const GradcheckOptions& options,
                                      std::size_t instance_index) {
  const auto& p = judge.params();
  const auto lexicon = spec.marker_tokens();
  const GradientMatrix grad = analytic_source.suffix_gradient(triple, suffix, spec);
  if (grad.rows() != suffix.size() || grad.cols() != p.vocab_size) {
    throw ContractError("gradient has the wrong shape");
  }

  std::vector<TokenId> seq = triple.answer_b;
  seq.insert(seq.end(), suffix.begin(), suffix.end());
  const auto base = pool(seq, p);
  const auto weights = pooling_weights(seq.size(), p.gamma);

  Rng rng(options.seed ^ (instance_index * 0x9e3779b97f4a7c15ULL));
  std::vector<TokenId> all(p.vocab_size);
  for (TokenId t = 0; t < p.vocab_size; ++t) all[t] = t;

  GradcheckReport report;
  report.objective = spec.kind;
  std::vector<double> shifted(p.dim);
  for (std::size_t i = 0; i < suffix.size(); ++i) {
    const double w = weights[triple.answer_b.size() + i];
    std::vector<TokenId> tokens = all;
    if (options.tokens_per_position && options.tokens_per_position < tokens.size()) {
      std::vector<TokenId> picked;
      std::sample(all.begin(), all.end(), std::back_inserter(picked), options.tokens_per_position, rng);
      tokens = std::move(picked);
    }
    for (TokenId t : tokens) {
      const auto e = p.embedding(t);
      auto loss_at = [&](double h) {
        for (std::size_t j = 0; j < p.dim; ++j) shifted[j] = base[j] + h * w * e[j];
        return loss(judge.evaluate_pooled(triple, shifted, lexicon), spec);
      };
      const double numeric = (loss_at(options.step) - loss_at(-options.step)) / (2.0 * options.step);
      const double analytic = grad.at(i, t);
      const double err = std::isfinite(analytic) ? gradient_error(analytic, numeric, options) : INFINITY;
      if (++report.entries == 1 || err > report.max_error) {
        report.max_error = err;
        report.instance = instance_index;
        report.position = i;
        report.token = t;
        report.analytic = analytic;
        report.numeric = numeric;
      }
    }
  }
  report.passed = report.max_error <= options.tolerance;
  return report;
}

GradcheckReport run_gradcheck(const ToyJudge& judge, const JudgeOracle& analytic_source,
                              const std::vector<PromptTriple>& triples, const Vocabulary& vocab,
                              const std::vector<ObjectiveSpec>& objectives, const GradcheckOptions& options) {
  if (triples.empty()) throw ConfigError("gradcheck needs at least one instance");
  Rng rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, triples.size() - 1);
  GcgConfig suffix_cfg;
  suffix_cfg.suffix_len = options.suffix_len;
  GradcheckReport total;
  for (std::size_t n = 0; n < options.instances; ++n) {
    const PromptTriple& triple = triples[pick(rng)];
    const auto suffix = init_suffix(suffix_cfg, vocab, rng).tokens;
    for (const auto& spec : objectives) {
      total.merge(check_suffix_gradient(judge, analytic_source, triple, suffix, spec, options, n));
    }
  }
  total.passed = total.passed && total.max_error <= options.tolerance;
  return total;
}

}  // namespace judgeattack
