#include "judgeattack/judge.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "judgeattack/errors.hpp"
#include "judgeattack/objectives.hpp"

namespace judgeattack {

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * y[j];
  return s;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

VerdictDistribution softmax2(double z_a, double z_b) {
  const double m = std::max(z_a, z_b);
  const double e_a = std::exp(z_a - m);
  const double e_b = std::exp(z_b - m);
  return {e_a / (e_a + e_b), e_b / (e_a + e_b)};
}

std::vector<double> pool_weighted(std::span<const TokenId> tokens, std::span<const double> weights,
                                  const ToyJudgeParams& params) {
  std::vector<double> out(params.dim, 0.0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto e = params.embedding(tokens[i]);
    for (std::size_t j = 0; j < params.dim; ++j) out[j] += weights[i] * e[j];
  }
  return out;
}

}  // namespace

std::vector<JudgeOutput> JudgeOracle::evaluate_substitutions(const PromptTriple& triple,
                                                             std::span<const TokenId> suffix,
                                                             std::span<const Substitution> subs,
                                                             std::span<const TokenId> lexicon) const {
  std::vector<TokenId> work(suffix.begin(), suffix.end());
  std::vector<JudgeOutput> out;
  out.reserve(subs.size());
  for (const auto& s : subs) {
    const TokenId saved = work.at(s.position);
    work[s.position] = s.token;
    out.push_back(evaluate(triple, work, lexicon));
    work[s.position] = saved;
  }
  return out;
}

std::ptrdiff_t ToyJudgeParams::marker_index(TokenId t) const {
  auto it = std::find(lexicon.begin(), lexicon.end(), t);
  return it == lexicon.end() ? -1 : it - lexicon.begin();
}

void ToyJudgeParams::validate() const {
  if (dim < 1) throw ConfigError("toy judge dimension must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("toy judge gamma must lie in (0, 1]");
  if (embeddings.size() != vocab_size * dim) throw ConfigError("embedding matrix shape mismatch");
  if (head_a.size() != dim || head_b.size() != dim) throw ConfigError("verdict head shape mismatch");
  if (coupling.size() != dim * dim) throw ConfigError("coupling matrix shape mismatch");
  if (marker_heads.size() != lexicon.size()) throw ConfigError("marker head count mismatch");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  bool ok = finite(embeddings) && finite(head_a) && finite(head_b) && finite(coupling);
  for (std::size_t k = 0; k < lexicon.size(); ++k) {
    if (lexicon[k] >= vocab_size) throw ConfigError("lexicon token outside the vocabulary");
    if (marker_heads[k].size() != dim) throw ConfigError("marker head shape mismatch");
    ok = ok && finite(marker_heads[k]);
  }
  if (!ok) throw ConfigError("toy judge parameters contain non-finite values");
}

ToyJudgeParams new_toy_judge(std::uint64_t seed, std::size_t dim, const Vocabulary& vocab,
                             std::span<const TokenId> lexicon, double gamma) {
  if (dim < 1) throw ConfigError("toy judge dimension must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("toy judge gamma must lie in (0, 1]");

  ToyJudgeParams p;
  p.vocab_size = vocab.size();
  p.dim = dim;
  p.gamma = gamma;
  p.seed = seed;
  for (TokenId t : lexicon) {
    if (t >= vocab.size()) throw ConfigError("lexicon token " + std::to_string(t) + " outside the vocabulary");
    if (std::find(p.lexicon.begin(), p.lexicon.end(), t) == p.lexicon.end()) p.lexicon.push_back(t);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  auto fill = [&](std::vector<double>& v, std::size_t n) {
    v.resize(n);
    for (auto& x : v) x = uniform(rng);
  };
  fill(p.embeddings, p.vocab_size * dim);
  fill(p.head_a, dim);
  fill(p.head_b, dim);
  fill(p.coupling, dim * dim);
  p.marker_heads.resize(p.lexicon.size());
  for (auto& m : p.marker_heads) fill(m, dim);
  return p;
}

ToyJudgeParams flatten_heads(ToyJudgeParams params) {
  std::fill(params.head_a.begin(), params.head_a.end(), 0.0);
  std::fill(params.head_b.begin(), params.head_b.end(), 0.0);
  std::fill(params.coupling.begin(), params.coupling.end(), 0.0);
  for (auto& m : params.marker_heads) std::fill(m.begin(), m.end(), 0.0);
  return params;
}

std::vector<double> pooling_weights(std::size_t length, double gamma) {
  std::vector<double> w(length);
  double g = 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i < length; ++i) {
    w[i] = g;
    total += g;
    g *= gamma;
  }
  for (auto& x : w) x /= total;
  return w;
}

std::vector<double> pool(std::span<const TokenId> tokens, const ToyJudgeParams& params) {
  if (tokens.empty()) throw EvaluationError("cannot pool an empty token list");
  for (TokenId t : tokens) {
    if (t >= params.vocab_size) throw EvaluationError("token id " + std::to_string(t) + " outside the vocabulary");
  }
  return pool_weighted(tokens, pooling_weights(tokens.size(), params.gamma), params);
}

struct ToyJudge::Context {
  std::vector<double> coupled_q;  // W^T q
  double z_a = 0.0;
  std::vector<TokenId> b_with_suffix;
  std::size_t suffix_offset = 0;
  std::vector<double> weights;  // pooling weights over b_with_suffix
};

ToyJudge::ToyJudge(std::shared_ptr<const ToyJudgeParams> params) : params_(std::move(params)) {
  if (!params_) throw ConfigError("toy judge needs parameters");
  params_->validate();
}

ToyJudge::ToyJudge(ToyJudgeParams params) : ToyJudge(std::make_shared<const ToyJudgeParams>(std::move(params))) {}

void ToyJudge::check_tokens(std::span<const TokenId> tokens, const char* what) const {
  for (TokenId t : tokens) {
    if (t >= params_->vocab_size) {
      throw EvaluationError(std::string(what) + " token id " + std::to_string(t) + " outside the vocabulary");
    }
  }
}

ToyJudge::Context ToyJudge::prepare(const PromptTriple& triple) const {
  if (!triple.valid()) throw EvaluationError("prompt triple has an empty answer");
  check_tokens(triple.question, "question");
  check_tokens(triple.answer_a, "answer_a");
  check_tokens(triple.answer_b, "answer_b");
  const auto& p = *params_;
  Context ctx;
  // An empty question contributes nothing to the coupling term.
  std::vector<double> q = triple.question.empty() ? std::vector<double>(p.dim, 0.0) : pool(triple.question, p);
  ctx.coupled_q.assign(p.dim, 0.0);
  for (std::size_t i = 0; i < p.dim; ++i) {
    for (std::size_t j = 0; j < p.dim; ++j) ctx.coupled_q[j] += q[i] * p.coupling[i * p.dim + j];
  }
  const auto pooled_a = pool(triple.answer_a, p);
  ctx.z_a = dot(p.head_a, pooled_a) + dot(ctx.coupled_q, pooled_a);
  ctx.b_with_suffix = triple.answer_b;
  ctx.suffix_offset = triple.answer_b.size();
  return ctx;
}

JudgeOutput ToyJudge::score(const Context& ctx, std::span<const double> pooled_b,
                            std::span<const TokenId> lexicon) const {
  const auto& p = *params_;
  const double z_b = dot(p.head_b, pooled_b) + dot(ctx.coupled_q, pooled_b);
  JudgeOutput out;
  out.dist = softmax2(ctx.z_a, z_b);
  for (TokenId t : lexicon) {
    const auto k = p.marker_index(t);
    if (k < 0) throw ConfigError("lexicon token " + std::to_string(t) + " has no marker head");
    out.markers[t] = sigmoid(dot(p.marker_heads[static_cast<std::size_t>(k)], pooled_b));
  }
  return out;
}

JudgeOutput ToyJudge::evaluate(const PromptTriple& triple, std::span<const TokenId> suffix,
                               std::span<const TokenId> lexicon) const {
  check_tokens(suffix, "suffix");
  Context ctx = prepare(triple);
  ctx.b_with_suffix.insert(ctx.b_with_suffix.end(), suffix.begin(), suffix.end());
  const auto weights = pooling_weights(ctx.b_with_suffix.size(), params_->gamma);
  return score(ctx, pool_weighted(ctx.b_with_suffix, weights, *params_), lexicon);
}

JudgeOutput ToyJudge::evaluate_pooled(const PromptTriple& triple, std::span<const double> pooled_b,
                                      std::span<const TokenId> lexicon) const {
  if (pooled_b.size() != params_->dim) throw EvaluationError("pooled vector has the wrong dimension");
  return score(prepare(triple), pooled_b, lexicon);
}

std::vector<JudgeOutput> ToyJudge::evaluate_substitutions(const PromptTriple& triple,
                                                          std::span<const TokenId> suffix,
                                                          std::span<const Substitution> subs,
                                                          std::span<const TokenId> lexicon) const {
  check_tokens(suffix, "suffix");
  Context ctx = prepare(triple);
  ctx.b_with_suffix.insert(ctx.b_with_suffix.end(), suffix.begin(), suffix.end());
  const auto weights = pooling_weights(ctx.b_with_suffix.size(), params_->gamma);
  std::vector<JudgeOutput> out;
  out.reserve(subs.size());
  for (const auto& s : subs) {
    if (s.position >= suffix.size()) throw EvaluationError("substitution position outside the suffix");
    if (s.token >= params_->vocab_size) throw EvaluationError("substitution token outside the vocabulary");
    auto& slot = ctx.b_with_suffix[ctx.suffix_offset + s.position];
    const TokenId saved = slot;
    slot = s.token;
    out.push_back(score(ctx, pool_weighted(ctx.b_with_suffix, weights, *params_), lexicon));
    slot = saved;
  }
  return out;
}

GradientMatrix ToyJudge::suffix_gradient(const PromptTriple& triple, std::span<const TokenId> suffix,
                                         const ObjectiveSpec& objective) const {
  check_tokens(suffix, "suffix");
  const auto& p = *params_;
  const auto lexicon = objective.marker_tokens();
  Context ctx = prepare(triple);
  ctx.b_with_suffix.insert(ctx.b_with_suffix.end(), suffix.begin(), suffix.end());
  const auto weights = pooling_weights(ctx.b_with_suffix.size(), p.gamma);
  const auto pooled_b = pool_weighted(ctx.b_with_suffix, weights, p);
  const JudgeOutput out = score(ctx, pooled_b, lexicon);
  const LossPartials d = loss_partials(objective);

  // dL/d(pooled_b): verdict path through z_B, then each marker head.
  std::vector<double> g(p.dim, 0.0);
  const double d_zb = (d.d_pb - d.d_pa) * out.dist.p_a * out.dist.p_b;
  for (std::size_t j = 0; j < p.dim; ++j) g[j] = d_zb * (p.head_b[j] + ctx.coupled_q[j]);
  for (const auto& [t, d_presence] : d.d_markers) {
    const double s = out.markers.at(t);
    const double d_act = d_presence * s * (1.0 - s);
    const auto& m = p.marker_heads[static_cast<std::size_t>(p.marker_index(t))];
    for (std::size_t j = 0; j < p.dim; ++j) g[j] += d_act * m[j];
  }

  std::vector<double> per_token(p.vocab_size);
  for (TokenId t = 0; t < p.vocab_size; ++t) per_token[t] = dot(p.embedding(t), g);

  GradientMatrix grad(suffix.size(), p.vocab_size);
  for (std::size_t i = 0; i < suffix.size(); ++i) {
    const double w = weights[ctx.suffix_offset + i];
    for (TokenId t = 0; t < p.vocab_size; ++t) grad.at(i, t) = w * per_token[t];
  }
  return grad;
}

}  // namespace judgeattack
