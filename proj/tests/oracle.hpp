#pragma once

// Straight-line reimplementations of the toy judge and the attack losses.
// Nothing here calls into the library's scoring code, so agreement between
// the two is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "judgeattack/judge.hpp"

namespace oracle {

using judgeattack::ObjectiveKind;
using judgeattack::ObjectiveSpec;
using judgeattack::PromptTriple;
using judgeattack::TokenId;
using judgeattack::ToyJudgeParams;

inline std::vector<double> pool(const ToyJudgeParams& p, const std::vector<TokenId>& tokens) {
  double total = 0.0;
  for (std::size_t k = 0; k < tokens.size(); ++k) total += std::pow(p.gamma, static_cast<double>(k));
  std::vector<double> out(p.dim, 0.0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const double w = std::pow(p.gamma, static_cast<double>(i)) / total;
    for (std::size_t j = 0; j < p.dim; ++j) out[j] += w * p.embeddings[tokens[i] * p.dim + j];
  }
  return out;
}

struct Scores {
  double p_a = 0.0;
  double p_b = 0.0;
  std::map<TokenId, double> presence;
};

inline double logit(const ToyJudgeParams& p, const std::vector<double>& head, const std::vector<double>& q,
                    const std::vector<double>& x) {
  double z = 0.0;
  for (std::size_t j = 0; j < p.dim; ++j) z += head[j] * x[j];
  for (std::size_t r = 0; r < p.dim; ++r)
    for (std::size_t c = 0; c < p.dim; ++c) z += q[r] * p.coupling[r * p.dim + c] * x[c];
  return z;
}

inline Scores score(const ToyJudgeParams& p, const std::vector<double>& q, const std::vector<double>& pa,
                    const std::vector<double>& pb, const std::vector<TokenId>& lexicon) {
  Scores s;
  const double z_a = logit(p, p.head_a, q, pa);
  const double z_b = logit(p, p.head_b, q, pb);
  s.p_b = 1.0 / (1.0 + std::exp(z_a - z_b));
  s.p_a = 1.0 - s.p_b;
  for (TokenId t : lexicon) {
    const auto at = std::find(p.lexicon.begin(), p.lexicon.end(), t) - p.lexicon.begin();
    double dot = 0.0;
    for (std::size_t j = 0; j < p.dim; ++j) dot += p.marker_heads[at][j] * pb[j];
    s.presence[t] = 1.0 / (1.0 + std::exp(-dot));
  }
  return s;
}

inline std::vector<double> question_vector(const ToyJudgeParams& p, const PromptTriple& tr) {
  return tr.question.empty() ? std::vector<double>(p.dim, 0.0) : pool(p, tr.question);
}

inline std::vector<TokenId> with_suffix(const PromptTriple& tr, const std::vector<TokenId>& suffix) {
  std::vector<TokenId> b = tr.answer_b;
  b.insert(b.end(), suffix.begin(), suffix.end());
  return b;
}

inline Scores evaluate(const ToyJudgeParams& p, const PromptTriple& tr, const std::vector<TokenId>& suffix,
                       const std::vector<TokenId>& lexicon) {
  return score(p, question_vector(p, tr), pool(p, tr.answer_a), pool(p, with_suffix(tr, suffix)), lexicon);
}

inline double loss(const Scores& s, const ObjectiveSpec& spec) {
  if (spec.kind == ObjectiveKind::CUA) return s.p_a - s.p_b;
  double pos = 0.0, neg = 0.0;
  for (TokenId t : spec.lexicons.positive) pos += s.presence.at(t);
  for (TokenId t : spec.lexicons.negative) neg += s.presence.at(t);
  const auto& w = spec.weights;
  return -(w.positive * pos - w.negative * neg + w.verdict * s.p_b);
}

inline std::vector<TokenId> lexicon_of(const ObjectiveSpec& spec) {
  std::vector<TokenId> out(spec.lexicons.positive.begin(), spec.lexicons.positive.end());
  out.insert(out.end(), spec.lexicons.negative.begin(), spec.lexicons.negative.end());
  return out;
}

// Central difference of the loss along one-hot entry (i, t): the pooled b
// vector moves by h * w_{n+i} * E[t].
inline double finite_difference(const ToyJudgeParams& p, const PromptTriple& tr, const std::vector<TokenId>& suffix,
                                const ObjectiveSpec& spec, std::size_t i, TokenId t, double h = 1e-5) {
  const auto full = with_suffix(tr, suffix);
  double total = 0.0;
  for (std::size_t k = 0; k < full.size(); ++k) total += std::pow(p.gamma, static_cast<double>(k));
  const double w = std::pow(p.gamma, static_cast<double>(tr.answer_b.size() + i)) / total;
  const auto q = question_vector(p, tr);
  const auto pa = pool(p, tr.answer_a);
  auto plus = pool(p, full);
  auto minus = plus;
  for (std::size_t j = 0; j < p.dim; ++j) {
    plus[j] += h * w * p.embeddings[t * p.dim + j];
    minus[j] -= h * w * p.embeddings[t * p.dim + j];
  }
  const auto lex = lexicon_of(spec);
  return (loss(score(p, q, pa, plus, lex), spec) - loss(score(p, q, pa, minus, lex), spec)) / (2.0 * h);
}

// Per row: sort every attackable (value, id) pair ascending and keep k.
inline std::vector<std::vector<TokenId>> top_k(const judgeattack::GradientMatrix& g, std::size_t k,
                                               const judgeattack::Vocabulary& vocab) {
  std::vector<std::vector<TokenId>> out;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    std::vector<std::pair<double, TokenId>> row;
    for (TokenId t = 0; t < g.cols(); ++t)
      if (vocab.attackable(t)) row.emplace_back(g.at(i, t), t);
    std::sort(row.begin(), row.end());
    std::vector<TokenId> ids;
    for (std::size_t j = 0; j < k; ++j) ids.push_back(row[j].second);
    out.push_back(ids);
  }
  return out;
}

}  // namespace oracle
