#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "judgeattack/types.hpp"

namespace judgeattack {

// Suffix variant that differs from a base suffix at one position.
struct Substitution {
  std::size_t position = 0;
  TokenId token = 0;
};

/// A pairwise judge f(x, a, b + suffix) that also exposes suffix gradients.
///
/// Implementations must be pure: the same arguments always give the same
/// output, and concurrent calls on one instance are safe.
class JudgeOracle {
 public:
  virtual ~JudgeOracle() = default;

  virtual std::size_t vocab_size() const = 0;

  // Verdict distribution plus presence scores for exactly `lexicon`.
  virtual JudgeOutput evaluate(const PromptTriple& triple, std::span<const TokenId> suffix,
                               std::span<const TokenId> lexicon) const = 0;

  virtual GradientMatrix suffix_gradient(const PromptTriple& triple, std::span<const TokenId> suffix,
                                         const ObjectiveSpec& objective) const = 0;

  // One output per substitution, identical to calling evaluate() on each
  // substituted suffix. Override to share work across the batch.
  virtual std::vector<JudgeOutput> evaluate_substitutions(const PromptTriple& triple,
                                                          std::span<const TokenId> suffix,
                                                          std::span<const Substitution> subs,
                                                          std::span<const TokenId> lexicon) const;
};

struct ToyJudgeParams {
  std::size_t vocab_size = 0;
  std::size_t dim = 0;
  double gamma = 0.9;
  std::uint64_t seed = 0;
  std::vector<double> embeddings;  // vocab_size x dim, row-major
  std::vector<double> head_a;      // dim
  std::vector<double> head_b;      // dim
  std::vector<double> coupling;    // dim x dim, row-major; z += q^T W p
  std::vector<TokenId> lexicon;    // tokens that own a marker head
  std::vector<std::vector<double>> marker_heads;  // aligned with lexicon

  std::span<const double> embedding(TokenId t) const { return {embeddings.data() + t * dim, dim}; }
  // Index into marker_heads, or -1.
  std::ptrdiff_t marker_index(TokenId t) const;

  // Throws ConfigError on shape mismatch, non-finite entries or gamma outside (0, 1].
  void validate() const;

  bool operator==(const ToyJudgeParams&) const = default;
};

// Parameters drawn i.i.d. uniform in [-1, 1] from a seeded mt19937_64, in the
// order E, v_A, v_B, W, then one marker head per lexicon token.
ToyJudgeParams new_toy_judge(std::uint64_t seed, std::size_t dim, const Vocabulary& vocab,
                             std::span<const TokenId> lexicon, double gamma = 0.9);

// Zeroes every head (v_A, v_B, W, marker heads). Verdicts become exact ties
// and the attack loss is flat.
ToyJudgeParams flatten_heads(ToyJudgeParams params);

// Normalized geometric positional pooling: sum_i gamma^i E[t_i] / sum_k gamma^k.
std::vector<double> pool(std::span<const TokenId> tokens, const ToyJudgeParams& params);

// Pooling weight of every position in a sequence of `length` tokens.
std::vector<double> pooling_weights(std::size_t length, double gamma);

/// Linear-pooling judge with bilinear question coupling and sigmoid marker
/// heads. Every quantity has a closed-form gradient.
class ToyJudge final : public JudgeOracle {
 public:
  explicit ToyJudge(std::shared_ptr<const ToyJudgeParams> params);
  explicit ToyJudge(ToyJudgeParams params);

  std::size_t vocab_size() const override { return params_->vocab_size; }
  const ToyJudgeParams& params() const { return *params_; }

  JudgeOutput evaluate(const PromptTriple& triple, std::span<const TokenId> suffix,
                       std::span<const TokenId> lexicon) const override;

  GradientMatrix suffix_gradient(const PromptTriple& triple, std::span<const TokenId> suffix,
                                 const ObjectiveSpec& objective) const override;

  std::vector<JudgeOutput> evaluate_substitutions(const PromptTriple& triple, std::span<const TokenId> suffix,
                                                  std::span<const Substitution> subs,
                                                  std::span<const TokenId> lexicon) const override;

  // Scores an already pooled b + suffix vector. Used by the gradient checker
  // to perturb the one-hot relaxation directly.
  JudgeOutput evaluate_pooled(const PromptTriple& triple, std::span<const double> pooled_b,
                              std::span<const TokenId> lexicon) const;

 private:
  struct Context;
  Context prepare(const PromptTriple& triple) const;
  JudgeOutput score(const Context& ctx, std::span<const double> pooled_b, std::span<const TokenId> lexicon) const;
  void check_tokens(std::span<const TokenId> tokens, const char* what) const;

  std::shared_ptr<const ToyJudgeParams> params_;
};

// Little-endian binary layout: u64 |V|, u64 d, f64 gamma, u64 seed,
// u64 lexicon count, u64 lexicon ids..., then f64 E, v_A, v_B, W, m_t...
void save_params(const ToyJudgeParams& params, const std::filesystem::path& path);
ToyJudgeParams load_params(const std::filesystem::path& path);

}  // namespace judgeattack
