#pragma once

#include <memory>
#include <string>
#include <vector>

#include "judgeattack/judge.hpp"
#include "judgeattack/objectives.hpp"
#include "judgeattack/vocab.hpp"

namespace fixtures {

using namespace judgeattack;

inline const std::vector<std::string>& corpus() {
  static const std::vector<std::string> texts{
      "what is the capital of france",
      "paris is the capital of france and a large city on the seine",
      "the capital is lyon i think but maybe not",
      "coherent accurate incorrect irrelevant",
  };
  return texts;
}

inline Vocabulary vocab() { return build_vocab(corpus(), default_reserved()); }

inline PromptTriple triple(const Vocabulary& v) {
  // Ordered so the seed-7 judge prefers slot A on the clean pair.
  return {encode(corpus()[0], v), encode(corpus()[2], v), encode(corpus()[1], v), Verdict::A};
}

inline LexiconSets lexicons(const Vocabulary& v) {
  return encode_lexicons(default_positive_markers(), default_negative_markers(), v);
}

// The seed-7, d = 4 judge shared by the judge, objective and optimizer tests.
inline ToyJudgeParams params(std::uint64_t seed = 7, std::size_t dim = 4, double gamma = 0.9) {
  const Vocabulary v = vocab();
  const auto lex = lexicons(v).all();
  return new_toy_judge(seed, dim, v, lex, gamma);
}

// Vocabulary of exactly n tokens: "<unk>" reserved, then w1..w(n-1).
inline Vocabulary tiny_vocab(std::size_t n) {
  std::vector<std::string> tokens{"<unk>"};
  for (std::size_t i = 1; i < n; ++i) tokens.push_back("w" + std::to_string(i));
  std::vector<bool> mask(n, true);
  return Vocabulary(tokens, 1, mask);
}

}  // namespace fixtures
