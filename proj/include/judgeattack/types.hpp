#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <vector>

#include "judgeattack/vocab.hpp"

namespace judgeattack {

enum class Verdict { A, B };

inline char verdict_char(Verdict v) { return v == Verdict::A ? 'A' : 'B'; }

// Question x and candidate answers a, b. Slot B is the one suffixes attach to.
struct PromptTriple {
  std::vector<TokenId> question;
  std::vector<TokenId> answer_a;
  std::vector<TokenId> answer_b;
  Verdict human_winner = Verdict::A;

  bool valid() const { return !answer_a.empty() && !answer_b.empty(); }
};

struct VerdictDistribution {
  double p_a = 0.5;
  double p_b = 0.5;

  // Ties resolve to A: a tie never counts as a successful attack.
  Verdict decide() const { return p_b > p_a ? Verdict::B : Verdict::A; }
  double margin_b() const { return p_b - p_a; }
};

// Presence probability per lexicon token.
using MarkerScores = std::map<TokenId, double>;

struct JudgeOutput {
  VerdictDistribution dist;
  MarkerScores markers;
};

/// Loss gradient with respect to the one-hot token selection of each suffix
/// position. Row-major, rows() == suffix length, cols() == vocabulary size.
class GradientMatrix {
 public:
  GradientMatrix() = default;
  GradientMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t i, std::size_t t) { return data_[i * cols_ + t]; }
  double at(std::size_t i, std::size_t t) const { return data_[i * cols_ + t]; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct LexiconSets {
  std::set<TokenId> positive;
  std::set<TokenId> negative;

  bool empty() const { return positive.empty() && negative.empty(); }
  // Union in ascending id order.
  std::vector<TokenId> all() const;
};

enum class ObjectiveKind { CUA, JMA };

// Per-term multipliers on the JMA objective; all 1.0 reproduces the plain sum.
struct JmaWeights {
  double positive = 1.0;
  double negative = 1.0;
  double verdict = 1.0;
};

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::CUA;
  LexiconSets lexicons;
  JmaWeights weights;

  static ObjectiveSpec cua() { return {}; }
  static ObjectiveSpec jma(LexiconSets lex, JmaWeights w = {}) {
    return {ObjectiveKind::JMA, std::move(lex), w};
  }

  // Marker tokens the judge must score for this objective.
  std::vector<TokenId> marker_tokens() const;
  // Throws ConfigError when the lexicons overlap.
  void validate() const;
};

const char* objective_name(ObjectiveKind kind);

}  // namespace judgeattack
