#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "judgeattack/types.hpp"

namespace judgeattack {

struct JudgmentRecord {
  std::string question_id;
  std::string question;
  std::string answer_a;
  std::string answer_b;
  Verdict winner = Verdict::A;

  bool operator==(const JudgmentRecord&) const = default;
};

struct DatasetLoad {
  std::vector<JudgmentRecord> records;
  std::size_t ties_skipped = 0;
  // Records with an empty question or answer.
  std::size_t invalid_skipped = 0;
};

// Line-delimited JSON. Two schemas are detected per line by field presence:
//   native:     question_id, conversation_a, conversation_b, winner
//               ("model_a" / "model_b" / "tie..."); the first user turn is
//               the question, the first assistant turn of each side the answer
//   simplified: question_id, question, answer_a, answer_b, winner
//               ("A" / "B" / "model_a" / "model_b" / "tie...")
// Throws ParseError naming the line for malformed JSON and SchemaError for
// missing fields.
DatasetLoad load_dataset(const std::filesystem::path& path);
DatasetLoad parse_dataset(std::string_view contents, std::string_view source_name = "<memory>");

// Triple in the record's original order.
PromptTriple encode_record(const JudgmentRecord& record, const Vocabulary& vocab);

// Question and answer texts, in record order, for vocabulary construction.
std::vector<std::string> corpus_of(const std::vector<JudgmentRecord>& records);

}  // namespace judgeattack
