#include "judgeattack/dataset.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "judgeattack/errors.hpp"

namespace judgeattack {

namespace {

using nlohmann::json;

enum class Winner { A, B, Tie };

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

const json& field(const json& obj, const char* key, std::string_view source, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where(source, line) + ": missing field '" + key + "'");
  return *it;
}

std::string string_field(const json& obj, const char* key, std::string_view source, std::size_t line) {
  const json& v = field(obj, key, source, line);
  if (!v.is_string()) throw SchemaError(where(source, line) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string id_field(const json& obj, std::string_view source, std::size_t line) {
  const json& v = field(obj, "question_id", source, line);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw SchemaError(where(source, line) + ": question_id must be a string or integer");
}

Winner parse_winner(const std::string& w, std::string_view source, std::size_t line) {
  if (w == "model_a" || w == "A" || w == "a") return Winner::A;
  if (w == "model_b" || w == "B" || w == "b") return Winner::B;
  if (w.rfind("tie", 0) == 0) return Winner::Tie;
  throw SchemaError(where(source, line) + ": unrecognised winner '" + w + "'");
}

std::string first_turn(const json& conv, const char* role, const char* key, std::string_view source,
                       std::size_t line) {
  if (!conv.is_array()) throw SchemaError(where(source, line) + ": field '" + key + "' must be an array");
  for (const auto& turn : conv) {
    if (!turn.is_object()) continue;
    auto r = turn.find("role");
    if (r != turn.end() && r->is_string() && r->get<std::string>() == role) {
      return string_field(turn, "content", source, line);
    }
  }
  throw SchemaError(where(source, line) + ": " + key + " has no " + role + " turn");
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string::npos;
}

}  // namespace

DatasetLoad parse_dataset(std::string_view contents, std::string_view source_name) {
  DatasetLoad out;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where(source_name, line_no) + ": malformed record: " + e.what());
    }
    if (!obj.is_object()) throw ParseError(where(source_name, line_no) + ": record is not an object");

    JudgmentRecord rec;
    rec.question_id = id_field(obj, source_name, line_no);
    if (obj.contains("conversation_a") || obj.contains("conversation_b")) {
      const json& conv_a = field(obj, "conversation_a", source_name, line_no);
      const json& conv_b = field(obj, "conversation_b", source_name, line_no);
      rec.question = first_turn(conv_a, "user", "conversation_a", source_name, line_no);
      rec.answer_a = first_turn(conv_a, "assistant", "conversation_a", source_name, line_no);
      rec.answer_b = first_turn(conv_b, "assistant", "conversation_b", source_name, line_no);
    } else {
      rec.question = string_field(obj, "question", source_name, line_no);
      rec.answer_a = string_field(obj, "answer_a", source_name, line_no);
      rec.answer_b = string_field(obj, "answer_b", source_name, line_no);
    }
    const Winner w = parse_winner(string_field(obj, "winner", source_name, line_no), source_name, line_no);
    if (w == Winner::Tie) {
      ++out.ties_skipped;
      continue;
    }
    rec.winner = w == Winner::A ? Verdict::A : Verdict::B;
    if (blank(rec.question) || blank(rec.answer_a) || blank(rec.answer_b)) {
      ++out.invalid_skipped;
      continue;
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

DatasetLoad load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), path.string());
}

PromptTriple encode_record(const JudgmentRecord& record, const Vocabulary& vocab) {
  return {encode(record.question, vocab), encode(record.answer_a, vocab), encode(record.answer_b, vocab),
          record.winner};
}

std::vector<std::string> corpus_of(const std::vector<JudgmentRecord>& records) {
  std::vector<std::string> corpus;
  corpus.reserve(records.size() * 3);
  for (const auto& r : records) {
    corpus.push_back(r.question);
    corpus.push_back(r.answer_a);
    corpus.push_back(r.answer_b);
  }
  return corpus;
}

}  // namespace judgeattack
