#include "doctest.h"
#include "judgeattack/dataset.hpp"
#include "judgeattack/errors.hpp"

using namespace judgeattack;

TEST_CASE("empty input gives no records") {
  const auto load = parse_dataset("");
  CHECK(load.records.empty());
  CHECK(load.ties_skipped == 0);
}

TEST_CASE("native schema sample file") {
  const auto load = load_dataset(JA_TEST_DATA_DIR "/mtbench_sample.jsonl");
  REQUIRE(load.records.size() == 2);
  CHECK(load.ties_skipped == 1);
  const auto& r = load.records[0];
  CHECK(r.question_id == "81");
  CHECK(r.winner == Verdict::A);
  CHECK(r.question == "Compose an engaging travel blog post about a recent trip to Hawaii.");
  CHECK(r.answer_a == "I recently had the pleasure of visiting Hawaii.");
  CHECK(r.answer_b == "Aloha! Hawaii was wonderful.");
  CHECK(load.records[1].winner == Verdict::B);
}

TEST_CASE("simplified schema and tie variants") {
  const auto load = parse_dataset(
      R"jl({"question_id": "q1", "question": "why", "answer_a": "because", "answer_b": "no", "winner": "B"}
{"question_id": "q2", "question": "how", "answer_a": "so", "answer_b": "thus", "winner": "tie (bothbad)"}

{"question_id": "q3", "question": "who", "answer_a": "", "answer_b": "me", "winner": "A"}
)jl");
  REQUIRE(load.records.size() == 1);
  CHECK(load.records[0].winner == Verdict::B);
  CHECK(load.ties_skipped == 1);
  CHECK(load.invalid_skipped == 1);
}

TEST_CASE("malformed line names its line number") {
  const std::string text = "{\"question_id\": 1, \"question\": \"a\", \"answer_a\": \"b\", \"answer_b\": \"c\", "
                           "\"winner\": \"A\"}\n{not json\n";
  try {
    parse_dataset(text, "data.jsonl");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("data.jsonl:2") != std::string::npos);
  }
}

TEST_CASE("missing field is a schema error") {
  CHECK_THROWS_AS(parse_dataset(R"({"question_id": 1, "question": "a", "answer_a": "b", "answer_b": "c"})"),
                  SchemaError);
  CHECK_THROWS_AS(parse_dataset(R"({"question_id": 1, "winner": "model_a", "conversation_a": []})"), SchemaError);
  CHECK_THROWS_AS(load_dataset("/nonexistent/ja.jsonl"), ConfigError);
}
