#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "judgeattack/errors.hpp"
#include "judgeattack/vocab.hpp"

using namespace judgeattack;

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("reserved-only vocabulary keeps insertion order") {
  const auto v = build_vocab({}, default_reserved());
  REQUIRE(v.size() == 3);
  CHECK(v.lookup("[[A]]") == 0);
  CHECK(v.lookup("[[B]]") == 1);
  CHECK(v.lookup("<unk>") == 2);
  CHECK(v.attackable_tokens().empty());
}

TEST_CASE("corpus words are deduplicated after the reserved block") {
  const std::vector<std::string> corpus{"good good bad"};
  const std::vector<std::string> reserved{"<unk>"};
  const auto v = build_vocab(corpus, reserved);
  REQUIRE(v.size() == 3);
  CHECK(v.token(0) == "<unk>");
  CHECK(v.token(1) == "good");
  CHECK(v.token(2) == "bad");
  CHECK_FALSE(v.attackable(0));
  CHECK(v.attackable(1));
}

TEST_CASE("vocabulary over 50 dataset answers") {
  // 145 distinct lowercased words, counted with a Python set over
  // str.split() of the same file, plus the three reserved tokens.
  const auto answers = read_lines(JA_TEST_DATA_DIR "/answers50.txt");
  REQUIRE(answers.size() == 50);
  CHECK(build_vocab(answers, default_reserved()).size() == 148);
}

TEST_CASE("build_vocab rejects bad inputs") {
  CHECK_THROWS_AS(build_vocab({}, {}), ConfigError);
  const std::vector<std::string> dup{"<unk>", "<unk>"};
  CHECK_THROWS_AS(build_vocab({}, dup), ConfigError);
}

TEST_CASE("missing <unk> is added to the reserved block") {
  const std::vector<std::string> corpus{"x y"};
  const std::vector<std::string> reserved{"[[A]]", "[[B]]"};
  const auto v = build_vocab(corpus, reserved);
  CHECK(v.reserved_count() == 3);
  CHECK(v.token(v.unknown_id()) == "<unk>");
}

TEST_CASE("encode") {
  const std::vector<std::string> corpus{"good bad"};
  const auto v = build_vocab(corpus, default_reserved());
  CHECK(encode("", v).empty());
  CHECK(encode("[[A]]", v) == std::vector<TokenId>{v.lookup("[[A]]")});
  CHECK(encode("good zzz good", v) == std::vector<TokenId>{v.lookup("good"), v.unknown_id(), v.lookup("good")});
  CHECK(encode("  GOOD\tBad\n", v) == std::vector<TokenId>{v.lookup("good"), v.lookup("bad")});
}

TEST_CASE("decode") {
  const std::vector<std::string> corpus{"good bad"};
  const auto v = build_vocab(corpus, default_reserved());
  CHECK(decode({}, v).empty());
  const std::vector<TokenId> ids{v.lookup("good"), v.lookup("bad")};
  CHECK(decode(ids, v) == "good bad");
  const std::vector<TokenId> bad{static_cast<TokenId>(v.size())};
  CHECK_THROWS_AS(decode(bad, v), DecodeError);
}

TEST_CASE("encode/decode round trip on random in-vocabulary text") {
  const auto answers = read_lines(JA_TEST_DATA_DIR "/answers50.txt");
  const auto v = build_vocab(answers, default_reserved());
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> len(1, 30);
  std::uniform_int_distribution<TokenId> pick(static_cast<TokenId>(v.reserved_count()),
                                              static_cast<TokenId>(v.size() - 1));
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (std::size_t i = 0, n = len(rng); i < n; ++i) {
      if (i) text += ' ';
      text += v.token(pick(rng));
    }
    CHECK(decode(encode(text, v), v) == text);
  }
}

TEST_CASE("lookup and token are inverses") {
  const auto v = build_vocab(read_lines(JA_TEST_DATA_DIR "/answers50.txt"), default_reserved());
  for (TokenId id = 0; id < v.size(); ++id) CHECK(v.lookup(v.token(id)) == id);
}

TEST_CASE("vocabulary file round trip") {
  const std::vector<std::string> corpus{"alpha beta gamma"};
  const auto v = build_vocab(corpus, default_reserved());
  const auto path = std::filesystem::temp_directory_path() / "ja_vocab_roundtrip.txt";
  save_vocab(v, path);
  CHECK(load_vocab(path) == v);
  std::filesystem::remove(path);
}

TEST_CASE("with_attackable never unlocks reserved tokens") {
  const std::vector<std::string> corpus{"alpha beta"};
  const auto v = build_vocab(corpus, default_reserved());
  const auto narrowed = v.with_attackable(std::vector<bool>(v.size(), true));
  for (TokenId id = 0; id < v.reserved_count(); ++id) CHECK_FALSE(narrowed.attackable(id));
}
