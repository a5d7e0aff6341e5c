#include "judgeattack/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include "judgeattack/errors.hpp"

namespace judgeattack {

namespace {

constexpr std::string_view kAttackableHeader = "#attackable_from=";

std::string lowercase(std::string_view word) {
  std::string out(word);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<std::string> default_reserved() {
  return {std::string(kVerdictA), std::string(kVerdictB), std::string(kUnknown)};
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) words.push_back(lowercase(text.substr(start, i - start)));
  }
  return words;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::size_t reserved_count,
                       std::vector<bool> attackable)
    : tokens_(std::move(tokens)), reserved_count_(reserved_count), attackable_(std::move(attackable)) {
  if (reserved_count_ > tokens_.size()) throw ConfigError("reserved count exceeds vocabulary size");
  if (attackable_.size() != tokens_.size()) throw ConfigError("attackable mask size mismatch");
  index_.reserve(tokens_.size());
  for (TokenId id = 0; id < tokens_.size(); ++id) {
    if (tokens_[id].empty()) throw ConfigError("empty token string at id " + std::to_string(id));
    if (!index_.emplace(tokens_[id], id).second) {
      throw ConfigError("duplicate token '" + tokens_[id] + "'");
    }
  }
  for (std::size_t i = 0; i < reserved_count_; ++i) attackable_[i] = false;
  auto unk = index_.find(std::string(kUnknown));
  if (unk == index_.end() || unk->second >= reserved_count_) {
    throw ConfigError("vocabulary lacks the reserved unknown token <unk>");
  }
  unknown_id_ = unk->second;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id >= tokens_.size()) {
    throw DecodeError("token id " + std::to_string(id) + " out of range (size " +
                      std::to_string(tokens_.size()) + ")");
  }
  return tokens_[id];
}

bool Vocabulary::contains(std::string_view word) const {
  return index_.count(std::string(word)) > 0 || index_.count(lowercase(word)) > 0;
}

TokenId Vocabulary::lookup(std::string_view word) const {
  // Reserved strings are matched verbatim so "[[A]]" survives lowercasing.
  if (auto it = index_.find(std::string(word)); it != index_.end() && it->second < reserved_count_) {
    return it->second;
  }
  auto it = index_.find(lowercase(word));
  return it == index_.end() ? unknown_id_ : it->second;
}

TokenId Vocabulary::require(std::string_view word) const {
  TokenId id = lookup(word);
  if (id == unknown_id_ && word != kUnknown) {
    throw ConfigError("word '" + std::string(word) + "' is not in the vocabulary");
  }
  return id;
}

bool Vocabulary::has_verdict_tokens() const {
  return index_.count(std::string(kVerdictA)) > 0 && index_.count(std::string(kVerdictB)) > 0;
}

std::vector<TokenId> Vocabulary::attackable_tokens() const {
  std::vector<TokenId> out;
  for (TokenId id = 0; id < attackable_.size(); ++id) {
    if (attackable_[id]) out.push_back(id);
  }
  return out;
}

Vocabulary Vocabulary::with_attackable(std::vector<bool> mask) const {
  return Vocabulary(tokens_, reserved_count_, std::move(mask));
}

Vocabulary build_vocab(std::span<const std::string> corpus, std::span<const std::string> reserved) {
  if (corpus.empty() && reserved.empty()) {
    throw ConfigError("build_vocab needs a non-empty corpus or reserved list");
  }
  std::vector<std::string> tokens;
  std::unordered_set<std::string> seen;
  for (const auto& r : reserved) {
    if (!seen.insert(r).second) throw ConfigError("duplicate reserved token '" + r + "'");
    tokens.push_back(r);
  }
  if (!seen.count(std::string(kUnknown))) {
    seen.insert(std::string(kUnknown));
    tokens.emplace_back(kUnknown);
  }
  const std::size_t reserved_count = tokens.size();
  for (const auto& text : corpus) {
    for (auto& word : split_words(text)) {
      if (seen.insert(word).second) tokens.push_back(std::move(word));
    }
  }
  std::vector<bool> mask(tokens.size(), true);
  return Vocabulary(std::move(tokens), reserved_count, std::move(mask));
}

std::vector<TokenId> encode(std::string_view text, const Vocabulary& vocab) {
  std::vector<TokenId> ids;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) ids.push_back(vocab.lookup(text.substr(start, i - start)));
  }
  return ids;
}

std::string decode(std::span<const TokenId> ids, const Vocabulary& vocab) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out.push_back(' ');
    out += vocab.token(ids[i]);
  }
  return out;
}

void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path) {
  const auto& mask = vocab.attackable_mask();
  std::size_t from = vocab.reserved_count();
  for (std::size_t id = 0; id < mask.size(); ++id) {
    if (mask[id] != (id >= from)) {
      throw ConfigError("attackable mask is not a threshold mask; cannot persist");
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write vocabulary file " + path.string());
  out << kAttackableHeader << from << '\n';
  for (const auto& t : vocab.tokens()) out << t << '\n';
}

Vocabulary load_vocab(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open vocabulary file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind(kAttackableHeader, 0) != 0) {
    throw ParseError(path.string() + ":1: expected '#attackable_from=<id>' header");
  }
  std::size_t from = 0;
  try {
    std::size_t used = 0;
    from = std::stoul(line.substr(kAttackableHeader.size()), &used);
    if (used != line.size() - kAttackableHeader.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ParseError(path.string() + ":1: bad attackable_from value");
  }
  std::vector<std::string> tokens;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || std::any_of(line.begin(), line.end(), is_space)) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": invalid token line");
    }
    tokens.push_back(line);
  }
  if (from > tokens.size()) throw ParseError(path.string() + ": attackable_from beyond token count");
  std::vector<bool> mask(tokens.size(), false);
  for (std::size_t id = from; id < tokens.size(); ++id) mask[id] = true;
  return Vocabulary(std::move(tokens), from, std::move(mask));
}

}  // namespace judgeattack
