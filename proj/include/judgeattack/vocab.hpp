#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace judgeattack {

using TokenId = std::uint32_t;

inline constexpr std::string_view kVerdictA = "[[A]]";
inline constexpr std::string_view kVerdictB = "[[B]]";
inline constexpr std::string_view kUnknown = "<unk>";

// Reserved strings used when nothing else is requested.
std::vector<std::string> default_reserved();

// Splits on ASCII whitespace and lowercases each piece.
std::vector<std::string> split_words(std::string_view text);

/// Immutable token table shared by the judge, the optimizer and the controls.
///
/// Reserved tokens come first and are never attackable. Strings that match
/// a reserved token exactly (e.g. "[[A]]") are looked up verbatim; all other
/// words are lowercased before lookup.
class Vocabulary {
 public:
  Vocabulary(std::vector<std::string> tokens, std::size_t reserved_count,
             std::vector<bool> attackable);

  std::size_t size() const { return tokens_.size(); }
  std::size_t reserved_count() const { return reserved_count_; }

  const std::string& token(TokenId id) const;
  bool contains(std::string_view word) const;
  // Falls back to the unknown id for out-of-vocabulary words.
  TokenId lookup(std::string_view word) const;
  // Throws ConfigError when the word is absent.
  TokenId require(std::string_view word) const;

  TokenId unknown_id() const { return unknown_id_; }
  bool has_verdict_tokens() const;

  bool attackable(TokenId id) const { return id < attackable_.size() && attackable_[id]; }
  const std::vector<bool>& attackable_mask() const { return attackable_; }
  std::vector<TokenId> attackable_tokens() const;

  // Narrows the attack alphabet; reserved tokens stay excluded regardless.
  Vocabulary with_attackable(std::vector<bool> mask) const;

  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_ && reserved_count_ == other.reserved_count_ &&
           attackable_ == other.attackable_;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t reserved_count_ = 0;
  std::vector<bool> attackable_;
  std::unordered_map<std::string, TokenId> index_;
  TokenId unknown_id_ = 0;
};

// Reserved strings first, then corpus words in first-occurrence order.
// "<unk>" is appended to the reserved block when the caller omits it.
Vocabulary build_vocab(std::span<const std::string> corpus,
                       std::span<const std::string> reserved = {});

std::vector<TokenId> encode(std::string_view text, const Vocabulary& vocab);
std::string decode(std::span<const TokenId> ids, const Vocabulary& vocab);

// Line format: "#attackable_from=<id>" header, then one token per line.
// Only threshold masks are representable; a narrower mask throws ConfigError.
void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocab(const std::filesystem::path& path);

}  // namespace judgeattack
