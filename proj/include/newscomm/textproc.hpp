#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newscomm/resources.hpp"
#include "newscomm/tags.hpp"

namespace newscomm {

struct Token {
  std::string text;
  std::string lower;
  bool is_alpha = false;
  bool is_all_caps = false;  // at least two letters, none lowercase
  bool is_punct = false;
  std::size_t begin = 0;  // byte offsets into the source text
  std::size_t end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Byte range [begin, end) of one sentence.
struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

struct EntityMention {
  std::string surface;  // title-cased, single-space joined
  std::size_t count = 0;
  friend bool operator==(const EntityMention&, const EntityMention&) = default;
};

/// Splits on whitespace, then peels leading and trailing punctuation into
/// one-character tokens. Internal apostrophes, hyphens and periods stay in
/// the word.
std::vector<Token> tokenize(std::string_view text);

/// Splits after [.!?] (plus closing quotes) when followed by whitespace and
/// an uppercase letter, or by end of text. Common title abbreviations
/// ("Mr.", "Dr.") do not end a sentence.
std::vector<SentenceSpan> split_sentences(std::string_view text);

/// Maximal vowel groups (aeiouy), minus a silent terminal 'e'; at least 1.
int count_syllables(std::string_view word);

/// True for each word token that opens a sentence. Punctuation tokens are
/// never initial.
std::vector<bool> sentence_initial_flags(std::span<const Token> tokens);

/// One tag per non-punctuation token, in token order.
std::vector<PosTag> pos_tag(std::span<const Token> tokens, const Resources& resources);

/// Entities sorted by count descending, then surface ascending.
std::vector<EntityMention> extract_entities(std::string_view text, const Resources& resources);
std::optional<EntityMention> most_frequent_entity(std::string_view text, const Resources& resources);

/// Python-style title casing of an ASCII surface ("middle EAST" -> "Middle East").
std::string title_case(std::string_view surface);

/// Tokens plus the per-token annotations the feature groups share.
/// Move-only: `words` views into `tokens`.
struct AnalyzedText {
  AnalyzedText() = default;
  AnalyzedText(const AnalyzedText&) = delete;
  AnalyzedText& operator=(const AnalyzedText&) = delete;
  AnalyzedText(AnalyzedText&&) noexcept = default;
  AnalyzedText& operator=(AnalyzedText&&) noexcept = default;

  std::vector<Token> tokens;
  std::vector<std::optional<PosTag>> tags;  // nullopt for punctuation
  std::vector<std::string_view> words;      // lowercase non-punctuation tokens
  std::size_t sentence_count = 0;
};

AnalyzedText analyze(std::string_view text, const Resources& resources);

}  // namespace newscomm
