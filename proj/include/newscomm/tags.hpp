#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace newscomm {

/// Coarse universal-style part-of-speech tagset.
enum class PosTag : std::uint8_t { Noun, Verb, Adj, Adv, Pron, Det, Adp, Conj, Num, Prt, Intj, X };

inline constexpr std::size_t kPosTagCount = 12;

inline constexpr std::array<std::string_view, kPosTagCount> kPosTagNames = {
    "NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "CONJ", "NUM", "PRT", "INTJ", "X"};

constexpr std::string_view to_string(PosTag tag) {
  return kPosTagNames[static_cast<std::size_t>(tag)];
}

constexpr std::optional<PosTag> parse_pos_tag(std::string_view name) {
  for (std::size_t i = 0; i < kPosTagCount; ++i) {
    if (kPosTagNames[i] == name) return static_cast<PosTag>(i);
  }
  return std::nullopt;
}

}  // namespace newscomm
