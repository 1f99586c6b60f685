#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace newscomm {

/// Named word list with per-term weights (1.0 when unweighted). Terms are
/// lowercase; multi-word terms ("manage to") are single-space joined.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::string name, std::map<std::string, double, std::less<>> entries);

  const std::string& name() const noexcept { return name_; }
  const std::map<std::string, double, std::less<>>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t max_phrase_length() const noexcept { return max_phrase_length_; }

  bool contains(std::string_view term) const { return entries_.find(term) != entries_.end(); }
  std::optional<double> weight(std::string_view term) const;

  /// Length in words of the longest entry matching words[start...], or 0.
  std::size_t match_at(std::span<const std::string_view> words, std::size_t start) const;

  /// Number of positions at which some entry matches.
  std::size_t count_hits(std::span<const std::string_view> words) const;

 private:
  std::string name_;
  std::map<std::string, double, std::less<>> entries_;
  std::size_t max_phrase_length_ = 0;
};

/// Parses "term" or "term<TAB>weight" lines. Blank lines and lines
/// starting with '#' are skipped; the last duplicate wins.
Lexicon parse_lexicon(std::string_view text, std::string name, std::string_view origin = "<memory>");
Lexicon load_lexicon(const std::filesystem::path& path, std::string name);

/// Parses "term<TAB>tag" lines into a lowercase term -> tag map.
std::map<std::string, std::string, std::less<>> parse_tag_table(std::string_view text,
                                                                std::string_view origin);

}  // namespace newscomm
