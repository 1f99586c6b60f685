#include "newscomm/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "newscomm/error.hpp"

namespace newscomm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Lowercases and collapses internal whitespace to single spaces.
std::string canonical_term(std::string_view raw) {
  std::string out;
  bool space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::size_t word_count(std::string_view term) {
  return static_cast<std::size_t>(std::count(term.begin(), term.end(), ' ')) + 1;
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    ++line_no;
    fn(line_no, line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

}  // namespace

Lexicon::Lexicon(std::string name, std::map<std::string, double, std::less<>> entries)
    : name_(std::move(name)), entries_(std::move(entries)) {
  for (const auto& [term, weight] : entries_) {
    max_phrase_length_ = std::max(max_phrase_length_, word_count(term));
  }
}

std::optional<double> Lexicon::weight(std::string_view term) const {
  if (auto it = entries_.find(term); it != entries_.end()) return it->second;
  return std::nullopt;
}

std::size_t Lexicon::match_at(std::span<const std::string_view> words, std::size_t start) const {
  std::string phrase;
  std::size_t best = 0;
  const std::size_t limit = std::min(max_phrase_length_, words.size() - start);
  for (std::size_t len = 1; len <= limit; ++len) {
    if (len > 1) phrase.push_back(' ');
    phrase.append(words[start + len - 1]);
    if (contains(phrase)) best = len;
  }
  return best;
}

std::size_t Lexicon::count_hits(std::span<const std::string_view> words) const {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (match_at(words, i) > 0) ++hits;
  }
  return hits;
}

Lexicon parse_lexicon(std::string_view text, std::string name, std::string_view origin) {
  std::map<std::string, double, std::less<>> entries;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    line = trim(line);
    if (line.empty() || line.front() == '#') return;
    const auto tab = line.find('\t');
    std::string term = canonical_term(line.substr(0, tab));
    double weight = 1.0;
    if (tab != std::string_view::npos) {
      const std::string_view raw = trim(line.substr(tab + 1));
      const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), weight);
      if (ec != std::errc{} || ptr != raw.data() + raw.size() || !std::isfinite(weight)) {
        throw DataError(std::string(origin) + ": line " + std::to_string(line_no) +
                        ": unparseable weight '" + std::string(raw) + "'");
      }
    }
    if (!term.empty()) entries[std::move(term)] = weight;
  });
  if (entries.empty()) throw DataError(std::string(origin) + ": lexicon '" + name + "' is empty");
  return Lexicon(std::move(name), std::move(entries));
}

Lexicon load_lexicon(const std::filesystem::path& path, std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open lexicon file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_lexicon(buffer.str(), std::move(name), path.string());
}

std::map<std::string, std::string, std::less<>> parse_tag_table(std::string_view text,
                                                                std::string_view origin) {
  std::map<std::string, std::string, std::less<>> table;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    line = trim(line);
    if (line.empty() || line.front() == '#') return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(std::string(origin) + ": line " + std::to_string(line_no) +
                      ": expected term<TAB>tag");
    }
    table[canonical_term(line.substr(0, tab))] = std::string(trim(line.substr(tab + 1)));
  });
  return table;
}

}  // namespace newscomm
