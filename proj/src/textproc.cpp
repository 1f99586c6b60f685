#include "newscomm/textproc.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

namespace newscomm {

namespace {

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(unsigned char c) { return c >= 'a' && c <= 'z'; }
bool is_ascii_alpha(unsigned char c) { return is_upper(c) || is_lower(c); }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Multi-byte UTF-8 punctuation peeled like ASCII punctuation.
constexpr std::array<std::string_view, 10> kUtf8Punct = {
    "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x98", "\xE2\x80\x99", "\xE2\x80\x94",
    "\xE2\x80\x93", "\xE2\x80\xA6", "\xC2\xAB",     "\xC2\xBB",     "\xC2\xA1"};

// Length of the punctuation unit starting at text[i], or 0.
std::size_t punct_at(std::string_view text, std::size_t i) {
  const auto c = static_cast<unsigned char>(text[i]);
  if (c < 0x80) return std::ispunct(c) ? 1 : 0;
  for (std::string_view p : kUtf8Punct) {
    if (text.substr(i, p.size()) == p) return p.size();
  }
  return 0;
}

// Length of the punctuation unit ending at text[end - 1], or 0.
std::size_t punct_before(std::string_view text, std::size_t begin, std::size_t end) {
  const auto c = static_cast<unsigned char>(text[end - 1]);
  if (c < 0x80) return std::ispunct(c) ? 1 : 0;
  for (std::string_view p : kUtf8Punct) {
    if (end - begin >= p.size() && text.substr(end - p.size(), p.size()) == p) return p.size();
  }
  return 0;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

Token make_word(std::string_view text, std::size_t begin, std::size_t end) {
  Token t;
  t.text = std::string(text.substr(begin, end - begin));
  t.lower = ascii_lower(t.text);
  t.begin = begin;
  t.end = end;
  const auto first = static_cast<unsigned char>(t.text.front());
  bool alpha = is_ascii_alpha(first) || first >= 0x80;
  std::size_t letters = 0;
  bool any_lower = false;
  for (unsigned char c : t.text) {
    if (is_ascii_alpha(c)) {
      ++letters;
      any_lower = any_lower || is_lower(c);
    } else if (!(c >= 0x80 || c == '\'' || c == '-' || c == '.')) {
      alpha = false;
    }
  }
  t.is_alpha = alpha;
  t.is_all_caps = alpha && letters >= 2 && !any_lower;
  return t;
}

Token make_punct(std::string_view text, std::size_t begin, std::size_t len) {
  Token t;
  t.text = std::string(text.substr(begin, len));
  t.lower = t.text;
  t.is_punct = true;
  t.begin = begin;
  t.end = begin + len;
  return t;
}

bool is_closing(std::string_view tok) {
  return tok == "\"" || tok == "'" || tok == ")" || tok == "]" || tok == "\xE2\x80\x9D" ||
         tok == "\xE2\x80\x99";
}

bool is_terminal(std::string_view tok) { return tok == "." || tok == "!" || tok == "?"; }

const std::set<std::string, std::less<>>& abbreviations() {
  static const std::set<std::string, std::less<>> kAbbrev = {
      "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "gen", "sen", "rep", "gov",
      "lt", "col", "capt", "sgt", "rev", "hon", "pres", "vs", "etc", "inc", "corp", "ltd", "co"};
  return kAbbrev;
}

bool is_numeric(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '$' || s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  for (; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (is_digit(c)) {
      ++digits;
    } else if (c == ',' || c == '.' || c == ':' || c == '/') {
      continue;
    } else {
      break;
    }
  }
  if (digits == 0) return false;
  const std::string_view rest = s.substr(i);
  return rest.empty() || rest == "%" || rest == "st" || rest == "nd" || rest == "rd" ||
         rest == "th" || rest == "s" || rest == "k" || rest == "m" || rest == "bn";
}

struct SuffixRule {
  std::string_view suffix;
  PosTag tag;
};

constexpr SuffixRule kSuffixRules[] = {
    {"ly", PosTag::Adv},     {"ing", PosTag::Verb},   {"ed", PosTag::Verb},
    {"ize", PosTag::Verb},   {"ous", PosTag::Adj},    {"ful", PosTag::Adj},
    {"able", PosTag::Adj},   {"ive", PosTag::Adj},    {"tion", PosTag::Noun},
    {"ness", PosTag::Noun},  {"ment", PosTag::Noun},  {"ity", PosTag::Noun}};

bool capitalized(const Token& t) {
  return t.is_alpha && is_upper(static_cast<unsigned char>(t.text.front()));
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= n) break;
    std::size_t begin = i;
    while (i < n && !is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t end = i;

    while (begin < end) {
      const std::size_t len = punct_at(text, begin);
      if (len == 0) break;
      tokens.push_back(make_punct(text, begin, len));
      begin += len;
    }
    std::vector<Token> trailing;
    while (end > begin) {
      const std::size_t len = punct_before(text, begin, end);
      if (len == 0) break;
      end -= len;
      trailing.push_back(make_punct(text, end, len));
    }
    if (end > begin) tokens.push_back(make_word(text, begin, end));
    tokens.insert(tokens.end(), trailing.rbegin(), trailing.rend());
  }
  return tokens;
}

std::vector<SentenceSpan> split_sentences(std::string_view text) {
  std::vector<SentenceSpan> out;
  const std::size_t n = text.size();
  auto push = [&](std::size_t b, std::size_t e) {
    while (b < e && is_space(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && is_space(static_cast<unsigned char>(text[e - 1]))) --e;
    if (e > b) out.push_back({b, e});
  };
  auto abbreviation_before = [&](std::size_t dot, std::size_t start) {
    std::size_t b = dot;
    while (b > start && is_ascii_alpha(static_cast<unsigned char>(text[b - 1]))) --b;
    return b < dot && abbreviations().contains(ascii_lower(text.substr(b, dot - b)));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < n && (text[j] == '.' || text[j] == '!' || text[j] == '?')) ++j;
    while (j < n) {
      if (text[j] == '"' || text[j] == '\'' || text[j] == ')' || text[j] == ']') {
        ++j;
      } else if (text.substr(j, 3) == "\xE2\x80\x9D" || text.substr(j, 3) == "\xE2\x80\x99") {
        j += 3;
      } else {
        break;
      }
    }
    std::size_t k = j;
    while (k < n && is_space(static_cast<unsigned char>(text[k]))) ++k;
    const bool at_end = k == n;
    bool next_upper = false;
    if (!at_end && k > j) {
      std::size_t m = k;
      if (text[m] == '"' || text[m] == '\'' || text[m] == '(') ++m;
      else if (text.substr(m, 3) == "\xE2\x80\x9C" || text.substr(m, 3) == "\xE2\x80\x98") m += 3;
      next_upper = m < n && is_upper(static_cast<unsigned char>(text[m]));
    }
    const bool abbrev = c == '.' && j == i + 1 && abbreviation_before(i, start);
    if (at_end || (next_upper && !abbrev)) {
      push(start, j);
      start = k;
    }
    i = j;
  }
  push(start, n);
  return out;
}

int count_syllables(std::string_view word) {
  auto vowel = [](char c) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  int groups = 0;
  bool in_group = false;
  std::size_t last_group_start = 0;
  std::size_t last_letter = std::string_view::npos;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (!is_ascii_alpha(static_cast<unsigned char>(word[i]))) {
      in_group = false;
      continue;
    }
    last_letter = i;
    if (vowel(word[i])) {
      if (!in_group) {
        ++groups;
        last_group_start = i;
      }
      in_group = true;
    } else {
      in_group = false;
    }
  }
  if (groups > 1 && last_letter != std::string_view::npos && last_group_start == last_letter &&
      std::tolower(static_cast<unsigned char>(word[last_letter])) == 'e') {
    --groups;
  }
  return std::max(groups, 1);
}

std::vector<bool> sentence_initial_flags(std::span<const Token> tokens) {
  std::vector<bool> initial(tokens.size(), false);
  bool expect_initial = true;
  const Token* prev_word = nullptr;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.is_punct) {
      if (is_terminal(t.text)) {
        const bool abbrev = t.text == "." && prev_word != nullptr &&
                            prev_word->end == t.begin && abbreviations().contains(prev_word->lower);
        if (!abbrev) expect_initial = true;
      } else if (!is_closing(t.text) && t.text != "\"" && t.text != "(" && t.text != "\xE2\x80\x9C" &&
                 t.text != "\xE2\x80\x98") {
        expect_initial = false;
      }
      continue;
    }
    initial[i] = expect_initial;
    expect_initial = false;
    prev_word = &t;
  }
  return initial;
}

std::vector<PosTag> pos_tag(std::span<const Token> tokens, const Resources& resources) {
  const std::vector<bool> initial = sentence_initial_flags(tokens);
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.is_punct) continue;
    if (auto tag = resources.closed_class(t.lower)) {
      tags.push_back(*tag);
      continue;
    }
    if (resources.irregular_past(t.lower)) {
      tags.push_back(PosTag::Verb);
      continue;
    }
    if (is_numeric(t.lower)) {
      tags.push_back(PosTag::Num);
      continue;
    }
    if (!t.is_alpha) {
      tags.push_back(PosTag::X);
      continue;
    }
    std::optional<PosTag> by_suffix;
    for (const SuffixRule& rule : kSuffixRules) {
      if (t.lower.size() >= rule.suffix.size() + 2 && t.lower.ends_with(rule.suffix)) {
        by_suffix = rule.tag;
        break;
      }
    }
    if (by_suffix) {
      tags.push_back(*by_suffix);
    } else if (capitalized(t) && !initial[i]) {
      tags.push_back(PosTag::Noun);
    } else {
      tags.push_back(PosTag::Noun);
    }
  }
  return tags;
}

std::string title_case(std::string_view surface) {
  std::string out(surface);
  bool prev_letter = false;
  for (char& ch : out) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_ascii_alpha(c)) {
      ch = static_cast<char>(prev_letter ? std::tolower(c) : std::toupper(c));
      prev_letter = true;
    } else {
      prev_letter = c == '\'' || c >= 0x80;
    }
  }
  return out;
}

std::vector<EntityMention> extract_entities(std::string_view text, const Resources& resources) {
  const std::vector<Token> tokens = tokenize(text);
  const std::vector<bool> initial = sentence_initial_flags(tokens);

  auto connector = [](const Token& t) { return t.text == "of" || t.text == "the"; };
  auto droppable = [&](const Token& t) {
    return connector(t) || (!t.is_all_caps && resources.is_stopword(t.lower));
  };

  struct Candidate {
    std::string surface;
    bool initial_only = false;
  };
  std::vector<Candidate> candidates;

  auto emit_run = [&](std::size_t b, std::size_t e) {
    while (b < e && droppable(tokens[b])) ++b;
    while (e > b && droppable(tokens[e - 1])) --e;
    for (std::size_t chunk = b; chunk < e; chunk += 5) {
      std::size_t cb = chunk;
      std::size_t ce = std::min(e, chunk + 5);
      while (cb < ce && droppable(tokens[cb])) ++cb;
      while (ce > cb && droppable(tokens[ce - 1])) --ce;
      if (cb == ce) continue;
      std::string surface;
      for (std::size_t k = cb; k < ce; ++k) {
        if (k > cb) surface.push_back(' ');
        surface += tokens[k].text;
      }
      candidates.push_back({title_case(surface), ce - cb == 1 && initial[cb]});
    }
  };

  std::size_t i = 0;
  while (i < tokens.size()) {
    if (!capitalized(tokens[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    for (;;) {
      if (j < tokens.size() && capitalized(tokens[j])) {
        ++j;
        continue;
      }
      // Internal connectors ("Bank of America", "Statue of the Union").
      std::size_t k = j;
      while (k < tokens.size() && connector(tokens[k])) ++k;
      if (k > j && k < tokens.size() && capitalized(tokens[k])) {
        j = k;
        continue;
      }
      break;
    }
    emit_run(i, j);
    i = j;
  }

  std::set<std::string, std::less<>> confirmed;
  for (const Candidate& c : candidates) {
    if (!c.initial_only) confirmed.insert(c.surface);
  }
  std::map<std::string, std::size_t, std::less<>> counts;
  for (const Candidate& c : candidates) {
    if (c.initial_only && !confirmed.contains(c.surface) &&
        !resources.in_gazetteer(ascii_lower(c.surface))) {
      continue;
    }
    ++counts[c.surface];
  }

  std::vector<EntityMention> out;
  out.reserve(counts.size());
  for (auto& [surface, count] : counts) out.push_back({surface, count});
  std::stable_sort(out.begin(), out.end(), [](const EntityMention& a, const EntityMention& b) {
    return a.count > b.count;
  });
  return out;
}

std::optional<EntityMention> most_frequent_entity(std::string_view text, const Resources& resources) {
  auto entities = extract_entities(text, resources);
  if (entities.empty()) return std::nullopt;
  return entities.front();
}

AnalyzedText analyze(std::string_view text, const Resources& resources) {
  AnalyzedText out;
  out.tokens = tokenize(text);
  const std::vector<PosTag> tags = pos_tag(out.tokens, resources);
  out.tags.resize(out.tokens.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    if (out.tokens[i].is_punct) continue;
    out.tags[i] = tags[next++];
    out.words.push_back(out.tokens[i].lower);
  }
  out.sentence_count = split_sentences(text).size();
  return out;
}

}  // namespace newscomm
