#include <gtest/gtest.h>

#include "newscomm/resources.hpp"
#include "newscomm/textproc.hpp"

using namespace newscomm;

namespace {

const Resources& res() { return *Resources::builtin(); }

std::vector<std::string> texts(std::string_view s) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(s)) out.push_back(t.text);
  return out;
}

std::vector<PosTag> tags(std::string_view s) { return pos_tag(tokenize(s), res()); }

std::size_t sentence_count(std::string_view s) { return split_sentences(s).size(); }

}  // namespace

TEST(Tokenize, PeelsPunctuation) {
  EXPECT_EQ(texts("Hello, world!"), (std::vector<std::string>{"Hello", ",", "world", "!"}));
}

TEST(Tokenize, EmptyText) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, KeepsInternalPeriodsAndHyphens) {
  EXPECT_EQ(texts("U.S.-led strikes"), (std::vector<std::string>{"U.S.-led", "strikes"}));
  EXPECT_EQ(texts("don't \"stop\""), (std::vector<std::string>{"don't", "\"", "stop", "\""}));
}

TEST(Tokenize, TokenAttributes) {
  const auto toks = tokenize("NATO said 42.");
  ASSERT_EQ(toks.size(), 4u);
  EXPECT_TRUE(toks[0].is_all_caps);
  EXPECT_EQ(toks[0].lower, "nato");
  EXPECT_TRUE(toks[1].is_alpha);
  EXPECT_FALSE(toks[2].is_alpha);
  EXPECT_TRUE(toks[3].is_punct);
  EXPECT_EQ(toks[0].begin, 0u);
  EXPECT_EQ(toks[0].end, 4u);
  EXPECT_FALSE(tokenize("A")[0].is_all_caps);
}

TEST(Tokenize, SpansPointIntoSource) {
  const std::string text = "  Well, \"yes\" -- maybe.";
  for (const Token& t : tokenize(text)) {
    ASSERT_GT(t.end, t.begin);
    EXPECT_EQ(text.substr(t.begin, t.end - t.begin), t.text);
  }
}

TEST(Tokenize, DetokenizeRoundTrip) {
  for (std::string_view s : {"Hello, world!", "He said: \"no (really)\"...", "U.S.-led strikes; 3.5% rise?"}) {
    std::string joined;
    for (const auto& t : texts(s)) joined += (joined.empty() ? "" : " ") + t;
    EXPECT_EQ(texts(joined), texts(s)) << s;
  }
}

TEST(SplitSentences, Basic) {
  EXPECT_EQ(sentence_count("A. B? C!"), 3u);
  EXPECT_EQ(sentence_count("no terminal punctuation here"), 1u);
  EXPECT_EQ(sentence_count(""), 0u);
}

TEST(SplitSentences, TitleAbbreviationDoesNotSplit) { EXPECT_EQ(sentence_count("Mr. Smith left. He won."), 2u); }

TEST(SplitSentences, LowercaseContinuationDoesNotSplit) {
  EXPECT_EQ(sentence_count("It rose 3.5 percent. then fell."), 1u);
}

TEST(SplitSentences, ClosingQuoteStaysWithSentence) {
  const std::string text = "\"Go now.\" She left.";
  const auto spans = split_sentences(text);
  ASSERT_EQ(spans.size(), 2u);
}

TEST(Syllables, Examples) {
  EXPECT_EQ(count_syllables("cat"), 1);
  EXPECT_EQ(count_syllables("the"), 1);
  EXPECT_EQ(count_syllables("beautiful"), 3);
  EXPECT_EQ(count_syllables("make"), 1);
  EXPECT_EQ(count_syllables("rhythm"), 1);
  EXPECT_EQ(count_syllables("Syllable"), 2);
}

TEST(Syllables, AlwaysAtLeastOne) {
  for (std::string_view w : {"b", "e", "brr", "queue", "ee", "strengths"}) EXPECT_GE(count_syllables(w), 1) << w;
}

TEST(PosTag, Examples) {
  EXPECT_EQ(tags("the"), std::vector<PosTag>{PosTag::Det});
  EXPECT_EQ(tags("quickly"), std::vector<PosTag>{PosTag::Adv});
  EXPECT_EQ(tags("The dog ran quickly"),
            (std::vector<PosTag>{PosTag::Det, PosTag::Noun, PosTag::Verb, PosTag::Adv}));
}

TEST(PosTag, CascadeRules) {
  EXPECT_EQ(tags("42"), std::vector<PosTag>{PosTag::Num});
  EXPECT_EQ(tags("walking"), std::vector<PosTag>{PosTag::Verb});
  EXPECT_EQ(tags("famous"), std::vector<PosTag>{PosTag::Adj});
  EXPECT_EQ(tags("nation"), std::vector<PosTag>{PosTag::Noun});
  EXPECT_EQ(tags("Run"), std::vector<PosTag>{PosTag::Verb});
  EXPECT_EQ(tags("we saw Paris"), (std::vector<PosTag>{PosTag::Pron, PosTag::Verb, PosTag::Noun}));
}

TEST(PosTag, OneTagPerWordToken) {
  const std::string text = "Well, the (big) dog -- it ran!";
  std::size_t words = 0;
  for (const Token& t : tokenize(text)) words += t.is_punct ? 0 : 1;
  EXPECT_EQ(tags(text).size(), words);
}

TEST(Entities, RepeatedAcrossSentences) {
  const auto e = extract_entities("They said ISIS attacked. ISIS retreated.", res());
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], (EntityMention{"Isis", 2}));
}

TEST(Entities, NoCapitalizedRuns) { EXPECT_TRUE(extract_entities("the cat sat", res()).empty()); }

TEST(Entities, MultiTokenRunsMerge) {
  const auto e = extract_entities("Middle East tension in the Middle East", res());
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], (EntityMention{"Middle East", 2}));
}

TEST(Entities, SentenceInitialOnlyWordsIgnored) {
  EXPECT_TRUE(extract_entities("Yesterday it rained. Later it stopped.", res()).empty());
}

TEST(Entities, InternalConnectorsAllowed) {
  const auto e = extract_entities("We met the Bank of England today.", res());
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].surface, "Bank Of England");
}

TEST(Entities, SortedByCountThenSurface) {
  const auto e = extract_entities("we like Beta and Alpha. we like Beta and Alpha and Gamma.", res());
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0].surface, "Alpha");
  EXPECT_EQ(e[1].surface, "Beta");
  EXPECT_EQ(e[2].surface, "Gamma");
  std::size_t total = 0;
  for (const auto& m : e) total += m.count;
  EXPECT_EQ(total, 5u);
}

TEST(MostFrequentEntity, ArgmaxTieAndNone) {
  EXPECT_EQ(most_frequent_entity("so Alpha met Alpha and Alpha and Beta.", res())->surface, "Alpha");
  EXPECT_EQ(most_frequent_entity("so Beta met Alpha and Beta saw Alpha.", res())->surface, "Alpha");
  EXPECT_FALSE(most_frequent_entity("nothing to see here", res()).has_value());
}

TEST(TitleCase, Surface) { EXPECT_EQ(title_case("middle EAST"), "Middle East"); }

TEST(Analyze, Deterministic) {
  const std::string text = "The Senate voted. Critics said it failed to pass!";
  const auto a = analyze(text, res());
  const auto b = analyze(text, res());
  EXPECT_EQ(a.words, b.words);
  EXPECT_EQ(a.tags, b.tags);
  EXPECT_EQ(a.sentence_count, 2u);
}
