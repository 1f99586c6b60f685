#include "newscomm/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "newscomm/error.hpp"
#include "newscomm/parallel.hpp"

namespace newscomm {

namespace {

constexpr std::size_t kStyleFieldSize = 22;
constexpr std::size_t kSentimentFieldSize = 8;

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

bool is_double_quote(std::string_view t) {
  return t == "\"" || t == "\xE2\x80\x9C" || t == "\xE2\x80\x9D";
}

enum class Tense { Past, Present, Future };

// Tense of each VERB-tagged token; other tokens are left as nullopt.
std::vector<std::optional<Tense>> verb_tenses(const AnalyzedText& text, const Resources& res) {
  const auto& tokens = text.tokens;
  std::vector<std::optional<Tense>> tense(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (text.tags[i] != PosTag::Verb) continue;
    const std::string& w = tokens[i].lower;
    const auto irregular = res.irregular_past(w);
    if (irregular.value_or(false) || (!irregular && w.size() > 3 && w.ends_with("ed"))) {
      tense[i] = Tense::Past;
    } else {
      tense[i] = Tense::Present;
    }
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (text.tags[i] != PosTag::Verb || (tokens[i].lower != "will" && tokens[i].lower != "shall")) continue;
    std::size_t j = i + 1;
    while (j < tokens.size() &&
           (tokens[j].is_punct ? false : (tokens[j].lower == "not" || text.tags[j] == PosTag::Adv))) {
      ++j;
    }
    if (j < tokens.size() && text.tags[j] == PosTag::Verb) {
      tense[i] = Tense::Future;
      tense[j] = Tense::Future;
    }
  }
  return tense;
}

void style_field(const AnalyzedText& text, const Resources& res, std::span<double> out) {
  const double words = static_cast<double>(text.words.size());
  std::array<double, kPosTagCount> pos{};
  double exclaim = 0, question = 0, quotes = 0, commas = 0, caps = 0;
  for (std::size_t i = 0; i < text.tokens.size(); ++i) {
    const Token& t = text.tokens[i];
    if (t.is_punct) {
      exclaim += t.text == "!";
      question += t.text == "?";
      quotes += is_double_quote(t.text);
      commas += t.text == ",";
      continue;
    }
    pos[static_cast<std::size_t>(*text.tags[i])] += 1.0;
    caps += t.is_all_caps;
  }
  for (std::size_t k = 0; k < kPosTagCount; ++k) out[k] = ratio(pos[k], words);
  out[12] = exclaim;
  out[13] = question;
  out[14] = quotes;
  out[15] = commas;
  out[16] = caps;

  double past = 0, present = 0, future = 0;
  for (const auto& tense : verb_tenses(text, res)) {
    if (!tense) continue;
    past += *tense == Tense::Past;
    present += *tense == Tense::Present;
    future += *tense == Tense::Future;
  }
  const double verbs = past + present + future;
  out[17] = ratio(past, verbs);
  out[18] = ratio(present, verbs);
  out[19] = ratio(future, verbs);
  out[20] = static_cast<double>(res.lexicon("quantifiers").count_hits(text.words));
  out[21] = static_cast<double>(res.lexicon("swear").count_hits(text.words));
}

// Fraction of word tokens that sit inside a double-quoted span.
double quoted_fraction(const AnalyzedText& text) {
  bool inside = false;
  double quoted = 0;
  for (const Token& t : text.tokens) {
    if (t.is_punct) {
      if (t.text == "\"") inside = !inside;
      else if (t.text == "\xE2\x80\x9C") inside = true;
      else if (t.text == "\xE2\x80\x9D") inside = false;
      continue;
    }
    quoted += inside;
  }
  return ratio(quoted, static_cast<double>(text.words.size()));
}

struct AlphaStats {
  double count = 0;
  double distinct = 0;
  double chars = 0;
  double syllables = 0;
  double stopwords = 0;
};

AlphaStats alpha_stats(const AnalyzedText& text, const Resources& res) {
  AlphaStats s;
  std::set<std::string_view> seen;
  for (const Token& t : text.tokens) {
    if (!t.is_alpha) continue;
    s.count += 1;
    seen.insert(t.lower);
    s.chars += static_cast<double>(utf8_length(t.text));
    s.syllables += count_syllables(t.text);
    s.stopwords += res.is_stopword(t.lower);
  }
  s.distinct = static_cast<double>(seen.size());
  return s;
}

double lexicon_ratio(const AnalyzedText& text, const Resources& res, std::string_view lexicon) {
  return ratio(static_cast<double>(res.lexicon(lexicon).count_hits(text.words)),
               static_cast<double>(text.words.size()));
}

double subjectivity(const AnalyzedText& text, const Resources& res) {
  const Lexicon& strong = res.lexicon("strong_subj");
  const Lexicon& weak = res.lexicon("weak_subj");
  double hits = 0;
  for (std::size_t i = 0; i < text.words.size(); ++i) {
    hits += strong.match_at(text.words, i) > 0 || weak.match_at(text.words, i) > 0;
  }
  return ratio(hits, static_cast<double>(text.words.size()));
}

void sentiment_field(const AnalyzedText& text, const Resources& res, std::span<double> out) {
  const Lexicon& valence = res.lexicon("valence");
  const double words = static_cast<double>(text.words.size());
  double pos = 0, neg = 0, hits = 0, total = 0;
  for (std::string_view w : text.words) {
    if (auto weight = valence.weight(w)) {
      hits += 1;
      total += *weight;
      pos += *weight > 0;
      neg += *weight < 0;
    }
  }
  out[0] = ratio(pos, words);
  out[1] = ratio(neg, words);
  out[2] = ratio(words - hits, words);
  out[3] = lexicon_ratio(text, res, "anger");
  out[4] = lexicon_ratio(text, res, "assent");
  out[5] = lexicon_ratio(text, res, "strong_subj");
  out[6] = lexicon_ratio(text, res, "weak_subj");
  out[7] = ratio(total, hits);
}

void style_into(const AnalyzedText& title, const AnalyzedText& body, const Resources& res,
                std::span<double> out) {
  style_field(title, res, out.subspan(0, kStyleFieldSize));
  style_field(body, res, out.subspan(kStyleFieldSize, kStyleFieldSize));
  out[2 * kStyleFieldSize] = quoted_fraction(body);
}

void complexity_into(const AnalyzedText& title, const AnalyzedText& body, const Resources& res,
                     std::span<double> out) {
  const AlphaStats b = alpha_stats(body, res);
  const AlphaStats t = alpha_stats(title, res);
  out[0] = ratio(b.distinct, b.count);
  if (b.count > 0) {
    const double sentences = std::max<double>(1.0, static_cast<double>(body.sentence_count));
    out[1] = 0.39 * (b.count / sentences) + 11.8 * (b.syllables / b.count) - 15.59;
  } else {
    out[1] = 0.0;
  }
  out[2] = ratio(b.stopwords, b.count);
  out[3] = ratio(b.chars, b.count);
  out[4] = b.count;
  out[5] = ratio(t.chars, t.count);
  out[6] = t.count;
}

void bias_into(const AnalyzedText& title, const AnalyzedText& body, const Resources& res,
               std::span<double> out) {
  out[0] = lexicon_ratio(body, res, "bias");
  out[1] = lexicon_ratio(body, res, "hedges");
  out[2] = lexicon_ratio(body, res, "factives");
  out[3] = lexicon_ratio(body, res, "implicatives");
  out[4] = lexicon_ratio(body, res, "certainty");
  out[5] = lexicon_ratio(body, res, "tentative");
  out[6] = subjectivity(body, res);
  out[7] = lexicon_ratio(title, res, "bias");
  out[8] = lexicon_ratio(title, res, "hedges");
  out[9] = lexicon_ratio(title, res, "certainty");
  out[10] = subjectivity(title, res);
}

void sentiment_into(const AnalyzedText& title, const AnalyzedText& body, const Resources& res,
                    std::span<double> out) {
  sentiment_field(title, res, out.subspan(0, kSentimentFieldSize));
  sentiment_field(body, res, out.subspan(kSentimentFieldSize, kSentimentFieldSize));
}

template <std::size_t N, class Fn>
std::array<double, N> compute(std::string_view title, std::string_view body, const Resources& res, Fn fn) {
  std::array<double, N> out{};
  const AnalyzedText t = analyze(title, res);
  const AnalyzedText b = analyze(body, res);
  fn(t, b, res, std::span<double>(out));
  return out;
}

std::span<double> slot(std::array<double, kFeatureCount>& values, FeatureGroup g) {
  return std::span<double>(values).subspan(span_of(g).begin, span_of(g).size);
}

}  // namespace

std::vector<FeatureGroup> GroupSet::groups() const {
  std::vector<FeatureGroup> out;
  for (const GroupSpan& s : kSchema) {
    if (contains(s.group)) out.push_back(s.group);
  }
  return out;
}

std::vector<std::size_t> GroupSet::columns() const {
  std::vector<std::size_t> out;
  for (const GroupSpan& s : kSchema) {
    if (!contains(s.group)) continue;
    for (std::size_t k = 0; k < s.size; ++k) out.push_back(s.begin + k);
  }
  return out;
}

std::string GroupSet::to_string() const {
  std::string out;
  for (FeatureGroup g : groups()) {
    if (!out.empty()) out.push_back(',');
    out += newscomm::to_string(g);
  }
  return out;
}

FeatureGroup parse_group(std::string_view name) {
  for (const GroupSpan& s : kSchema) {
    if (s.name == name) return s.group;
  }
  if (name == "entity-slant" || name == "slant") return FeatureGroup::EntitySlant;
  throw UsageError("unknown feature group '" + std::string(name) + "'; valid groups: " +
                   valid_group_names());
}

GroupSet parse_groups(std::string_view list) {
  if (list == "all") return GroupSet::all();
  GroupSet out;
  while (!list.empty()) {
    const auto comma = list.find(',');
    std::string_view item = list.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.insert(parse_group(item));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (out.empty()) throw UsageError("no feature groups selected; valid groups: " + valid_group_names());
  return out;
}

std::string valid_group_names() {
  std::string out;
  for (const GroupSpan& s : kSchema) {
    if (!out.empty()) out += ", ";
    out += s.name;
  }
  return out + ", all";
}

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = [] {
    std::array<std::string, kFeatureCount> n;
    std::size_t k = 0;
    for (std::string_view field : {"title", "body"}) {
      const std::string f(field);
      for (std::string_view tag : kPosTagNames) n[k++] = "style_" + f + "_pos_" + std::string(tag);
      for (const char* name : {"exclamations", "questions", "quotes", "commas", "all_caps",
                               "past", "present", "future", "quantifiers", "swears"}) {
        n[k++] = "style_" + f + "_" + name;
      }
    }
    n[k++] = "style_body_quoted_fraction";
    for (const char* name : {"body_ttr", "body_fk_grade", "body_stopwords", "body_word_len",
                             "body_words", "title_word_len", "title_words"}) {
      n[k++] = std::string("complexity_") + name;
    }
    for (const char* name : {"body_bias", "body_hedges", "body_factives", "body_implicatives",
                             "body_certainty", "body_tentative", "body_subjectivity", "title_bias",
                             "title_hedges", "title_certainty", "title_subjectivity"}) {
      n[k++] = std::string("bias_") + name;
    }
    n[k++] = "entity_id";
    const char* sentiment[] = {"positive", "negative", "neutral", "anger",
                               "assent",   "strong",   "weak",    "mean_valence"};
    for (const char* prefix : {"sentiment_", "slant_"}) {
      for (std::string_view field : {"title", "body"}) {
        for (const char* name : sentiment) n[k++] = prefix + std::string(field) + "_" + name;
      }
    }
    n[k++] = "slant_entity_id";
    n[k++] = "source_id";
    return n;
  }();
  return names;
}

LabelEncoder LabelEncoder::fit(std::string name, std::vector<std::string> keys) {
  LabelEncoder enc(std::move(name));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (std::string& key : keys) enc.table_.emplace(std::move(key), enc.next_id_++);
  return enc;
}

int LabelEncoder::id(std::string_view key) const {
  if (auto it = table_.find(key); it != table_.end()) return it->second;
  return 0;
}

nlohmann::json LabelEncoder::to_json() const {
  nlohmann::json table = nlohmann::json::object();
  for (const auto& [key, id] : table_) table[key] = id;
  return {{"name", name_}, {"table", table}, {"next_id", next_id_}};
}

LabelEncoder LabelEncoder::from_json(const nlohmann::json& j) {
  LabelEncoder enc(j.at("name").get<std::string>());
  for (const auto& [key, id] : j.at("table").items()) enc.table_.emplace(key, id.get<int>());
  enc.next_id_ = j.at("next_id").get<int>();
  std::set<int> ids;
  for (const auto& [key, id] : enc.table_) {
    if (id < 1 || id >= enc.next_id_ || !ids.insert(id).second) {
      throw DataError("encoder '" + enc.name_ + "' has invalid id for key '" + key + "'");
    }
  }
  return enc;
}

std::array<double, 45> style_features(std::string_view title, std::string_view body, const Resources& res) {
  return compute<45>(title, body, res, style_into);
}

std::array<double, 7> complexity_features(std::string_view title, std::string_view body, const Resources& res) {
  return compute<7>(title, body, res, complexity_into);
}

std::array<double, 11> bias_features(std::string_view title, std::string_view body, const Resources& res) {
  return compute<11>(title, body, res, bias_into);
}

std::array<double, 16> sentiment_features(std::string_view title, std::string_view body, const Resources& res) {
  return compute<16>(title, body, res, sentiment_into);
}

std::string entity_text(const Article& article) {
  if (article.title.empty()) return article.body;
  std::string text = article.title;
  const char last = text.back();
  if (last != '.' && last != '!' && last != '?') text.push_back('.');
  text += '\n';
  text += article.body;
  return text;
}

double entity_feature(const Article& article, const LabelEncoder& entities, const Resources& res) {
  const auto entity = most_frequent_entity(entity_text(article), res);
  return entity ? static_cast<double>(entities.id(entity->surface)) : 0.0;
}

std::array<double, 17> entity_slant_features(const Article& article, const LabelEncoder& entities,
                                             const Resources& res) {
  std::array<double, 17> out{};
  const auto sentiment = sentiment_features(article.title, article.body, res);
  std::copy(sentiment.begin(), sentiment.end(), out.begin());
  out[16] = entity_feature(article, entities, res);
  return out;
}

double source_feature(const Article& article, const LabelEncoder& sources) {
  return static_cast<double>(sources.id(article.source));
}

ArticleProfile profile_article(const Article& article, const Resources& res) {
  ArticleProfile p;
  const AnalyzedText title = analyze(article.title, res);
  const AnalyzedText body = analyze(article.body, res);
  style_into(title, body, res, slot(p.text_values, FeatureGroup::Style));
  complexity_into(title, body, res, slot(p.text_values, FeatureGroup::Complexity));
  bias_into(title, body, res, slot(p.text_values, FeatureGroup::Bias));
  sentiment_into(title, body, res, slot(p.text_values, FeatureGroup::Sentiment));
  auto slant = slot(p.text_values, FeatureGroup::EntitySlant);
  auto sentiment = slot(p.text_values, FeatureGroup::Sentiment);
  std::copy(sentiment.begin(), sentiment.end(), slant.begin());
  if (auto entity = most_frequent_entity(entity_text(article), res)) p.entity = entity->surface;
  p.source = article.source;
  return p;
}

std::vector<ArticleProfile> profile_corpus(const Corpus& corpus, const Resources& res, unsigned workers) {
  std::vector<ArticleProfile> out(corpus.size());
  parallel_for(corpus.size(), workers, [&](std::size_t i) { out[i] = profile_article(corpus[i], res); });
  return out;
}

FeatureVector assemble(const ArticleProfile& profile, GroupSet groups, const Encoders* encoders) {
  const bool needs_encoders = groups.contains(FeatureGroup::Entity) ||
                              groups.contains(FeatureGroup::EntitySlant) ||
                              groups.contains(FeatureGroup::Source);
  if (needs_encoders && encoders == nullptr) {
    throw UsageError("feature groups '" + groups.to_string() + "' require fitted encoders");
  }
  FeatureVector v;
  v.mask = groups;
  for (const GroupSpan& s : kSchema) {
    if (!groups.contains(s.group)) continue;
    for (std::size_t k = s.begin; k < s.begin + s.size; ++k) v.values[k] = profile.text_values[k];
  }
  const double entity_id = profile.entity && encoders ? encoders->entity.id(*profile.entity) : 0.0;
  if (groups.contains(FeatureGroup::Entity)) v.values[span_of(FeatureGroup::Entity).begin] = entity_id;
  if (groups.contains(FeatureGroup::EntitySlant)) {
    const GroupSpan& s = span_of(FeatureGroup::EntitySlant);
    v.values[s.begin + s.size - 1] = entity_id;
  }
  if (groups.contains(FeatureGroup::Source)) {
    v.values[span_of(FeatureGroup::Source).begin] = encoders->source.id(profile.source);
  }
  return v;
}

FeatureVector extract(const Article& article, GroupSet groups, const Encoders* encoders, const Resources& res) {
  return assemble(profile_article(article, res), groups, encoders);
}

Encoders fit_encoders(std::span<const ArticleProfile> train) {
  if (train.empty()) throw UsageError("cannot fit encoders on an empty training set");
  std::vector<std::string> sources;
  std::vector<std::string> entities;
  for (const ArticleProfile& p : train) {
    sources.push_back(p.source);
    if (p.entity) entities.push_back(*p.entity);
  }
  return Encoders{LabelEncoder::fit("source", std::move(sources)),
                  LabelEncoder::fit("entity", std::move(entities))};
}

Encoders fit_encoders(const Corpus& train, const Resources& res) {
  const auto profiles = profile_corpus(train, res);
  return fit_encoders(profiles);
}

void FeatureMatrix::push_back(std::span<const double> values) {
  if (values.size() != kFeatureCount) throw UsageError("feature row must have 98 values");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

FeatureMatrix FeatureMatrix::subset(std::span<const std::size_t> indices) const {
  FeatureMatrix out;
  out.data_.reserve(indices.size() * kFeatureCount);
  for (std::size_t i : indices) out.push_back(row(i));
  return out;
}

FeatureMatrix assemble_matrix(std::span<const ArticleProfile> profiles, GroupSet groups,
                              const Encoders* encoders) {
  FeatureMatrix m;
  for (const ArticleProfile& p : profiles) m.push_back(assemble(p, groups, encoders).values);
  return m;
}

}  // namespace newscomm
