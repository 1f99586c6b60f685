#include "newscomm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "newscomm/error.hpp"
#include "newscomm/parallel.hpp"
#include "newscomm/random.hpp"

namespace newscomm {

namespace {

constexpr std::uint64_t kVocabSeed = 0x6E657773636F6D6DULL;
constexpr std::uint64_t kFreshEntityStream = 0xE171000000000000ULL;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string pseudo_word(Rng& rng, std::size_t min_syllables, std::size_t max_syllables) {
  static constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r",
                                                 "s", "t", "v", "z", "br", "dr", "gr", "kl", "tr", "st"};
  static constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
  static constexpr std::string_view kCodas[] = {"", "", "", "n", "r", "l", "m", "x", "th", "sk"};
  const std::size_t syllables = min_syllables + rng.below(max_syllables - min_syllables + 1);
  std::string w;
  for (std::size_t i = 0; i < syllables; ++i) {
    w += kOnsets[rng.below(std::size(kOnsets))];
    w += kVowels[rng.below(std::size(kVowels))];
  }
  w += kCodas[rng.below(std::size(kCodas))];
  return w;
}

bool known_word(std::string_view w, const Resources& res) {
  for (std::string_view name : kLexiconNames) {
    if (res.lexicon(name).contains(w)) return true;
  }
  return res.closed_class(w).has_value() || res.irregular_past(w).has_value() || res.in_gazetteer(w);
}

std::vector<WeightedName> parse_pool(const nlohmann::json& j, const char* key) {
  std::vector<WeightedName> out;
  if (j.is_object()) {
    for (const auto& [name, w] : j.items()) {
      if (!w.is_number()) throw DataError(std::string("'") + key + "' weights must be numbers");
      out.push_back({name, w.get<double>()});
    }
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (e.is_string()) {
        out.push_back({e.get<std::string>(), 1.0});
      } else if (e.is_object() && e.contains("name") && e["name"].is_string()) {
        WeightedName w{e["name"].get<std::string>(), 1.0};
        if (e.contains("weight")) {
          if (!e["weight"].is_number()) throw DataError(std::string("'") + key + "' weights must be numbers");
          w.weight = e["weight"].get<double>();
        }
        out.push_back(std::move(w));
      } else {
        throw DataError(std::string("'") + key + "' entries must be names or {name, weight} objects");
      }
    }
  } else {
    throw DataError(std::string("'") + key + "' must be a list or an object");
  }
  return out;
}

template <class T>
T number(const nlohmann::json& j, const char* key) {
  if (!j.is_number()) throw DataError(std::string("'") + key + "' must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) throw DataError(std::string("'") + key + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (j.get<std::int64_t>() < 0) throw DataError(std::string("'") + key + "' must be non-negative");
    }
  }
  return j.get<T>();
}

template <class T>
std::pair<T, T> range(const nlohmann::json& j, const char* key) {
  if (!j.is_array() || j.size() != 2) throw DataError(std::string("'") + key + "' must be [min, max]");
  return {number<T>(j[0], key), number<T>(j[1], key)};
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

/// Injection candidates for one profile, fixed before any article is drawn.
struct Injector {
  struct Choice {
    std::string lexicon;
    double rate = 0.0;
    std::vector<std::string> terms;     // non-valence lexicons
    std::vector<std::string> positive;  // valence only
    std::vector<std::string> negative;
  };
  std::vector<Choice> choices;  // sorted by lexicon name
  std::vector<std::string> fillers;

  Injector(const CommunityProfile& p, const Resources& res) {
    std::vector<std::string_view> silent;
    for (std::string_view name : kLexiconNames) {
      if (name == "stopwords") continue;
      const auto it = p.lexicon_rates.find(std::string(name));
      if (it == p.lexicon_rates.end() || it->second == 0.0) silent.push_back(name);
    }
    auto in_silent = [&](std::string_view term, std::string_view self) {
      return std::any_of(silent.begin(), silent.end(),
                         [&](std::string_view s) { return s != self && res.lexicon(s).contains(term); });
    };
    for (const auto& [name, rate] : p.lexicon_rates) {
      if (rate == 0.0) continue;
      Choice c{name, rate, {}, {}, {}};
      const Lexicon& lex = res.lexicon(name);
      for (const auto& [term, weight] : lex.entries()) {
        if (in_silent(term, name)) continue;
        if (name == "valence") {
          if (weight > 0) c.positive.push_back(term);
          if (weight < 0) c.negative.push_back(term);
        } else {
          c.terms.push_back(term);
        }
      }
      if (c.terms.empty() && c.positive.empty() && c.negative.empty()) {
        for (const auto& [term, weight] : lex.entries()) {
          if (name != "valence") c.terms.push_back(term);
          else if (weight > 0) c.positive.push_back(term);
          else if (weight < 0) c.negative.push_back(term);
        }
      }
      if (name == "valence" && (c.positive.empty() || c.negative.empty())) {
        throw DataError("valence lexicon needs both positive and negative terms");
      }
      choices.push_back(std::move(c));
    }
    for (const auto& [term, weight] : res.lexicon("stopwords").entries()) {
      if (term.find(' ') != std::string::npos) continue;
      bool elsewhere = false;
      for (std::string_view name : kLexiconNames) {
        if (name != "stopwords" && res.lexicon(name).contains(term)) elsewhere = true;
      }
      if (!elsewhere) fillers.push_back(term);
    }
    if (fillers.empty()) throw DataError("no stopwords available as filler words");
  }
};

std::string format_id(const std::string& prefix, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return prefix + "-" + buf;
}

Article generate_article(const CommunityProfile& p, const Injector& inj, const std::vector<std::string>& vocab,
                         const std::string& id, std::uint64_t article_seed) {
  Rng rng(article_seed);
  // Each sentence is a list of word slots; an entity occupies one slot.
  std::vector<std::vector<std::string>> sentences(
      static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(p.min_sentences),
                                           static_cast<std::int64_t>(p.max_sentences))));
  std::vector<std::vector<char>> plain(sentences.size());
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto n = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(p.min_words), static_cast<std::int64_t>(p.max_words)));
    for (std::size_t i = 0; i < n; ++i) {
      double u = rng.uniform();
      const Injector::Choice* chosen = nullptr;
      for (const auto& c : inj.choices) {
        if (u < c.rate) {
          chosen = &c;
          break;
        }
        u -= c.rate;
      }
      if (chosen != nullptr) {
        if (chosen->lexicon == "valence") {
          const auto& side = rng.bernoulli((1.0 + p.valence_bias) / 2.0) ? chosen->positive : chosen->negative;
          sentences[s].push_back(side[rng.below(side.size())]);
        } else {
          sentences[s].push_back(chosen->terms[rng.below(chosen->terms.size())]);
        }
        plain[s].push_back(0);
      } else if (rng.bernoulli(p.stopword_rate)) {
        sentences[s].push_back(inj.fillers[rng.below(inj.fillers.size())]);
        plain[s].push_back(0);
      } else {
        sentences[s].push_back(vocab[rng.below(vocab.size())]);
        plain[s].push_back(1);
      }
    }
  }

  std::vector<double> source_w, entity_w;
  for (const auto& w : p.sources) source_w.push_back(w.weight);
  for (const auto& w : p.entities) entity_w.push_back(w.weight);
  const std::string& entity = p.entities[rng.weighted(entity_w)].name;

  // Entity mentions replace filler slots away from sentence starts and
  // never touch each other, so every mention stays a separate run.
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    for (std::size_t i = 2; i < sentences[s].size(); ++i) {
      if (plain[s][i]) slots.emplace_back(s, i);
    }
  }
  rng.shuffle(slots.begin(), slots.end());
  std::vector<std::pair<std::size_t, std::size_t>> taken;
  for (const auto& [s, i] : slots) {
    if (taken.size() >= p.entity_mentions) break;
    const bool clash = std::any_of(taken.begin(), taken.end(), [&](const auto& t) {
      return t.first == s && (t.second + 1 == i || i + 1 == t.second);
    });
    if (clash) continue;
    taken.emplace_back(s, i);
    sentences[s][i] = entity;
  }

  Article a;
  a.id = id;
  a.community = p.label;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    std::string text = capitalize(sentences[s].front());
    for (std::size_t i = 1; i < sentences[s].size(); ++i) text += " " + sentences[s][i];
    const double u = rng.uniform();
    text += u < p.exclamation_rate ? "!" : u < p.exclamation_rate + p.question_rate ? "?" : ".";
    if (!a.body.empty()) a.body += ' ';
    a.body += text;
  }
  const auto& first = sentences.front();
  const std::size_t title_len = std::min(p.title_words, first.size());
  a.title = capitalize(first.front());
  for (std::size_t i = 1; i < title_len; ++i) a.title += " " + first[i];

  a.source = p.sources[rng.weighted(source_w)].name;
  a.url = "https://" + a.source + "/" + p.label + "/" + id;
  a.timestamp = rng.between(p.time_start, p.time_end - 1);
  const double z1 = rng.normal();
  const double z2 = rng.normal();
  a.score = p.score.shift + static_cast<std::int64_t>(std::floor(std::exp(p.score.mu + p.score.sigma * z1)));
  a.num_comments =
      static_cast<std::int64_t>(std::floor(std::exp(p.score.comments_mu + p.score.comments_sigma * z2)));
  return a;
}

std::vector<Article> generate_community(const CommunityProfile& p, std::uint64_t seed, const std::string& prefix,
                                        const Resources& res, const std::vector<std::string>& shared_vocab,
                                        unsigned workers) {
  p.validate();
  const Injector inj(p, res);
  const auto& vocab = p.base_vocab.empty() ? shared_vocab : p.base_vocab;
  const std::uint64_t stream = mix_seed(seed, fnv1a(p.label));
  std::vector<Article> out(p.n_articles);
  parallel_for(p.n_articles, workers, [&](std::size_t i) {
    out[i] = generate_article(p, inj, vocab, format_id(prefix, i), mix_seed(stream, i));
  });
  return out;
}

void check_labels(const std::vector<CommunityProfile>& profiles) {
  if (profiles.empty()) throw DataError("no community profiles given");
  std::set<std::string> seen;
  for (const auto& p : profiles) {
    if (!seen.insert(p.label).second) throw DataError("duplicate community profile '" + p.label + "'");
  }
}

}  // namespace

void CommunityProfile::validate() const {
  const std::string who = "profile '" + label + "': ";
  if (label.empty()) throw DataError("community profile without a label");
  if (sources.empty()) throw DataError(who + "source pool is empty");
  if (entities.empty()) throw DataError(who + "entity pool is empty");
  for (const auto* pool : {&sources, &entities}) {
    double total = 0.0;
    for (const auto& w : *pool) {
      if (!(w.weight >= 0.0) || w.name.empty()) throw DataError(who + "pool entries need a name and weight >= 0");
      total += w.weight;
    }
    if (!(total > 0.0)) throw DataError(who + "pool weights sum to zero");
  }
  for (const auto& s : sources) {
    if (normalize_source(s.name) != s.name) throw DataError(who + "source '" + s.name + "' is not a bare host");
  }
  double total = 0.0;
  for (const auto& [name, rate] : lexicon_rates) {
    if (name == "stopwords" ||
        std::find(std::begin(kLexiconNames), std::end(kLexiconNames), name) == std::end(kLexiconNames)) {
      throw DataError(who + "unknown lexicon '" + name + "' in lexicon_rates");
    }
    if (!(rate >= 0.0 && rate <= 1.0)) throw DataError(who + "rate for '" + name + "' must lie in [0, 1]");
    total += rate;
  }
  if (total > 1.0) throw DataError(who + "lexicon rates sum above 1");
  for (double r : {stopword_rate, exclamation_rate, question_rate}) {
    if (!(r >= 0.0 && r <= 1.0)) throw DataError(who + "rates must lie in [0, 1]");
  }
  if (exclamation_rate + question_rate > 1.0) throw DataError(who + "punctuation rates sum above 1");
  if (!(valence_bias >= -1.0 && valence_bias <= 1.0)) throw DataError(who + "valence_bias must lie in [-1, 1]");
  if (min_sentences < 1 || min_sentences > max_sentences) throw DataError(who + "bad sentence range");
  if (min_words < 4 || min_words > max_words) throw DataError(who + "sentences need at least 4 words");
  if (title_words < 1) throw DataError(who + "title_words must be positive");
  if (time_start <= 0 || time_start >= time_end) throw DataError(who + "bad time range");
  if (!(score.sigma >= 0.0 && score.comments_sigma >= 0.0)) throw DataError(who + "score sigma must be >= 0");
}

void DriftSpec::validate() const {
  if (slices.empty()) throw DataError("drift spec has no slices");
  std::set<std::string> labels;
  for (std::size_t k = 0; k < slices.size(); ++k) {
    const SliceSpec& s = slices[k];
    if (s.label.empty() || !labels.insert(s.label).second) throw DataError("slice labels must be unique");
    if (s.start <= 0 || s.start >= s.end) throw DataError("slice '" + s.label + "': bad time range");
    if (k > 0 && s.start < slices[k - 1].end) throw DataError("slice '" + s.label + "' overlaps the previous one");
    if (!(s.rotation >= 0.0 && s.rotation <= 1.0)) {
      throw DataError("slice '" + s.label + "': rotation must lie in [0, 1]");
    }
  }
}

CommunityProfile parse_profile(const nlohmann::json& j, const CommunityProfile& base) {
  if (!j.is_object()) throw DataError("community profile must be an object");
  CommunityProfile p = base;
  for (const auto& [key, v] : j.items()) {
    if (key == "label") {
      if (!v.is_string()) throw DataError("'label' must be a string");
      p.label = v.get<std::string>();
    } else if (key == "n_articles") {
      p.n_articles = number<std::size_t>(v, "n_articles");
    } else if (key == "sources") {
      p.sources = parse_pool(v, "sources");
    } else if (key == "entities") {
      p.entities = parse_pool(v, "entities");
    } else if (key == "lexicon_rates") {
      if (!v.is_object()) throw DataError("'lexicon_rates' must be an object");
      p.lexicon_rates.clear();
      for (const auto& [name, rate] : v.items()) p.lexicon_rates[name] = number<double>(rate, "lexicon_rates");
    } else if (key == "valence_bias") {
      p.valence_bias = number<double>(v, "valence_bias");
    } else if (key == "stopword_rate") {
      p.stopword_rate = number<double>(v, "stopword_rate");
    } else if (key == "exclamation_rate") {
      p.exclamation_rate = number<double>(v, "exclamation_rate");
    } else if (key == "question_rate") {
      p.question_rate = number<double>(v, "question_rate");
    } else if (key == "sentences") {
      std::tie(p.min_sentences, p.max_sentences) = range<std::size_t>(v, "sentences");
    } else if (key == "words") {
      std::tie(p.min_words, p.max_words) = range<std::size_t>(v, "words");
    } else if (key == "entity_mentions") {
      p.entity_mentions = number<std::size_t>(v, "entity_mentions");
    } else if (key == "title_words") {
      p.title_words = number<std::size_t>(v, "title_words");
    } else if (key == "time_range") {
      std::tie(p.time_start, p.time_end) = range<std::int64_t>(v, "time_range");
    } else if (key == "score") {
      if (!v.is_object()) throw DataError("'score' must be an object");
      for (const auto& [sk, sv] : v.items()) {
        if (sk == "mu") p.score.mu = number<double>(sv, "score.mu");
        else if (sk == "sigma") p.score.sigma = number<double>(sv, "score.sigma");
        else if (sk == "shift") p.score.shift = number<std::int64_t>(sv, "score.shift");
        else if (sk == "comments_mu") p.score.comments_mu = number<double>(sv, "score.comments_mu");
        else if (sk == "comments_sigma") p.score.comments_sigma = number<double>(sv, "score.comments_sigma");
        else throw DataError("unknown score key '" + sk + "'");
      }
    } else if (key == "base_vocab") {
      if (!v.is_array()) throw DataError("'base_vocab' must be a list of words");
      p.base_vocab = v.get<std::vector<std::string>>();
    } else {
      throw DataError("unknown profile key '" + key + "'");
    }
  }
  if (p.label.empty()) throw DataError("community profile without a label");
  return p;
}

SynthConfig parse_synth_config(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("communities") || !j["communities"].is_array()) {
    throw DataError("synth config needs a 'communities' list");
  }
  for (const auto& [key, v] : j.items()) {
    if (key != "communities" && key != "defaults" && key != "drift") {
      throw DataError("unknown synth config key '" + key + "'");
    }
  }
  CommunityProfile defaults;
  if (j.contains("defaults")) {
    nlohmann::json d = j["defaults"];
    if (!d.is_object()) throw DataError("'defaults' must be an object");
    d["label"] = "defaults";
    defaults = parse_profile(d);
    defaults.label.clear();
  }
  SynthConfig cfg;
  for (const auto& c : j["communities"]) cfg.communities.push_back(parse_profile(c, defaults));
  check_labels(cfg.communities);
  for (const auto& p : cfg.communities) p.validate();
  if (j.contains("drift")) {
    const auto& d = j["drift"];
    if (!d.is_object() || !d.contains("slices") || !d["slices"].is_array()) {
      throw DataError("'drift' needs a 'slices' list");
    }
    DriftSpec drift;
    for (const auto& s : d["slices"]) {
      if (!s.is_object()) throw DataError("drift slice must be an object");
      SliceSpec slice;
      for (const auto& [key, v] : s.items()) {
        if (key == "label") {
          if (!v.is_string()) throw DataError("slice 'label' must be a string");
          slice.label = v.get<std::string>();
        } else if (key == "start") {
          slice.start = number<std::int64_t>(v, "start");
        } else if (key == "end") {
          slice.end = number<std::int64_t>(v, "end");
        } else if (key == "rotation") {
          slice.rotation = number<double>(v, "rotation");
        } else if (key == "overrides") {
          if (!v.is_object()) throw DataError("slice 'overrides' must be an object");
          for (const auto& [label, o] : v.items()) slice.overrides[label] = o;
        } else {
          throw DataError("unknown slice key '" + key + "'");
        }
      }
      drift.slices.push_back(std::move(slice));
    }
    drift.validate();
    cfg.drift = std::move(drift);
  }
  return cfg;
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open synth config " + path.string());
  try {
    return parse_synth_config(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("malformed synth config " + path.string() + ": " + e.what());
  }
}

std::vector<std::string> default_base_vocab(const Resources& res) {
  Rng rng(kVocabSeed);
  std::set<std::string> seen;
  std::vector<std::string> vocab;
  while (vocab.size() < 400) {
    std::string w = pseudo_word(rng, 2, 3);
    if (known_word(w, res) || !seen.insert(w).second) continue;
    vocab.push_back(std::move(w));
  }
  return vocab;
}

std::string pseudo_entity(std::uint64_t seed) {
  Rng rng(seed);
  const std::string first = capitalize(pseudo_word(rng, 2, 2));
  const std::string last = capitalize(pseudo_word(rng, 2, 3));
  return first + " " + last;
}

Corpus generate(const std::vector<CommunityProfile>& profiles, std::uint64_t seed, const Resources& res,
                unsigned workers) {
  check_labels(profiles);
  const auto vocab = default_base_vocab(res);
  std::vector<Article> all;
  for (const auto& p : profiles) {
    auto articles = generate_community(p, seed, p.label, res, vocab, workers);
    std::move(articles.begin(), articles.end(), std::back_inserter(all));
  }
  return Corpus(std::move(all));
}

std::vector<WeightedName> rotated_entities(const CommunityProfile& profile, double cumulative_rotation,
                                           std::uint64_t seed) {
  const std::size_t n = profile.entities.size();
  const auto offset = static_cast<std::size_t>(std::llround(static_cast<double>(n) * cumulative_rotation));
  const std::uint64_t stream = mix_seed(seed, fnv1a(profile.label));
  std::vector<WeightedName> out;
  for (std::size_t slot = 0; slot < n; ++slot) {
    const std::size_t j = offset + slot;
    const std::string name =
        j < n ? profile.entities[j].name : pseudo_entity(mix_seed(stream, kFreshEntityStream + j));
    out.push_back({name, profile.entities[slot].weight});
  }
  return out;
}

std::vector<std::pair<std::string, Corpus>> generate_drift(const std::vector<CommunityProfile>& profiles,
                                                           const DriftSpec& drift, std::uint64_t seed,
                                                           const Resources& res, unsigned workers) {
  check_labels(profiles);
  drift.validate();
  for (const auto& slice : drift.slices) {
    for (const auto& [label, o] : slice.overrides) {
      if (std::none_of(profiles.begin(), profiles.end(), [&](const auto& p) { return p.label == label; })) {
        throw DataError("slice '" + slice.label + "' overrides unknown community '" + label + "'");
      }
    }
  }
  const auto vocab = default_base_vocab(res);
  std::vector<std::pair<std::string, Corpus>> out;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < drift.slices.size(); ++k) {
    const SliceSpec& slice = drift.slices[k];
    if (k > 0) cumulative += slice.rotation;
    std::vector<Article> all;
    for (const auto& base : profiles) {
      const auto o = slice.overrides.find(base.label);
      CommunityProfile p = o == slice.overrides.end() ? base : parse_profile(o->second, base);
      p.entities = rotated_entities(p, cumulative, seed);
      p.time_start = slice.start;
      p.time_end = slice.end;
      auto articles =
          generate_community(p, mix_seed(seed, k), base.label + "-" + slice.label, res, vocab, workers);
      std::move(articles.begin(), articles.end(), std::back_inserter(all));
    }
    out.emplace_back(slice.label, Corpus(std::move(all)));
  }
  return out;
}

}  // namespace newscomm
