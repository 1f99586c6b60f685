#pragma once

#include <cstdint>
#include <string>

#include "newscomm/corpus.hpp"
#include "newscomm/experiment.hpp"
#include "newscomm/resources.hpp"
#include "newscomm/synth.hpp"

namespace newscomm::testing {

inline Article make_article(std::string id, std::string community, std::string source = "x.com",
                            std::int64_t timestamp = 100, std::int64_t score = 1, std::string title = "",
                            std::string body = "") {
  Article a;
  a.id = std::move(id);
  a.community = std::move(community);
  a.source = std::move(source);
  a.url = "https://" + a.source + "/" + a.id;
  a.timestamp = timestamp;
  a.score = score;
  a.title = std::move(title);
  a.body = std::move(body);
  return a;
}

// One small forest config and 3 folds keep experiment tests quick.
inline ExperimentConfig fast_config(std::uint64_t seed = 1) {
  ExperimentConfig c;
  c.seed = seed;
  ForestParams p;
  p.n_trees = 15;
  p.max_depth = 8;
  c.grid = {p};
  c.folds = 3;
  c.community_floor = 10;
  return c;
}

inline CommunityProfile small_profile(std::string label, std::vector<std::string> sources, std::size_t n = 40) {
  CommunityProfile p;
  p.label = std::move(label);
  p.n_articles = n;
  for (auto& s : sources) p.sources.push_back({std::move(s), 1.0});
  p.entities = {{"Dorvan Kelts", 1.0}, {"Marisol Teague", 1.0}};
  p.lexicon_rates = {{"hedges", 0.02}, {"valence", 0.03}};
  p.min_sentences = 2;
  p.max_sentences = 4;
  return p;
}

// Communities separable by source only.
inline Corpus small_corpus(std::size_t communities = 3, std::size_t n = 40, std::uint64_t seed = 3) {
  std::vector<CommunityProfile> profiles;
  for (std::size_t i = 0; i < communities; ++i) {
    const std::string label(1, static_cast<char>('a' + i));
    profiles.push_back(small_profile(label, {label + "-news.com", label + "-daily.com"}, n));
  }
  return generate(profiles, seed, *Resources::builtin());
}

}  // namespace newscomm::testing
