#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "newscomm/corpus.hpp"
#include "newscomm/resources.hpp"

namespace newscomm {

struct WeightedName {
  std::string name;
  double weight = 1.0;
  friend bool operator==(const WeightedName&, const WeightedName&) = default;
};

/// Integer popularity draws: score = shift + floor(exp(mu + sigma * z)),
/// comments likewise with their own parameters. Independent of content.
struct ScoreModel {
  double mu = 2.0;
  double sigma = 1.0;
  std::int64_t shift = 0;
  double comments_mu = 1.5;
  double comments_sigma = 1.0;
};

/// Generative recipe for one community.
struct CommunityProfile {
  std::string label;
  std::size_t n_articles = 200;
  std::vector<WeightedName> sources;
  std::vector<WeightedName> entities;
  /// Lexicon name -> probability that a body word slot is drawn from it.
  std::map<std::string, double> lexicon_rates;
  /// In [-1, 1]: valence words are positive with probability (1 + bias) / 2.
  double valence_bias = 0.0;
  double stopword_rate = 0.3;
  double exclamation_rate = 0.0;
  double question_rate = 0.0;
  std::size_t min_sentences = 4, max_sentences = 8;
  std::size_t min_words = 8, max_words = 16;
  std::size_t entity_mentions = 3;
  std::size_t title_words = 8;
  std::int64_t time_start = 1420070400;  // 2015-01-01
  std::int64_t time_end = 1514764800;    // 2018-01-01
  ScoreModel score;
  std::vector<std::string> base_vocab;  // empty: the shared default pool

  /// Throws DataError on empty pools, rates outside [0, 1] or bad ranges.
  void validate() const;
};

struct SliceSpec {
  std::string label;
  std::int64_t start = 0;
  std::int64_t end = 0;
  /// Fraction of each entity pool replaced by fresh entities relative to
  /// the previous slice. Ignored for the first slice.
  double rotation = 0.0;
  /// Community label -> profile keys to override in this slice.
  std::map<std::string, nlohmann::json> overrides;
};

struct DriftSpec {
  std::vector<SliceSpec> slices;
  void validate() const;
};

struct SynthConfig {
  std::vector<CommunityProfile> communities;
  std::optional<DriftSpec> drift;
};

/// Reads a profile from JSON on top of `base`; unspecified keys keep the
/// base values. A missing label is only an error when base has none.
CommunityProfile parse_profile(const nlohmann::json& j, const CommunityProfile& base = {});
SynthConfig parse_synth_config(const nlohmann::json& j);
SynthConfig load_synth_config(const std::filesystem::path& path);

/// Shared filler vocabulary: pronounceable pseudo-words that appear in no
/// lexicon, tag table or gazetteer.
std::vector<std::string> default_base_vocab(const Resources& res);

/// Deterministic capitalized two-word pseudo-name.
std::string pseudo_entity(std::uint64_t seed);

Corpus generate(const std::vector<CommunityProfile>& profiles, std::uint64_t seed, const Resources& res,
                unsigned workers = 1);

/// One corpus per slice. Slice k draws entities from a window over a
/// per-community name sequence (the original pool followed by fresh
/// names) shifted by round(pool size * cumulative rotation).
std::vector<std::pair<std::string, Corpus>> generate_drift(const std::vector<CommunityProfile>& profiles,
                                                           const DriftSpec& drift, std::uint64_t seed,
                                                           const Resources& res, unsigned workers = 1);

/// Entity pool a profile uses in slice `k` of a drift run.
std::vector<WeightedName> rotated_entities(const CommunityProfile& profile, double cumulative_rotation,
                                           std::uint64_t seed);

}  // namespace newscomm
