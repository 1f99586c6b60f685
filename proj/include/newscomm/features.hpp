#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "newscomm/corpus.hpp"
#include "newscomm/resources.hpp"
#include "newscomm/textproc.hpp"

namespace newscomm {

enum class FeatureGroup : std::uint8_t { Style, Complexity, Bias, Entity, Sentiment, EntitySlant, Source };

struct GroupSpan {
  FeatureGroup group;
  std::string_view name;
  std::size_t begin;
  std::size_t size;
};

inline constexpr std::size_t kFeatureCount = 98;
inline constexpr int kSchemaVersion = 1;
inline constexpr std::size_t kGroupCount = 7;

/// Column layout of every feature vector, in schema order.
inline constexpr std::array<GroupSpan, kGroupCount> kSchema = {{
    {FeatureGroup::Style, "style", 0, 45},
    {FeatureGroup::Complexity, "complexity", 45, 7},
    {FeatureGroup::Bias, "bias", 52, 11},
    {FeatureGroup::Entity, "entity", 63, 1},
    {FeatureGroup::Sentiment, "sentiment", 64, 16},
    {FeatureGroup::EntitySlant, "entity_slant", 80, 17},
    {FeatureGroup::Source, "source", 97, 1},
}};

constexpr bool schema_is_contiguous() {
  std::size_t next = 0;
  for (const GroupSpan& s : kSchema) {
    if (s.begin != next) return false;
    next += s.size;
  }
  return next == kFeatureCount;
}
static_assert(schema_is_contiguous(), "feature schema must tile [0, 98)");

constexpr const GroupSpan& span_of(FeatureGroup g) { return kSchema[static_cast<std::size_t>(g)]; }
constexpr std::string_view to_string(FeatureGroup g) { return span_of(g).name; }

/// Set of feature groups, iterated in schema order.
class GroupSet {
 public:
  constexpr GroupSet() = default;
  constexpr GroupSet(std::initializer_list<FeatureGroup> groups) {
    for (FeatureGroup g : groups) insert(g);
  }
  static constexpr GroupSet all() {
    GroupSet s;
    s.bits_ = (1u << kGroupCount) - 1;
    return s;
  }

  constexpr void insert(FeatureGroup g) { bits_ |= 1u << static_cast<unsigned>(g); }
  constexpr bool contains(FeatureGroup g) const { return (bits_ >> static_cast<unsigned>(g)) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr unsigned bits() const { return bits_; }

  std::vector<FeatureGroup> groups() const;
  /// Column indices covered by the selected groups, ascending.
  std::vector<std::size_t> columns() const;
  /// Comma-joined names in schema order, e.g. "bias,entity".
  std::string to_string() const;

  friend constexpr bool operator==(GroupSet, GroupSet) = default;

 private:
  unsigned bits_ = 0;
};

FeatureGroup parse_group(std::string_view name);
/// Comma-separated names, or "all".
GroupSet parse_groups(std::string_view list);
std::string valid_group_names();

/// Column names for CSV output, length 98.
const std::array<std::string, kFeatureCount>& feature_names();

/// Maps strings to ids 1..n in sorted key order; 0 means unknown.
class LabelEncoder {
 public:
  LabelEncoder() = default;
  explicit LabelEncoder(std::string name) : name_(std::move(name)) {}

  /// Assigns ids to the distinct keys in sorted order and freezes.
  static LabelEncoder fit(std::string name, std::vector<std::string> keys);

  const std::string& name() const noexcept { return name_; }
  const std::map<std::string, int, std::less<>>& table() const noexcept { return table_; }
  int next_id() const noexcept { return next_id_; }
  int id(std::string_view key) const;

  nlohmann::json to_json() const;
  static LabelEncoder from_json(const nlohmann::json& j);

  friend bool operator==(const LabelEncoder&, const LabelEncoder&) = default;

 private:
  std::string name_;
  std::map<std::string, int, std::less<>> table_;
  int next_id_ = 1;
};

struct Encoders {
  LabelEncoder source{"source"};
  LabelEncoder entity{"entity"};
  friend bool operator==(const Encoders&, const Encoders&) = default;
};

struct FeatureVector {
  std::array<double, kFeatureCount> values{};
  GroupSet mask;
  int schema_version = kSchemaVersion;

  std::span<const double> group(FeatureGroup g) const {
    const GroupSpan& s = span_of(g);
    return std::span<const double>(values).subspan(s.begin, s.size);
  }
};

/// Per-group extractors. Title features precede body features within a group.
std::array<double, 45> style_features(std::string_view title, std::string_view body, const Resources& res);
std::array<double, 7> complexity_features(std::string_view title, std::string_view body, const Resources& res);
std::array<double, 11> bias_features(std::string_view title, std::string_view body, const Resources& res);
std::array<double, 16> sentiment_features(std::string_view title, std::string_view body, const Resources& res);
double entity_feature(const Article& article, const LabelEncoder& entities, const Resources& res);
std::array<double, 17> entity_slant_features(const Article& article, const LabelEncoder& entities,
                                             const Resources& res);
double source_feature(const Article& article, const LabelEncoder& sources);

/// Text used for entity extraction: title and body as consecutive sentences.
std::string entity_text(const Article& article);

/// Everything about an article that does not depend on fitted encoders.
/// Computing this once per article lets experiments refit encoders per
/// split without re-running the NLP pipeline.
struct ArticleProfile {
  std::array<double, kFeatureCount> text_values{};  // entity/source slots unset
  std::optional<std::string> entity;
  std::string source;
};

ArticleProfile profile_article(const Article& article, const Resources& res);
std::vector<ArticleProfile> profile_corpus(const Corpus& corpus, const Resources& res, unsigned workers = 1);

FeatureVector assemble(const ArticleProfile& profile, GroupSet groups, const Encoders* encoders);

/// Throws UsageError when an encoder-backed group is selected without encoders.
FeatureVector extract(const Article& article, GroupSet groups, const Encoders* encoders, const Resources& res);

Encoders fit_encoders(std::span<const ArticleProfile> train);
Encoders fit_encoders(const Corpus& train, const Resources& res);

/// Row-major n x 98 matrix.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::size_t rows) : rows_(rows), data_(rows * kFeatureCount, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * kFeatureCount, kFeatureCount}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * kFeatureCount, kFeatureCount};
  }
  double at(std::size_t i, std::size_t j) const { return data_[i * kFeatureCount + j]; }
  double& at(std::size_t i, std::size_t j) { return data_[i * kFeatureCount + j]; }

  void push_back(std::span<const double> values);
  FeatureMatrix subset(std::span<const std::size_t> indices) const;

 private:
  std::size_t rows_ = 0;
  std::vector<double> data_;
};

FeatureMatrix assemble_matrix(std::span<const ArticleProfile> profiles, GroupSet groups,
                              const Encoders* encoders);

}  // namespace newscomm
