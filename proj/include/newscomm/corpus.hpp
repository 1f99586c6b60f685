#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace newscomm {

/// One posted news article.
struct Article {
  std::string id;
  std::string title;
  std::string body;
  std::string source;  // lowercase host, e.g. "example.com"
  std::string url;
  std::string community;
  std::int64_t timestamp = 0;  // seconds since epoch, UTC
  std::int64_t score = 0;
  std::int64_t num_comments = 0;

  friend bool operator==(const Article&, const Article&) = default;
};

/// Half-open time window [start, end).
struct TimeSlice {
  std::string label;
  std::int64_t start = 0;
  std::int64_t end = 0;
};

enum class PopularityMetric { Score, Comments };
enum class OverlapKind { Article, Source, Entity };

PopularityMetric parse_metric(std::string_view name);
OverlapKind parse_overlap_kind(std::string_view name);
std::string_view to_string(OverlapKind kind);

/// Immutable, id-sorted collection of articles.
class Corpus {
 public:
  Corpus() = default;

  /// Sorts by id and validates invariants; throws DataError on duplicate
  /// ids, non-positive timestamps, or unnormalized sources.
  explicit Corpus(std::vector<Article> articles);

  const std::vector<Article>& articles() const noexcept { return articles_; }
  const std::set<std::string>& communities() const noexcept { return communities_; }
  std::size_t size() const noexcept { return articles_.size(); }
  bool empty() const noexcept { return articles_.empty(); }

  auto begin() const noexcept { return articles_.begin(); }
  auto end() const noexcept { return articles_.end(); }
  const Article& operator[](std::size_t i) const { return articles_[i]; }

  /// Articles whose community satisfies the predicate.
  Corpus restrict_to(const std::set<std::string>& communities) const;
  Corpus filter(const std::function<bool(const Article&)>& keep) const;
  std::size_t count(std::string_view community) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<Article> articles_;
  std::set<std::string> communities_;
};

/// Lowercases the host and strips scheme, path, port and query.
std::string normalize_source(std::string_view raw);

/// Identity key for article overlap: lowercase host, no scheme, no query
/// or fragment, no trailing slash.
std::string normalize_url(std::string_view url);

Corpus ingest(const std::filesystem::path& path);
Corpus parse_jsonl(std::istream& in);
void write_jsonl(const Corpus& corpus, std::ostream& out);
void write_jsonl(const Corpus& corpus, const std::filesystem::path& path);

Corpus filter_min_score(const Corpus& corpus, std::int64_t min_score = 1);

/// Per community, keeps the ceil(fraction * n) articles ranked highest by
/// the metric (ties: ascending id).
Corpus filter_top_fraction(const Corpus& corpus, PopularityMetric metric, double fraction);

/// One corpus per slice, in slice order. Articles outside every slice are
/// dropped.
std::vector<Corpus> slice(const Corpus& corpus, const std::vector<TimeSlice>& slices);

/// Square percentage matrix indexed by sorted community labels.
struct OverlapMatrix {
  std::vector<std::string> communities;
  std::vector<std::vector<double>> percent;
};

using EntityKeyFn = std::function<std::optional<std::string>(const Article&)>;

/// cell(i, j) = 100 * (articles of i and j whose key occurs in both
/// communities) / (articles of i and j). Articles without a key (entity
/// kind, no entity found) never count as shared.
OverlapMatrix overlap_matrix(const Corpus& corpus, OverlapKind kind,
                             const EntityKeyFn& entity_fn = {});

}  // namespace newscomm
