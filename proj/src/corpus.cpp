#include "newscomm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "newscomm/error.hpp"

namespace newscomm {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view strip_scheme(std::string_view s) {
  if (auto pos = s.find("://"); pos != std::string_view::npos) s.remove_prefix(pos + 3);
  return s;
}

constexpr std::string_view kRequiredFields[] = {"id",        "title", "body",
                                                "source",    "url",   "community",
                                                "timestamp", "score", "num_comments"};

std::string string_field(const nlohmann::json& row, const char* field, std::size_t line) {
  const auto& value = row.at(field);
  if (!value.is_string()) {
    throw DataError("line " + std::to_string(line) + ": field " + field + " must be a string");
  }
  return value.get<std::string>();
}

std::int64_t int_field(const nlohmann::json& row, const char* field, std::size_t line) {
  const auto& value = row.at(field);
  if (!value.is_number_integer()) {
    throw DataError("line " + std::to_string(line) + ": field " + field + " must be an integer");
  }
  return value.get<std::int64_t>();
}

}  // namespace

PopularityMetric parse_metric(std::string_view name) {
  if (name == "score") return PopularityMetric::Score;
  if (name == "comments" || name == "num_comments") return PopularityMetric::Comments;
  throw UsageError("unknown popularity metric '" + std::string(name) +
                   "' (expected score or comments)");
}

OverlapKind parse_overlap_kind(std::string_view name) {
  if (name == "article") return OverlapKind::Article;
  if (name == "source") return OverlapKind::Source;
  if (name == "entity") return OverlapKind::Entity;
  throw UsageError("unknown overlap kind '" + std::string(name) +
                   "' (expected article, source or entity)");
}

std::string_view to_string(OverlapKind kind) {
  switch (kind) {
    case OverlapKind::Article: return "article";
    case OverlapKind::Source: return "source";
    case OverlapKind::Entity: return "entity";
  }
  return "unknown";
}

Corpus::Corpus(std::vector<Article> articles) : articles_(std::move(articles)) {
  std::sort(articles_.begin(), articles_.end(),
            [](const Article& a, const Article& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < articles_.size(); ++i) {
    const Article& a = articles_[i];
    if (a.id.empty()) throw DataError("article with empty id");
    if (i > 0 && articles_[i - 1].id == a.id) throw DataError("duplicate article id '" + a.id + "'");
    if (a.timestamp <= 0) throw DataError("article '" + a.id + "': timestamp must be positive");
    if (a.source.empty() || a.source != normalize_source(a.source)) {
      throw DataError("article '" + a.id + "': source '" + a.source + "' is not a normalized domain");
    }
    if (a.community.empty()) throw DataError("article '" + a.id + "': empty community");
    communities_.insert(a.community);
  }
}

Corpus Corpus::restrict_to(const std::set<std::string>& communities) const {
  return filter([&](const Article& a) { return communities.contains(a.community); });
}

Corpus Corpus::filter(const std::function<bool(const Article&)>& keep) const {
  Corpus out;
  for (const Article& a : articles_) {
    if (keep(a)) {
      out.articles_.push_back(a);
      out.communities_.insert(a.community);
    }
  }
  return out;
}

std::size_t Corpus::count(std::string_view community) const {
  return static_cast<std::size_t>(std::count_if(
      articles_.begin(), articles_.end(), [&](const Article& a) { return a.community == community; }));
}

std::string normalize_source(std::string_view raw) {
  std::string_view s = strip_scheme(raw);
  s = s.substr(0, s.find_first_of("/?#"));
  if (auto at = s.rfind('@'); at != std::string_view::npos) s.remove_prefix(at + 1);
  if (auto colon = s.find(':'); colon != std::string_view::npos) s = s.substr(0, colon);
  return ascii_lower(s);
}

std::string normalize_url(std::string_view url) {
  std::string_view s = strip_scheme(url);
  s = s.substr(0, s.find_first_of("?#"));
  while (!s.empty() && s.back() == '/') s.remove_suffix(1);
  const auto slash = s.find('/');
  std::string host = ascii_lower(s.substr(0, slash));
  if (slash == std::string_view::npos) return host;
  return host + std::string(s.substr(slash));
}

Corpus parse_jsonl(std::istream& in) {
  std::vector<Article> articles;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError("line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    if (!row.is_object()) throw DataError("line " + std::to_string(line_no) + ": expected a JSON object");
    for (std::string_view field : kRequiredFields) {
      if (!row.contains(field)) {
        throw DataError("line " + std::to_string(line_no) + ": missing field " + std::string(field));
      }
    }
    Article a;
    a.id = string_field(row, "id", line_no);
    a.title = string_field(row, "title", line_no);
    a.body = string_field(row, "body", line_no);
    a.source = normalize_source(string_field(row, "source", line_no));
    a.url = string_field(row, "url", line_no);
    a.community = string_field(row, "community", line_no);
    a.timestamp = int_field(row, "timestamp", line_no);
    a.score = int_field(row, "score", line_no);
    a.num_comments = int_field(row, "num_comments", line_no);

    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (a.id.empty()) throw DataError(where + "empty id");
    if (!seen.insert(a.id).second) throw DataError(where + "duplicate id " + a.id);
    if (a.source.empty()) throw DataError(where + "empty source");
    if (a.community.empty()) throw DataError(where + "empty community");
    if (a.timestamp <= 0) throw DataError(where + "timestamp must be positive");
    if (a.num_comments < 0) throw DataError(where + "num_comments must be non-negative");
    articles.push_back(std::move(a));
  }
  return Corpus(std::move(articles));
}

Corpus ingest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  return parse_jsonl(in);
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const Article& a : corpus) {
    nlohmann::ordered_json row;
    row["id"] = a.id;
    row["title"] = a.title;
    row["body"] = a.body;
    row["source"] = a.source;
    row["url"] = a.url;
    row["community"] = a.community;
    row["timestamp"] = a.timestamp;
    row["score"] = a.score;
    row["num_comments"] = a.num_comments;
    out << row.dump() << '\n';
  }
}

void write_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_jsonl(corpus, out);
}

Corpus filter_min_score(const Corpus& corpus, std::int64_t min_score) {
  return corpus.filter([&](const Article& a) { return a.score >= min_score; });
}

Corpus filter_top_fraction(const Corpus& corpus, PopularityMetric metric, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw UsageError("fraction must be in (0, 1], got " + std::to_string(fraction));
  }
  auto value = [metric](const Article& a) {
    return metric == PopularityMetric::Score ? a.score : a.num_comments;
  };
  std::map<std::string, std::vector<const Article*>> by_community;
  for (const Article& a : corpus) by_community[a.community].push_back(&a);

  std::vector<Article> kept;
  for (auto& [community, members] : by_community) {
    std::sort(members.begin(), members.end(), [&](const Article* x, const Article* y) {
      if (value(*x) != value(*y)) return value(*x) > value(*y);
      return x->id < y->id;
    });
    const auto keep = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(members.size()) - 1e-9));
    for (std::size_t i = 0; i < keep && i < members.size(); ++i) kept.push_back(*members[i]);
  }
  return Corpus(std::move(kept));
}

std::vector<Corpus> slice(const Corpus& corpus, const std::vector<TimeSlice>& slices) {
  for (std::size_t i = 0; i < slices.size(); ++i) {
    if (slices[i].start >= slices[i].end) {
      throw UsageError("slice '" + slices[i].label + "' has start >= end");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (slices[i].start < slices[j].end && slices[j].start < slices[i].end) {
        throw UsageError("slices '" + slices[j].label + "' and '" + slices[i].label + "' overlap");
      }
    }
  }
  std::vector<Corpus> out;
  out.reserve(slices.size());
  for (const TimeSlice& s : slices) {
    out.push_back(corpus.filter(
        [&](const Article& a) { return s.start <= a.timestamp && a.timestamp < s.end; }));
  }
  return out;
}

OverlapMatrix overlap_matrix(const Corpus& corpus, OverlapKind kind, const EntityKeyFn& entity_fn) {
  if (kind == OverlapKind::Entity && !entity_fn) {
    throw UsageError("entity overlap requires an entity extractor");
  }
  OverlapMatrix m;
  m.communities.assign(corpus.communities().begin(), corpus.communities().end());
  const std::size_t n = m.communities.size();

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[m.communities[i]] = i;

  // Per community: key of each posted article (nullopt when keyless).
  std::vector<std::vector<std::optional<std::string>>> keys(n);
  for (const Article& a : corpus) {
    std::optional<std::string> key;
    switch (kind) {
      case OverlapKind::Article: key = normalize_url(a.url); break;
      case OverlapKind::Source: key = a.source; break;
      case OverlapKind::Entity: key = entity_fn(a); break;
    }
    keys[index.at(a.community)].push_back(std::move(key));
  }
  std::vector<std::unordered_set<std::string>> key_sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& k : keys[i]) {
      if (k) key_sets[i].insert(*k);
    }
  }

  m.percent.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    m.percent[i][i] = 100.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      auto shared = [&](const std::optional<std::string>& k) {
        return k && key_sets[i].contains(*k) && key_sets[j].contains(*k);
      };
      std::size_t hits = 0;
      for (const auto& k : keys[i]) hits += shared(k) ? 1 : 0;
      for (const auto& k : keys[j]) hits += shared(k) ? 1 : 0;
      const std::size_t total = keys[i].size() + keys[j].size();
      const double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(total);
      m.percent[i][j] = pct;
      m.percent[j][i] = pct;
    }
  }
  return m;
}

}  // namespace newscomm
