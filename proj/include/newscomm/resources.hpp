#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "newscomm/lexicon.hpp"
#include "newscomm/tags.hpp"

namespace newscomm {

/// Names of the word lists the feature extractor reads, one file each
/// (name + ".txt", or ".tsv" for valence) in a lexicon directory.
inline constexpr std::string_view kLexiconNames[] = {
    "bias",    "hedges",      "factives",  "implicatives", "certainty",
    "tentative", "quantifiers", "swear",   "assent",       "anger",
    "valence", "strong_subj", "weak_subj", "stopwords"};

/// Environment variable naming the default lexicon directory.
inline constexpr const char* kLexiconDirEnv = "NEWSCOMM_LEXICON_DIR";

/// Immutable bundle of every lexical resource used by textproc and
/// features. Shared read-only across threads.
class Resources {
 public:
  /// Lexicons compiled into the library from resources/.
  static std::shared_ptr<const Resources> builtin();

  /// Loads every list from `lexicon_dir`. closed_class.tsv and
  /// irregular_verbs.tsv fall back to the built-in tables when absent. The
  /// gazetteer comes from `gazetteer` if given, else lexicon_dir/gazetteer.txt
  /// if present, else the built-in one.
  static std::shared_ptr<const Resources> load(
      const std::filesystem::path& lexicon_dir,
      const std::optional<std::filesystem::path>& gazetteer = std::nullopt);

  /// Built-in resources unless the environment variable points elsewhere.
  static std::shared_ptr<const Resources> from_environment();

  const Lexicon& lexicon(std::string_view name) const;

  std::optional<PosTag> closed_class(std::string_view lower) const;
  /// True/false for known irregular past/non-past forms; nullopt if unknown.
  std::optional<bool> irregular_past(std::string_view lower) const;
  bool in_gazetteer(std::string_view lower_surface) const;
  bool is_stopword(std::string_view lower) const;

  const std::map<std::string, bool, std::less<>>& irregular_verbs() const { return irregular_; }

  Resources(std::map<std::string, Lexicon, std::less<>> lexicons,
            std::map<std::string, PosTag, std::less<>> closed_class,
            std::map<std::string, bool, std::less<>> irregular,
            std::set<std::string, std::less<>> gazetteer);

 private:
  std::map<std::string, Lexicon, std::less<>> lexicons_;
  std::map<std::string, PosTag, std::less<>> closed_class_;
  std::map<std::string, bool, std::less<>> irregular_;
  std::set<std::string, std::less<>> gazetteer_;
};

/// Text of a file compiled in from resources/ (e.g. "configs/cascade_default.json").
std::string_view embedded_resource(std::string_view relative_path);
std::vector<std::string> embedded_resource_names();

}  // namespace newscomm
