#include "newscomm/resources.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "newscomm/error.hpp"

namespace newscomm {

namespace detail {
const std::map<std::string, std::string_view, std::less<>>& embedded_resources();
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string lexicon_file_name(std::string_view name) {
  return std::string(name) + (name == "valence" ? ".tsv" : ".txt");
}

std::map<std::string, PosTag, std::less<>> parse_closed_class(std::string_view text,
                                                              std::string_view origin) {
  std::map<std::string, PosTag, std::less<>> out;
  for (auto& [term, tag] : parse_tag_table(text, origin)) {
    const auto parsed = parse_pos_tag(tag);
    if (!parsed) throw DataError(std::string(origin) + ": unknown tag '" + tag + "' for " + term);
    out.emplace(term, *parsed);
  }
  return out;
}

std::map<std::string, bool, std::less<>> parse_irregular(std::string_view text,
                                                         std::string_view origin) {
  std::map<std::string, bool, std::less<>> out;
  for (auto& [term, tag] : parse_tag_table(text, origin)) {
    if (tag != "PAST" && tag != "VERB") {
      throw DataError(std::string(origin) + ": tag for " + term + " must be PAST or VERB");
    }
    out.emplace(term, tag == "PAST");
  }
  return out;
}

std::set<std::string, std::less<>> parse_gazetteer(std::string_view text) {
  std::set<std::string, std::less<>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string canonical;
    bool space = false;
    for (unsigned char c : line) {
      if (std::isspace(c)) {
        space = !canonical.empty();
        continue;
      }
      if (space) canonical.push_back(' ');
      space = false;
      canonical.push_back(static_cast<char>(std::tolower(c)));
    }
    if (!canonical.empty() && canonical.front() != '#') out.insert(std::move(canonical));
  }
  return out;
}

}  // namespace

std::string_view embedded_resource(std::string_view relative_path) {
  const auto& table = detail::embedded_resources();
  auto it = table.find(relative_path);
  if (it == table.end()) throw UsageError("no embedded resource " + std::string(relative_path));
  return it->second;
}

std::vector<std::string> embedded_resource_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : detail::embedded_resources()) names.push_back(name);
  return names;
}

Resources::Resources(std::map<std::string, Lexicon, std::less<>> lexicons,
                     std::map<std::string, PosTag, std::less<>> closed_class,
                     std::map<std::string, bool, std::less<>> irregular,
                     std::set<std::string, std::less<>> gazetteer)
    : lexicons_(std::move(lexicons)),
      closed_class_(std::move(closed_class)),
      irregular_(std::move(irregular)),
      gazetteer_(std::move(gazetteer)) {
  for (std::string_view name : kLexiconNames) {
    if (!lexicons_.contains(name)) throw DataError("missing lexicon " + std::string(name));
  }
}

std::shared_ptr<const Resources> Resources::builtin() {
  static const std::shared_ptr<const Resources> instance = [] {
    std::map<std::string, Lexicon, std::less<>> lexicons;
    for (std::string_view name : kLexiconNames) {
      const std::string rel = "lexicons/" + lexicon_file_name(name);
      lexicons.emplace(std::string(name), parse_lexicon(embedded_resource(rel), std::string(name), rel));
    }
    return std::make_shared<const Resources>(
        std::move(lexicons),
        parse_closed_class(embedded_resource("lexicons/closed_class.tsv"), "closed_class.tsv"),
        parse_irregular(embedded_resource("lexicons/irregular_verbs.tsv"), "irregular_verbs.tsv"),
        parse_gazetteer(embedded_resource("gazetteer.txt")));
  }();
  return instance;
}

std::shared_ptr<const Resources> Resources::load(const std::filesystem::path& lexicon_dir,
                                                 const std::optional<std::filesystem::path>& gazetteer) {
  if (!std::filesystem::is_directory(lexicon_dir)) {
    throw DataError("lexicon directory " + lexicon_dir.string() + " does not exist");
  }
  std::map<std::string, Lexicon, std::less<>> lexicons;
  for (std::string_view name : kLexiconNames) {
    lexicons.emplace(std::string(name),
                     load_lexicon(lexicon_dir / lexicon_file_name(name), std::string(name)));
  }

  const auto closed_path = lexicon_dir / "closed_class.tsv";
  auto closed = std::filesystem::exists(closed_path)
                    ? parse_closed_class(read_file(closed_path), closed_path.string())
                    : parse_closed_class(embedded_resource("lexicons/closed_class.tsv"), "closed_class.tsv");
  const auto irregular_path = lexicon_dir / "irregular_verbs.tsv";
  auto irregular = std::filesystem::exists(irregular_path)
                       ? parse_irregular(read_file(irregular_path), irregular_path.string())
                       : parse_irregular(embedded_resource("lexicons/irregular_verbs.tsv"),
                                         "irregular_verbs.tsv");

  std::set<std::string, std::less<>> gaz;
  if (gazetteer) {
    gaz = parse_gazetteer(read_file(*gazetteer));
  } else if (std::filesystem::exists(lexicon_dir / "gazetteer.txt")) {
    gaz = parse_gazetteer(read_file(lexicon_dir / "gazetteer.txt"));
  } else {
    gaz = parse_gazetteer(embedded_resource("gazetteer.txt"));
  }
  return std::make_shared<const Resources>(std::move(lexicons), std::move(closed),
                                           std::move(irregular), std::move(gaz));
}

std::shared_ptr<const Resources> Resources::from_environment() {
  if (const char* dir = std::getenv(kLexiconDirEnv); dir != nullptr && *dir != '\0') {
    return load(dir);
  }
  return builtin();
}

const Lexicon& Resources::lexicon(std::string_view name) const {
  auto it = lexicons_.find(name);
  if (it == lexicons_.end()) throw UsageError("unknown lexicon " + std::string(name));
  return it->second;
}

std::optional<PosTag> Resources::closed_class(std::string_view lower) const {
  if (auto it = closed_class_.find(lower); it != closed_class_.end()) return it->second;
  return std::nullopt;
}

std::optional<bool> Resources::irregular_past(std::string_view lower) const {
  if (auto it = irregular_.find(lower); it != irregular_.end()) return it->second;
  return std::nullopt;
}

bool Resources::in_gazetteer(std::string_view lower_surface) const {
  return gazetteer_.contains(lower_surface);
}

bool Resources::is_stopword(std::string_view lower) const {
  return lexicon("stopwords").contains(lower);
}

}  // namespace newscomm
