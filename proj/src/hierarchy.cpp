#include "newscomm/hierarchy.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "newscomm/error.hpp"
#include "newscomm/parallel.hpp"

namespace newscomm {

namespace {

std::string join(const std::set<std::string>& names, std::string_view sep) {
  std::string out;
  for (const std::string& n : names) {
    if (!out.empty()) out += sep;
    out += n;
  }
  return out;
}

std::string describe(const std::set<std::string>& names) { return "{" + join(names, ", ") + "}"; }

std::set<std::string> string_set(const nlohmann::json& j, const std::string& stage, const char* key) {
  if (!j.is_array()) throw DataError("stage '" + stage + "': '" + key + "' must be a list of communities");
  std::set<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string() || v.get<std::string>().empty()) {
      throw DataError("stage '" + stage + "': '" + key + "' entries must be non-empty strings");
    }
    if (!out.insert(v.get<std::string>()).second) {
      throw DataError("stage '" + stage + "': community '" + v.get<std::string>() + "' listed twice");
    }
  }
  return out;
}

}  // namespace

std::set<std::string> CascadeStage::reachable() const {
  std::set<std::string> out = positive;
  out.insert(negative.begin(), negative.end());
  return out;
}

void CascadeSpec::validate() const {
  if (stages.empty()) throw DataError("cascade spec has no stages");
  std::set<std::string> names;
  for (const CascadeStage& s : stages) {
    if (s.name.empty()) throw DataError("cascade stage without a name");
    if (!names.insert(s.name).second) throw DataError("duplicate stage name '" + s.name + "'");
    if (s.positive.empty() || s.negative.empty()) {
      throw DataError("stage '" + s.name + "': positive and negative sets must be non-empty");
    }
    for (const std::string& c : s.positive) {
      if (s.negative.contains(c)) {
        throw DataError("stage '" + s.name + "': community '" + c + "' is on both sides");
      }
    }
    if (!(s.threshold > 0.0 && s.threshold < 1.0)) {
      throw DataError("stage '" + s.name + "': threshold must lie in (0, 1)");
    }
    if (s.groups.empty()) throw DataError("stage '" + s.name + "': no feature groups");
  }

  std::vector<int> parents(stages.size(), 0);
  for (std::size_t s = 0; s < stages.size(); ++s) {
    for (const auto* branch : {&stages[s].positive, &stages[s].negative}) {
      if (branch->size() < 2) continue;
      std::vector<std::size_t> handlers;
      for (std::size_t t = 0; t < stages.size(); ++t) {
        if (stages[t].reachable() == *branch) handlers.push_back(t);
      }
      if (handlers.empty()) {
        throw DataError("stage '" + stages[s].name + "': branch " + describe(*branch) +
                        " is not split by any stage, so its communities are unreachable");
      }
      if (handlers.size() > 1) {
        throw DataError("stage '" + stages[s].name + "': branch " + describe(*branch) +
                        " is split by more than one stage");
      }
      if (handlers.front() <= s) {
        throw DataError("stage '" + stages[handlers.front()].name + "' must come after stage '" +
                        stages[s].name + "'");
      }
      ++parents[handlers.front()];
    }
  }
  for (std::size_t t = 1; t < stages.size(); ++t) {
    if (parents[t] == 0) throw DataError("stage '" + stages[t].name + "' is unreachable from the root");
  }
}

void CascadeSpec::validate(const std::set<std::string>& present) const {
  validate();
  const std::set<std::string> covered = communities();
  std::set<std::string> missing, absent;
  for (const std::string& c : present) {
    if (!covered.contains(c)) missing.insert(c);
  }
  for (const std::string& c : covered) {
    if (!present.contains(c)) absent.insert(c);
  }
  if (!missing.empty()) {
    throw DataError("communities unreachable in the cascade: " + join(missing, ", "));
  }
  if (!absent.empty()) throw DataError("cascade communities missing from the corpus: " + join(absent, ", "));
}

std::set<std::string> CascadeSpec::communities() const {
  return stages.empty() ? std::set<std::string>{} : stages.front().reachable();
}

std::optional<std::size_t> CascadeSpec::stage_for(const std::set<std::string>& branch) const {
  if (branch.size() < 2) return std::nullopt;
  for (std::size_t t = 0; t < stages.size(); ++t) {
    if (stages[t].reachable() == branch) return t;
  }
  return std::nullopt;
}

nlohmann::json CascadeSpec::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const CascadeStage& s : stages) {
    nlohmann::json groups = nlohmann::json::array();
    for (FeatureGroup g : s.groups.groups()) groups.push_back(std::string(newscomm::to_string(g)));
    out.push_back({{"name", s.name},
                   {"positive", s.positive},
                   {"negative", s.negative},
                   {"groups", groups},
                   {"threshold", s.threshold}});
  }
  return {{"stages", out}};
}

CascadeSpec CascadeSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("stages") || !j["stages"].is_array()) {
    throw DataError("cascade spec needs a 'stages' list");
  }
  CascadeSpec spec;
  for (const auto& js : j["stages"]) {
    if (!js.is_object()) throw DataError("cascade stage must be an object");
    CascadeStage s;
    if (!js.contains("name") || !js["name"].is_string()) throw DataError("cascade stage needs a 'name'");
    s.name = js["name"].get<std::string>();
    for (const char* key : {"positive", "negative", "groups"}) {
      if (!js.contains(key)) throw DataError("stage '" + s.name + "': missing '" + key + "'");
    }
    s.positive = string_set(js["positive"], s.name, "positive");
    s.negative = string_set(js["negative"], s.name, "negative");
    const auto& groups = js["groups"];
    try {
      if (groups.is_string()) {
        s.groups = parse_groups(groups.get<std::string>());
      } else {
        for (const std::string& g : string_set(groups, s.name, "groups")) s.groups.insert(parse_group(g));
      }
    } catch (const UsageError& e) {
      throw DataError("stage '" + s.name + "': " + e.what());
    }
    if (js.contains("threshold")) {
      if (!js["threshold"].is_number()) throw DataError("stage '" + s.name + "': threshold must be a number");
      s.threshold = js["threshold"].get<double>();
    }
    spec.stages.push_back(std::move(s));
  }
  spec.validate();
  return spec;
}

CascadeSpec CascadeSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open cascade spec " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("malformed cascade spec " + path.string() + ": " + e.what());
  }
}

CascadeSpec default_cascade_spec() {
  return CascadeSpec::from_json(nlohmann::json::parse(embedded_resource("configs/cascade_default.json")));
}

CascadePrediction Cascade::predict(const ArticleProfile& profile) const {
  CascadePrediction out;
  std::size_t s = 0;
  for (;;) {
    const CascadeStage& stage = spec.stages[s];
    const TrainedModel& model = models[s];
    const double p = model.predict_proba(assemble(profile, model.groups, &model.encoders).values);
    const bool positive = p >= stage.threshold;
    out.path.push_back({stage.name, p, positive});
    const std::set<std::string>& branch = positive ? stage.positive : stage.negative;
    const auto next = spec.stage_for(branch);
    if (!next) {
      out.label = *branch.begin();
      return out;
    }
    s = *next;
  }
}

CascadePrediction Cascade::predict(const Article& article, const Resources& res) const {
  return predict(profile_article(article, res));
}

void Cascade::save(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create cascade directory " + dir.string() + ": " + ec.message());
  {
    std::ofstream out(dir / "spec.json", std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / "spec.json").string());
    out << spec.to_json().dump(2) << '\n';
  }
  for (std::size_t i = 0; i < models.size(); ++i) {
    models[i].save(dir / ("stage_" + std::to_string(i) + ".json"));
  }
}

Cascade Cascade::load(const std::filesystem::path& dir) {
  Cascade c;
  c.spec = CascadeSpec::load(dir / "spec.json");
  for (std::size_t i = 0; i < c.spec.stages.size(); ++i) {
    c.models.push_back(TrainedModel::load(dir / ("stage_" + std::to_string(i) + ".json")));
  }
  return c;
}

Cascade train_cascade(const CascadeSpec& spec, const Corpus& corpus, const ExperimentConfig& config,
                      const Resources& res) {
  spec.validate(corpus.communities());
  const auto profiles = profile_corpus(corpus, res, config.workers);

  Cascade cascade;
  cascade.spec = spec;
  cascade.models.resize(spec.stages.size());
  const unsigned inner = spec.stages.size() > 1 ? 1 : config.workers;
  parallel_for(spec.stages.size(), config.workers, [&](std::size_t s) {
    const CascadeStage& stage = spec.stages[s];
    std::vector<ArticleProfile> train;
    std::vector<int> y;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const std::string& c = corpus[i].community;
      if (stage.positive.contains(c)) {
        y.push_back(1);
      } else if (stage.negative.contains(c)) {
        y.push_back(0);
      } else {
        continue;
      }
      train.push_back(profiles[i]);
    }
    BinaryFit fit = fit_binary(train, y, stage.groups, config, inner);
    cascade.models[s] =
        make_trained_model(std::move(fit), join(stage.negative, "+"), join(stage.positive, "+"), stage.groups,
                           train.size());
  });
  return cascade;
}

nlohmann::json CascadeEvaluation::to_json() const {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json comm = nlohmann::json::object();
  for (const auto& [name, s] : communities) {
    comm[name] = {{"support", s.support}, {"precision", opt(s.precision)}, {"recall", opt(s.recall)}};
  }
  nlohmann::json st = nlohmann::json::array();
  for (const StageScore& s : stages) st.push_back({{"stage", s.stage}, {"n", s.n}, {"auc", opt(s.auc)}});
  return {{"n", n}, {"accuracy", accuracy}, {"communities", comm}, {"stages", st}};
}

CascadeEvaluation evaluate_cascade(const Cascade& cascade, const Corpus& test, const Resources& res,
                                   unsigned workers) {
  if (test.empty()) throw DataError("cascade evaluation needs a non-empty test corpus");
  const std::set<std::string> known = cascade.spec.communities();
  for (const std::string& c : test.communities()) {
    if (!known.contains(c)) throw DataError("test community '" + c + "' is not part of the cascade");
  }
  const auto profiles = profile_corpus(test, res, workers);
  std::vector<CascadePrediction> preds(test.size());
  parallel_for(test.size(), workers, [&](std::size_t i) { preds[i] = cascade.predict(profiles[i]); });

  CascadeEvaluation ev;
  ev.n = test.size();
  std::map<std::string, std::size_t> predicted, correct;
  for (const std::string& c : known) ev.communities[c];
  std::unordered_map<std::string, std::size_t> stage_index;
  for (std::size_t s = 0; s < cascade.spec.stages.size(); ++s) stage_index[cascade.spec.stages[s].name] = s;
  std::vector<std::vector<double>> stage_scores(cascade.spec.stages.size());
  std::vector<std::vector<int>> stage_labels(cascade.spec.stages.size());

  std::size_t hits = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const std::string& truth = test[i].community;
    const std::string& label = preds[i].label;
    ++ev.communities[truth].support;
    ++predicted[label];
    if (label == truth) {
      ++hits;
      ++correct[truth];
    }
    for (const RouteStep& step : preds[i].path) {
      const std::size_t s = stage_index.at(step.stage);
      const CascadeStage& stage = cascade.spec.stages[s];
      if (!stage.reachable().contains(truth)) continue;
      stage_scores[s].push_back(step.probability);
      stage_labels[s].push_back(stage.positive.contains(truth) ? 1 : 0);
    }
    ev.predictions.push_back(label);
  }
  ev.accuracy = static_cast<double>(hits) / static_cast<double>(ev.n);
  for (auto& [name, s] : ev.communities) {
    if (predicted[name] > 0) {
      s.precision = static_cast<double>(correct[name]) / static_cast<double>(predicted[name]);
    }
    if (s.support > 0) s.recall = static_cast<double>(correct[name]) / static_cast<double>(s.support);
  }
  for (std::size_t s = 0; s < cascade.spec.stages.size(); ++s) {
    StageScore score;
    score.stage = cascade.spec.stages[s].name;
    score.n = stage_scores[s].size();
    const auto& labels = stage_labels[s];
    const bool both = std::find(labels.begin(), labels.end(), 1) != labels.end() &&
                      std::find(labels.begin(), labels.end(), 0) != labels.end();
    if (both) score.auc = auc(stage_scores[s], labels);
    ev.stages.push_back(std::move(score));
  }
  return ev;
}

std::string FlatClassifier::predict(const ArticleProfile& profile) const {
  std::size_t best = 0;
  double best_p = -1.0;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const double p = models[k].predict_proba(assemble(profile, models[k].groups, &models[k].encoders).values);
    if (p > best_p) {
      best_p = p;
      best = k;
    }
  }
  return labels.at(best);
}

FlatClassifier train_flat(const Corpus& corpus, GroupSet groups, const ExperimentConfig& config,
                          const Resources& res) {
  if (corpus.communities().size() < 2) throw DataError("flat baseline needs at least two communities");
  const auto profiles = profile_corpus(corpus, res, config.workers);
  FlatClassifier flat;
  flat.labels.assign(corpus.communities().begin(), corpus.communities().end());
  flat.models.resize(flat.labels.size());
  const unsigned inner = flat.labels.size() > 1 ? 1 : config.workers;
  parallel_for(flat.labels.size(), config.workers, [&](std::size_t k) {
    std::vector<int> y;
    y.reserve(corpus.size());
    for (const Article& a : corpus) y.push_back(a.community == flat.labels[k] ? 1 : 0);
    BinaryFit fit = fit_binary(profiles, y, groups, config, inner);
    flat.models[k] = make_trained_model(std::move(fit), "rest", flat.labels[k], groups, corpus.size());
  });
  return flat;
}

double flat_accuracy(const FlatClassifier& flat, const Corpus& test, const Resources& res, unsigned workers) {
  if (test.empty()) throw DataError("flat evaluation needs a non-empty test corpus");
  const auto profiles = profile_corpus(test, res, workers);
  std::vector<char> hit(test.size(), 0);
  parallel_for(test.size(), workers, [&](std::size_t i) { hit[i] = flat.predict(profiles[i]) == test[i].community; });
  return static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / static_cast<double>(test.size());
}

}  // namespace newscomm
