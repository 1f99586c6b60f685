#include "newscomm/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "newscomm/corpus.hpp"
#include "newscomm/error.hpp"
#include "newscomm/experiment.hpp"
#include "newscomm/hierarchy.hpp"
#include "newscomm/report.hpp"
#include "newscomm/resources.hpp"
#include "newscomm/synth.hpp"

namespace newscomm {

namespace {

using nlohmann::ordered_json;

struct ResourceOptions {
  std::string lexicons;
  std::string gazetteer;

  std::shared_ptr<const Resources> load() const {
    std::string dir = lexicons;
    if (dir.empty()) {
      if (const char* env = std::getenv(kLexiconDirEnv); env != nullptr) dir = env;
    }
    if (dir.empty()) {
      if (!gazetteer.empty()) {
        throw UsageError("--gazetteer needs --lexicons or " + std::string(kLexiconDirEnv));
      }
      return Resources::builtin();
    }
    return Resources::load(dir, gazetteer.empty() ? std::nullopt
                                                  : std::optional<std::filesystem::path>(gazetteer));
  }
};

struct ModelOptions {
  std::optional<std::uint64_t> seed;
  std::string algorithm = "forest";
  std::vector<int> trees{100, 200};
  std::vector<int> depths{8, 16, 0};
  std::vector<int> min_leaf{1, 5};
  std::vector<double> l2{1e-4, 1e-3, 1e-2};
  double lr = 0.1;
  int epochs = 20;
  std::size_t folds = 10;
  double split = 0.7;
  std::size_t floor = 20;
  bool unbalanced = false;

  ExperimentConfig config(unsigned workers) const {
    if (!seed) throw UsageError("--seed is required for commands that train models");
    ExperimentConfig c;
    c.seed = *seed;
    c.algorithm = parse_algorithm(algorithm);
    c.folds = folds;
    c.train_fraction = split;
    c.community_floor = floor;
    c.balanced = !unbalanced;
    c.workers = workers;
    if (c.algorithm == Algorithm::Forest) {
      for (int t : trees) {
        for (int d : depths) {
          for (int m : min_leaf) {
            if (t < 1 || d < 0 || m < 1) throw UsageError("forest grid values must be positive (depth 0 = unlimited)");
            ForestParams p;
            p.n_trees = t;
            if (d > 0) p.max_depth = d;
            p.min_leaf = m;
            c.grid.emplace_back(p);
          }
        }
      }
    } else {
      for (double v : l2) {
        if (!(v >= 0.0) || !(lr > 0.0) || epochs < 1) throw UsageError("invalid linear hyperparameters");
        LinearParams p;
        p.l2 = v;
        p.learning_rate = lr;
        p.epochs = epochs;
        c.grid.emplace_back(p);
      }
    }
    if (c.grid.empty()) throw UsageError("hyperparameter grid is empty");
    return c;
  }
};

void add_resource_flags(CLI::App* cmd, ResourceOptions& r) {
  cmd->add_option("--lexicons", r.lexicons,
                  "Lexicon directory (default: $" + std::string(kLexiconDirEnv) + " or built-in lists)");
  cmd->add_option("--gazetteer", r.gazetteer, "Entity gazetteer file");
}

void add_model_flags(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("--seed", m.seed, "Random seed (required)");
  cmd->add_option("--algorithm", m.algorithm, "forest or linear")->capture_default_str();
  cmd->add_option("--trees", m.trees, "Forest sizes in the grid")->delimiter(',')->capture_default_str();
  cmd->add_option("--depths", m.depths, "Maximum depths in the grid, 0 for unlimited")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--min-leaf", m.min_leaf, "Minimum leaf sizes in the grid")->delimiter(',')->capture_default_str();
  cmd->add_option("--l2", m.l2, "Linear L2 strengths in the grid")->delimiter(',')->capture_default_str();
  cmd->add_option("--lr", m.lr, "Linear learning rate")->capture_default_str();
  cmd->add_option("--epochs", m.epochs, "Linear training epochs")->capture_default_str();
  cmd->add_option("--folds", m.folds, "Cross-validation folds")->capture_default_str();
  cmd->add_option("--split", m.split, "Training fraction of the held-out split")->capture_default_str();
  cmd->add_option("--floor", m.floor, "Minimum articles per community")->capture_default_str();
  cmd->add_flag("--unbalanced", m.unbalanced, "Train without balanced class weights");
}

void print(std::ostream& out, const ordered_json& j) { out << j.dump() << '\n'; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw DataError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw DataError("cannot write " + path.string());
}

ordered_json cells_summary(const std::vector<ExperimentCell>& cells) {
  ordered_json rows = ordered_json::array();
  for (const ExperimentCell& c : cells) {
    ordered_json r;
    r["pair"] = {c.pair_a, c.pair_b};
    r["group"] = std::string(to_string(c.group));
    if (!c.train_slice.empty()) r["slices"] = {c.train_slice, c.test_slice};
    if (c.fraction != 1.0) r["fraction"] = c.fraction;
    if (c.skipped) {
      r["skipped"] = c.note;
    } else {
      r["auc"] = c.curve.auc;
      r["band"] = std::string(auc_band(c.curve.auc));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

ordered_json report_summary(const char* command, const std::vector<ExperimentCell>& cells,
                            const std::filesystem::path& out_dir) {
  const ReportFiles files = emit_report(cells, out_dir);
  ordered_json j;
  j["command"] = command;
  j["cells"] = cells.size();
  j["csv"] = files.csv.string();
  j["svgs"] = files.svgs.size();
  j["results"] = cells_summary(cells);
  return j;
}

std::vector<TimeSlice> parse_slices(const std::vector<std::string>& specs) {
  std::vector<TimeSlice> out;
  for (const std::string& s : specs) {
    const auto a = s.find(':');
    const auto b = a == std::string::npos ? a : s.find(':', a + 1);
    if (b == std::string::npos) throw UsageError("slice '" + s + "' must look like label:start:end");
    TimeSlice t;
    t.label = s.substr(0, a);
    try {
      std::size_t used = 0;
      const std::string start = s.substr(a + 1, b - a - 1), end = s.substr(b + 1);
      t.start = std::stoll(start, &used);
      if (used != start.size()) throw std::invalid_argument("start");
      t.end = std::stoll(end, &used);
      if (used != end.size()) throw std::invalid_argument("end");
    } catch (const std::logic_error&) {
      throw UsageError("slice '" + s + "' has a non-integer bound");
    }
    if (t.label.empty()) throw UsageError("slice '" + s + "' has an empty label");
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Predict which news community an article belongs to from its content."};
  app.name(args.empty() ? "newscomm" : args.front());
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  unsigned workers = 1;
  ResourceOptions res_opts;
  ModelOptions model_opts;
  std::string corpus_path, out_path = "out";
  std::vector<std::string> groups_list{"all"};
  std::function<void()> action;

  auto corpus_arg = [&](CLI::App* c) { c->add_option("corpus", corpus_path, "Corpus JSONL file")->required(); };
  auto workers_flag = [&](CLI::App* c) {
    c->add_option("--workers", workers, "Worker threads (results do not depend on this)")->capture_default_str();
  };
  auto groups_flag = [&](CLI::App* c) {
    c->add_option("--groups", groups_list, "Feature groups, comma separated, or all: " + valid_group_names())
        ->delimiter(',')
        ->capture_default_str();
  };
  auto groups = [&] {
    std::string joined;
    for (const auto& g : groups_list) joined += (joined.empty() ? "" : ",") + g;
    return parse_groups(joined);
  };

  // validate
  std::int64_t min_score = 1;
  bool drop_low = false;
  auto* validate = app.add_subcommand("validate", "Ingest a corpus and report its shape");
  corpus_arg(validate);
  validate->add_flag("--drop-unpopular", drop_low, "Report counts after removing articles with low scores");
  validate->add_option("--min-score", min_score, "Score threshold used with --drop-unpopular")->capture_default_str();
  validate->callback([&] {
    action = [&] {
      Corpus corpus = ingest(corpus_path);
      const std::size_t raw = corpus.size();
      if (drop_low) corpus = filter_min_score(corpus, min_score);
      ordered_json j;
      j["command"] = "validate";
      j["articles"] = corpus.size();
      if (drop_low) j["dropped"] = raw - corpus.size();
      ordered_json per = ordered_json::object();
      std::set<std::string> sources;
      std::int64_t lo = 0, hi = 0;
      for (const Article& a : corpus) {
        sources.insert(a.source);
        lo = lo == 0 ? a.timestamp : std::min(lo, a.timestamp);
        hi = std::max(hi, a.timestamp);
      }
      for (const std::string& c : corpus.communities()) per[c] = corpus.count(c);
      j["communities"] = per;
      j["sources"] = sources.size();
      if (!corpus.empty()) j["time_range"] = {lo, hi};
      print(out, j);
    };
  });

  // overlap
  std::string kind_name = "article";
  auto* overlap = app.add_subcommand("overlap", "Community overlap matrix by article, source or entity");
  corpus_arg(overlap);
  overlap->add_option("--kind", kind_name, "article, source or entity")->capture_default_str();
  overlap->add_option("--out", out_path, "Output directory")->capture_default_str();
  add_resource_flags(overlap, res_opts);
  overlap->callback([&] {
    action = [&] {
      const OverlapKind kind = parse_overlap_kind(kind_name);
      const Corpus corpus = ingest(corpus_path);
      std::shared_ptr<const Resources> res;
      EntityKeyFn key;
      if (kind == OverlapKind::Entity) {
        res = res_opts.load();
        key = [res](const Article& a) -> std::optional<std::string> {
          auto e = most_frequent_entity(entity_text(a), *res);
          if (!e) return std::nullopt;
          return e->surface;
        };
      }
      const OverlapMatrix m = overlap_matrix(corpus, kind, key);
      std::string csv = "community";
      for (const auto& c : m.communities) csv += "," + csv_escape(c);
      csv += '\n';
      for (std::size_t i = 0; i < m.communities.size(); ++i) {
        csv += csv_escape(m.communities[i]);
        for (double v : m.percent[i]) csv += "," + format_double(v);
        csv += '\n';
      }
      const auto path = std::filesystem::path(out_path) / ("overlap_" + std::string(to_string(kind)) + ".csv");
      write_text(path, csv);
      ordered_json j;
      j["command"] = "overlap";
      j["kind"] = std::string(to_string(kind));
      j["communities"] = m.communities;
      j["percent"] = m.percent;
      j["csv"] = path.string();
      print(out, j);
    };
  });

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "Write feature vectors as CSV");
  corpus_arg(extract_cmd);
  groups_flag(extract_cmd);
  workers_flag(extract_cmd);
  add_resource_flags(extract_cmd, res_opts);
  extract_cmd->add_option("--out", out_path, "Output CSV file (default: out/features.csv)");
  extract_cmd->callback([&] {
    action = [&] {
      const GroupSet g = groups();
      const auto res = res_opts.load();
      const Corpus corpus = ingest(corpus_path);
      const auto profiles = profile_corpus(corpus, *res, workers);
      const Encoders enc = corpus.empty() ? Encoders{} : fit_encoders(profiles);
      const auto columns = g.columns();
      std::string csv = "id,community";
      for (std::size_t c : columns) csv += "," + feature_names()[c];
      csv += '\n';
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const FeatureVector v = assemble(profiles[i], g, &enc);
        csv += csv_escape(corpus[i].id) + "," + csv_escape(corpus[i].community);
        for (std::size_t c : columns) csv += "," + format_double(v.values[c]);
        csv += '\n';
      }
      const std::filesystem::path path =
          out_path == "out" ? std::filesystem::path("out") / "features.csv" : std::filesystem::path(out_path);
      write_text(path, csv);
      ordered_json j;
      j["command"] = "extract";
      j["rows"] = corpus.size();
      j["columns"] = columns.size();
      j["groups"] = g.to_string();
      j["csv"] = path.string();
      print(out, j);
    };
  });

  // train
  std::vector<std::string> pair;
  auto* train = app.add_subcommand("train", "Train a binary model for one community pair");
  corpus_arg(train);
  train->add_option("--pair", pair, "The two communities")->expected(2)->required();
  groups_flag(train);
  workers_flag(train);
  add_resource_flags(train, res_opts);
  add_model_flags(train, model_opts);
  train->add_option("--out", out_path, "Model file (default: out/model.json)");
  train->callback([&] {
    action = [&] {
      const GroupSet g = groups();
      const ExperimentConfig config = model_opts.config(workers);
      if (pair[0] == pair[1]) throw UsageError("--pair needs two different communities");
      const auto res = res_opts.load();
      const Corpus full = ingest(corpus_path);
      for (const auto& c : pair) {
        if (!full.communities().contains(c)) throw DataError("community '" + c + "' not found in corpus");
      }
      const Corpus corpus = full.restrict_to({pair[0], pair[1]});
      const std::string neg = std::min(pair[0], pair[1]), pos = std::max(pair[0], pair[1]);
      const auto profiles = profile_corpus(corpus, *res, workers);
      std::vector<int> y;
      for (const Article& a : corpus) y.push_back(a.community == pos ? 1 : 0);
      BinaryFit fit = fit_binary(profiles, y, g, config, workers);
      const double cv = fit.cv_scores.empty() ? 0.0 : *std::max_element(fit.cv_scores.begin(), fit.cv_scores.end());
      const TrainedModel model = make_trained_model(std::move(fit), neg, pos, g, corpus.size());
      const std::filesystem::path path =
          out_path == "out" ? std::filesystem::path("out") / "model.json" : std::filesystem::path(out_path);
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      model.save(path);
      ordered_json j;
      j["command"] = "train";
      j["pair"] = {neg, pos};
      j["groups"] = g.to_string();
      j["n_train"] = corpus.size();
      j["params"] = to_json(model.params);
      j["cv_auc"] = cv;
      j["model"] = path.string();
      print(out, j);
    };
  });

  // matrix
  auto* matrix = app.add_subcommand("matrix", "Pairwise community x feature-group ROC experiment");
  corpus_arg(matrix);
  groups_flag(matrix);
  workers_flag(matrix);
  add_resource_flags(matrix, res_opts);
  add_model_flags(matrix, model_opts);
  matrix->add_option("--out", out_path, "Output directory")->capture_default_str();
  matrix->callback([&] {
    action = [&] {
      const GroupSet g = groups();
      const ExperimentConfig config = model_opts.config(workers);
      const auto res = res_opts.load();
      const Corpus corpus = ingest(corpus_path);
      print(out, report_summary("matrix", pairwise_matrix(corpus, g, config, *res), out_path));
    };
  });

  // sweep
  std::vector<double> fractions{1.0, 0.5, 0.25};
  std::string metric_name = "score";
  auto* sweep = app.add_subcommand("sweep", "Repeat the matrix on the most popular fraction of each community");
  corpus_arg(sweep);
  sweep->add_option("--fractions", fractions, "Top fractions in (0, 1]")->delimiter(',')->capture_default_str();
  sweep->add_option("--metric", metric_name, "score or comments")->capture_default_str();
  groups_flag(sweep);
  workers_flag(sweep);
  add_resource_flags(sweep, res_opts);
  add_model_flags(sweep, model_opts);
  sweep->add_option("--out", out_path, "Output directory")->capture_default_str();
  sweep->callback([&] {
    action = [&] {
      const GroupSet g = groups();
      const ExperimentConfig config = model_opts.config(workers);
      const PopularityMetric metric = parse_metric(metric_name);
      const auto res = res_opts.load();
      const Corpus corpus = ingest(corpus_path);
      print(out, report_summary("sweep", threshold_sweep(corpus, fractions, metric, g, config, *res), out_path));
    };
  });

  // drift
  std::vector<std::string> slice_specs;
  auto* drift = app.add_subcommand("drift", "Train on the earliest time slice and test on every slice");
  corpus_arg(drift);
  drift->add_option("--slices", slice_specs, "Slices as label:start:end (half-open, epoch seconds)")
      ->delimiter(',')
      ->required();
  groups_flag(drift);
  workers_flag(drift);
  add_resource_flags(drift, res_opts);
  add_model_flags(drift, model_opts);
  drift->add_option("--out", out_path, "Output directory")->capture_default_str();
  drift->callback([&] {
    action = [&] {
      const GroupSet g = groups();
      const ExperimentConfig config = model_opts.config(workers);
      const auto slices = parse_slices(slice_specs);
      const auto res = res_opts.load();
      const Corpus corpus = ingest(corpus_path);
      const auto parts = slice(corpus, slices);
      std::vector<std::pair<std::string, Corpus>> labelled;
      for (std::size_t i = 0; i < slices.size(); ++i) labelled.emplace_back(slices[i].label, parts[i]);
      print(out, report_summary("drift", drift_run(labelled, g, config, *res), out_path));
    };
  });

  // cascade
  auto* cascade = app.add_subcommand("cascade", "Hierarchical binary cascade");
  cascade->require_subcommand(1);
  std::string spec_path, model_path, article_path;

  auto* ctrain = cascade->add_subcommand("train", "Train every stage of a cascade");
  corpus_arg(ctrain);
  ctrain->add_option("--spec", spec_path, "Cascade spec JSON (default: the built-in spec)");
  workers_flag(ctrain);
  add_resource_flags(ctrain, res_opts);
  add_model_flags(ctrain, model_opts);
  ctrain->add_option("--out", out_path, "Output directory for the trained cascade")->capture_default_str();
  ctrain->callback([&] {
    action = [&] {
      const ExperimentConfig config = model_opts.config(workers);
      const CascadeSpec spec = spec_path.empty() ? default_cascade_spec() : CascadeSpec::load(spec_path);
      const auto res = res_opts.load();
      const Corpus corpus = ingest(corpus_path);
      const Cascade c = train_cascade(spec, corpus, config, *res);
      c.save(out_path);
      ordered_json j;
      j["command"] = "cascade train";
      j["stages"] = ordered_json::array();
      for (std::size_t s = 0; s < c.models.size(); ++s) {
        j["stages"].push_back({{"name", spec.stages[s].name},
                               {"groups", c.models[s].groups.to_string()},
                               {"n_train", c.models[s].n_train},
                               {"params", to_json(c.models[s].params)}});
      }
      j["model"] = out_path;
      print(out, j);
    };
  });

  auto* cpredict = cascade->add_subcommand("predict", "Route articles through a trained cascade");
  cpredict->add_option("--model", model_path, "Trained cascade directory")->required();
  cpredict->add_option("--article", article_path, "JSONL file of articles")->required();
  workers_flag(cpredict);
  add_resource_flags(cpredict, res_opts);
  cpredict->callback([&] {
    action = [&] {
      const Cascade c = Cascade::load(model_path);
      const auto res = res_opts.load();
      const Corpus articles = ingest(article_path);
      const auto profiles = profile_corpus(articles, *res, workers);
      ordered_json preds = ordered_json::array();
      for (std::size_t i = 0; i < articles.size(); ++i) {
        const CascadePrediction p = c.predict(profiles[i]);
        ordered_json path = ordered_json::array();
        for (const RouteStep& s : p.path) {
          path.push_back({{"stage", s.stage}, {"probability", s.probability}, {"positive", s.positive}});
        }
        preds.push_back({{"id", articles[i].id}, {"label", p.label}, {"path", path}});
      }
      ordered_json j;
      j["command"] = "cascade predict";
      j["predictions"] = preds;
      print(out, j);
    };
  });

  auto* ceval = cascade->add_subcommand("eval", "Score a trained cascade on a labelled test corpus");
  ceval->add_option("--model", model_path, "Trained cascade directory")->required();
  corpus_arg(ceval);
  workers_flag(ceval);
  add_resource_flags(ceval, res_opts);
  ceval->callback([&] {
    action = [&] {
      const Cascade c = Cascade::load(model_path);
      const auto res = res_opts.load();
      const Corpus test = ingest(corpus_path);
      const CascadeEvaluation ev = evaluate_cascade(c, test, *res, workers);
      ordered_json j;
      j["command"] = "cascade eval";
      const nlohmann::json body = ev.to_json();
      for (const auto& [k, v] : body.items()) j[k] = v;
      print(out, j);
    };
  });

  // synth
  std::string profile_path;
  std::optional<std::uint64_t> synth_seed;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus from community profiles");
  synth->add_option("--profile", profile_path, "Synth config JSON")->required();
  synth->add_option("--seed", synth_seed, "Random seed (required)");
  workers_flag(synth);
  add_resource_flags(synth, res_opts);
  synth->add_option("--out", out_path, "Output JSONL file (default: out/corpus.jsonl)");
  synth->callback([&] {
    action = [&] {
      if (!synth_seed) throw UsageError("--seed is required for synth");
      const SynthConfig cfg = load_synth_config(profile_path);
      const auto res = res_opts.load();
      const std::filesystem::path path =
          out_path == "out" ? std::filesystem::path("out") / "corpus.jsonl" : std::filesystem::path(out_path);
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      ordered_json j;
      j["command"] = "synth";
      Corpus corpus;
      if (cfg.drift) {
        const auto slices = generate_drift(cfg.communities, *cfg.drift, *synth_seed, *res, workers);
        std::vector<Article> all;
        std::string spec;
        for (std::size_t k = 0; k < slices.size(); ++k) {
          all.insert(all.end(), slices[k].second.begin(), slices[k].second.end());
          const SliceSpec& s = cfg.drift->slices[k];
          spec += (spec.empty() ? "" : ",") + s.label + ":" + std::to_string(s.start) + ":" + std::to_string(s.end);
        }
        corpus = Corpus(std::move(all));
        j["slices"] = spec;
      } else {
        corpus = generate(cfg.communities, *synth_seed, *res, workers);
      }
      write_jsonl(corpus, path);
      j["articles"] = corpus.size();
      j["communities"] = std::vector<std::string>(corpus.communities().begin(), corpus.communities().end());
      j["corpus"] = path.string();
      print(out, j);
    };
  });

  // predict
  auto* predict = app.add_subcommand("predict", "Score articles with a trained pair model");
  predict->add_option("--model", model_path, "Model file from train")->required();
  predict->add_option("--article", article_path, "JSONL file of articles")->required();
  add_resource_flags(predict, res_opts);
  predict->callback([&] {
    action = [&] {
      const TrainedModel model = TrainedModel::load(model_path);
      const auto res = res_opts.load();
      const Corpus articles = ingest(article_path);
      ordered_json preds = ordered_json::array();
      for (const Article& a : articles) {
        const double p = model.predict_article(a, *res);
        preds.push_back({{"id", a.id},
                         {"probability", p},
                         {"label", p >= 0.5 ? model.positive_class : model.negative_class}});
      }
      ordered_json j;
      j["command"] = "predict";
      j["classes"] = {model.negative_class, model.positive_class};
      j["predictions"] = preds;
      print(out, j);
    };
  });

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 1;
  }

  try {
    if (action) action();
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace newscomm
