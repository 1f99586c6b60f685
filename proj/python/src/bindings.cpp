#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "newscomm/cli.hpp"
#include "newscomm/corpus.hpp"
#include "newscomm/error.hpp"
#include "newscomm/experiment.hpp"
#include "newscomm/features.hpp"
#include "newscomm/metrics.hpp"
#include "newscomm/synth.hpp"
#include "newscomm/textproc.hpp"

namespace py = pybind11;
using namespace newscomm;

namespace {

py::dict article_dict(const Article& a) {
  py::dict d;
  d["id"] = a.id;
  d["title"] = a.title;
  d["body"] = a.body;
  d["source"] = a.source;
  d["url"] = a.url;
  d["community"] = a.community;
  d["timestamp"] = a.timestamp;
  d["score"] = a.score;
  d["num_comments"] = a.num_comments;
  return d;
}

py::list corpus_list(const Corpus& c) {
  py::list out;
  for (const Article& a : c) out.append(article_dict(a));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Community-interest prediction for news articles";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<UsageError>(m, "UsageError", base.ptr());

  m.def("auc", [](const std::vector<double>& s, const std::vector<int>& y) { return auc(s, y); },
        py::arg("scores"), py::arg("labels"), "Mann-Whitney ROC AUC; labels are 0/1.");

  m.def(
      "roc_curve",
      [](const std::vector<double>& s, const std::vector<int>& y) {
        const RocCurve c = roc_curve(s, y);
        std::vector<std::pair<double, double>> pts;
        for (const RocPoint& p : c.points) pts.emplace_back(p.fpr, p.tpr);
        return py::make_tuple(pts, c.auc);
      },
      py::arg("scores"), py::arg("labels"), "Returns ([(fpr, tpr), ...], auc).");

  m.def("auc_band", [](double a) { return std::string(auc_band(a)); });

  m.def(
      "tokenize",
      [](const std::string& text) {
        std::vector<std::string> out;
        for (const Token& t : tokenize(text)) out.push_back(t.text);
        return out;
      },
      py::arg("text"));

  m.def("count_syllables", [](const std::string& w) { return count_syllables(w); }, py::arg("word"));

  m.def(
      "entities",
      [](const std::string& text) {
        std::vector<std::pair<std::string, std::size_t>> out;
        for (const EntityMention& e : extract_entities(text, *Resources::builtin())) out.emplace_back(e.surface, e.count);
        return out;
      },
      py::arg("text"), "Named entities with counts, most frequent first.");

  m.def("feature_names", [] {
    const auto& names = feature_names();
    return std::vector<std::string>(names.begin(), names.end());
  });

  m.def(
      "group_spans",
      [] {
        std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
        for (const GroupSpan& s : kSchema) out.emplace_back(std::string(s.name), s.begin, s.size);
        return out;
      },
      "(name, first column, width) for each feature group.");

  m.def(
      "text_features",
      [](const std::string& title, const std::string& body, const std::string& groups) {
        const GroupSet g = parse_groups(groups);
        if (g.contains(FeatureGroup::Entity) || g.contains(FeatureGroup::EntitySlant) ||
            g.contains(FeatureGroup::Source)) {
          throw UsageError("text_features only computes style, complexity, bias and sentiment");
        }
        Article a;
        a.title = title;
        a.body = body;
        const FeatureVector v = extract(a, g, nullptr, *Resources::builtin());
        return std::vector<double>(v.values.begin(), v.values.end());
      },
      py::arg("title"), py::arg("body"), py::arg("groups") = "style,complexity,bias,sentiment",
      "98-column vector with unselected groups left at zero.");

  m.def(
      "synth",
      [](const std::string& config_json, std::uint64_t seed) {
        const SynthConfig cfg = parse_synth_config(nlohmann::json::parse(config_json));
        if (cfg.drift) {
          py::list slices;
          for (const auto& [label, c] :
               generate_drift(cfg.communities, *cfg.drift, seed, *Resources::builtin())) {
            slices.append(py::make_tuple(label, corpus_list(c)));
          }
          return py::object(slices);
        }
        return py::object(corpus_list(generate(cfg.communities, seed, *Resources::builtin())));
      },
      py::arg("config_json"), py::arg("seed"),
      "Generates articles from a synth config; drift configs give [(slice, articles)].");

  m.def("ingest", [](const std::string& path) { return corpus_list(ingest(path)); }, py::arg("path"));

  m.def(
      "pairwise",
      [](const std::string& path, const std::string& groups, std::uint64_t seed, std::vector<int> trees,
         std::size_t folds) {
        ExperimentConfig cfg;
        cfg.seed = seed;
        cfg.folds = folds;
        for (int t : trees) {
          ForestParams p;
          p.n_trees = t;
          cfg.grid.emplace_back(p);
        }
        std::vector<std::tuple<std::string, std::string, std::string, double>> rows;
        const auto cells = [&] {
          py::gil_scoped_release release;
          return pairwise_matrix(ingest(path), parse_groups(groups), cfg, *Resources::builtin());
        }();
        for (const ExperimentCell& c : cells) {
          rows.emplace_back(c.pair_a, c.pair_b, std::string(to_string(c.group)), c.curve.auc);
        }
        return rows;
      },
      py::arg("path"), py::arg("groups") = "all", py::arg("seed") = 0, py::arg("trees") = std::vector<int>{100},
      py::arg("folds") = 10, "Pairwise experiment rows (pair_a, pair_b, group, auc).");

  m.def(
      "cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "newscomm");
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in-process; returns (exit code, stdout, stderr).");
}
