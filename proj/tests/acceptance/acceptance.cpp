// Runs the ten acceptance criteria and prints one PASS/FAIL line each.
// Exit status is non-zero when any criterion fails.
//
// Usage: acceptance <path to newscomm binary>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "newscomm/corpus.hpp"
#include "newscomm/experiment.hpp"
#include "newscomm/features.hpp"
#include "newscomm/hierarchy.hpp"
#include "newscomm/metrics.hpp"
#include "newscomm/model.hpp"
#include "newscomm/random.hpp"
#include "newscomm/resources.hpp"
#include "newscomm/synth.hpp"

namespace fs = std::filesystem;
using namespace newscomm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

const Resources& res() { return *Resources::builtin(); }

// Shared by the experiment criteria: a modest forest grid with 5 folds.
ExperimentConfig experiment_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.seed = seed;
  ForestParams deep, shallow;
  deep.n_trees = shallow.n_trees = 100;
  shallow.max_depth = 8;
  shallow.min_leaf = 5;
  c.grid = {deep, shallow};
  c.folds = 5;
  return c;
}

SynthConfig shipped(const char* name) {
  return parse_synth_config(nlohmann::json::parse(embedded_resource(std::string("configs/") + name)));
}

const ExperimentCell& find_cell(const std::vector<ExperimentCell>& cells, FeatureGroup g,
                                const std::string& train = "", const std::string& test = "",
                                const std::string& protocol = "") {
  for (const auto& c : cells) {
    if (c.group != g || c.train_slice != train || c.test_slice != test) continue;
    if (!protocol.empty() && c.params.value("protocol", "") != protocol) continue;
    return c;
  }
  throw std::runtime_error("missing cell for group " + std::string(to_string(g)));
}

// ---------------------------------------------------------------------------

Outcome auc_oracle() {
  const auto start = Clock::now();
  Rng rng(20240601);
  double worst = 0.0;
  for (int instance = 0; instance < 1000; ++instance) {
    const std::size_t n = 2 + rng.below(49);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = instance % 3 == 0 ? static_cast<double>(rng.below(5)) : rng.normal();
      y[i] = static_cast<int>(rng.below(2));
    }
    y[0] = 0;
    y[1] = 1;
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (y[i] != 1 || y[j] != 0) continue;
        pairs += 1;
        wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
      }
    }
    worst = std::max(worst, std::abs(roc_curve(s, y).auc - wins / pairs));
  }
  const double t = seconds_since(start);
  return {worst <= 1e-12 && t < 10.0, "max |trapezoid - pairwise| = " + std::to_string(worst) + ", " + fixed(t) + " s"};
}

Outcome schema() {
  const std::vector<std::size_t> expected{45, 7, 11, 1, 16, 17, 1};
  std::vector<std::size_t> widths;
  std::size_t next = 0;
  bool contiguous = true;
  for (const GroupSpan& s : kSchema) {
    widths.push_back(s.size);
    contiguous = contiguous && s.begin == next;
    next += s.size;
  }
  // The extractor must fill exactly the selected span and nothing else.
  Article a;
  a.id = "x";
  a.community = "c";
  a.source = "example.com";
  a.timestamp = 1500000000;
  a.title = "Officials said the plan would certainly work!";
  a.body = "Officials said the plan would certainly work! Critics argue it may fail, perhaps badly. "
           "\"We will see,\" said Maria Lopez of the Middle East desk.";
  const Encoders enc = fit_encoders(Corpus({a}), res());
  bool masked = true;
  for (const GroupSpan& s : kSchema) {
    const FeatureVector v = extract(a, GroupSet{s.group}, &enc, res());
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
      if ((c < s.begin || c >= s.begin + s.size) && v.values[c] != 0.0) masked = false;
    }
  }
  const bool ok = widths == expected && contiguous && next == kFeatureCount && feature_names().size() == 98 && masked;
  std::string w;
  for (auto x : widths) w += (w.empty() ? "" : "/") + std::to_string(x);
  return {ok, "spans " + w + ", total " + std::to_string(next)};
}

Outcome source_separation() {
  const auto start = Clock::now();
  CommunityProfile base;
  base.n_articles = 500;
  base.entities = {{"Dorvan Kelts", 1}, {"Marisol Teague", 1}, {"Halvor Brun", 1}};
  base.lexicon_rates = {{"hedges", 0.02}, {"valence", 0.03}};
  CommunityProfile a = base, b = base;
  a.label = "east";
  a.sources = {{"east-one.com", 2}, {"east-two.com", 1}, {"east-three.com", 1}};
  b.label = "west";
  b.sources = {{"west-one.com", 2}, {"west-two.com", 1}, {"west-three.com", 1}};
  const Corpus corpus = generate({a, b}, 31, res());
  // Full default protocol here: 12-config grid, 10 folds, 70/30 split.
  ExperimentConfig config;
  config.seed = 31;
  const auto cells = pairwise_matrix(corpus, GroupSet{FeatureGroup::Source}, config, res());
  const double auc = cells.at(0).curve.auc;
  const double t = seconds_since(start);
  return {auc >= 0.99 && t < 60.0, "source AUC " + fixed(auc) + ", " + fixed(t, 1) + " s"};
}

Outcome null_calibration() {
  const Corpus corpus = generate(shipped("synth_null.json").communities, 41, res());
  const auto cells = pairwise_matrix(corpus, GroupSet::all(), experiment_config(41), res());
  bool ok = true;
  std::string detail;
  for (const auto& c : cells) {
    ok = ok && c.curve.auc >= 0.40 && c.curve.auc <= 0.60;
    detail += std::string(detail.empty() ? "" : ", ") + std::string(to_string(c.group)) + " " + fixed(c.curve.auc);
  }
  const std::size_t n_test = cells.empty() ? 0 : cells.front().n_test;
  ok = ok && n_test == 300;
  return {ok, detail + " (n_test " + std::to_string(n_test) + ")"};
}

// Hedge and bias token shares counted directly from the text, without the
// feature pipeline: lowercase words of letters, apostrophes and hyphens,
// matched against the raw lexicon entries (multi-word entries included).
std::array<double, 2> planted_shares(const std::string& body) {
  std::vector<std::string> words;
  std::string cur;
  for (char ch : body + " ") {
    const unsigned char u = static_cast<unsigned char>(ch);
    if (std::isalpha(u) || ch == '\'' || ch == '-') {
      cur += static_cast<char>(std::tolower(u));
    } else if (!cur.empty()) {
      words.push_back(cur);
      cur.clear();
    }
  }
  std::array<double, 2> out{};
  const char* names[2] = {"hedges", "bias"};
  for (int k = 0; k < 2; ++k) {
    const auto& entries = res().lexicon(names[k]).entries();
    std::size_t hits = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      std::string phrase;
      for (std::size_t len = 1; len <= 4 && i + len <= words.size(); ++len) {
        phrase += (len > 1 ? " " : "") + words[i + len - 1];
        if (entries.count(phrase)) {
          ++hits;
          break;
        }
      }
    }
    out[static_cast<std::size_t>(k)] = words.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(words.size());
  }
  return out;
}

// Plain batch-gradient logistic regression on standardized inputs.
double logistic_oracle_auc(const std::vector<std::array<double, 2>>& x, const std::vector<int>& y,
                           const std::vector<std::size_t>& train, const std::vector<std::size_t>& test) {
  std::array<double, 2> mean{}, sd{};
  for (std::size_t i : train) {
    for (int k = 0; k < 2; ++k) mean[k] += x[i][k] / static_cast<double>(train.size());
  }
  for (std::size_t i : train) {
    for (int k = 0; k < 2; ++k) sd[k] += std::pow(x[i][k] - mean[k], 2) / static_cast<double>(train.size());
  }
  for (auto& v : sd) v = v > 0 ? std::sqrt(v) : 1.0;
  double w0 = 0, w1 = 0, w2 = 0;
  for (int iter = 0; iter < 2000; ++iter) {
    double g0 = 0, g1 = 0, g2 = 0;
    for (std::size_t i : train) {
      const double z1 = (x[i][0] - mean[0]) / sd[0], z2 = (x[i][1] - mean[1]) / sd[1];
      const double p = 1.0 / (1.0 + std::exp(-(w0 + w1 * z1 + w2 * z2)));
      g0 += p - y[i];
      g1 += (p - y[i]) * z1;
      g2 += (p - y[i]) * z2;
    }
    const double step = 0.5 / static_cast<double>(train.size());
    w0 -= step * g0;
    w1 -= step * g1;
    w2 -= step * g2;
  }
  std::vector<double> s;
  std::vector<int> labels;
  for (std::size_t i : test) {
    s.push_back(w1 * (x[i][0] - mean[0]) / sd[0] + w2 * (x[i][1] - mean[1]) / sd[1]);
    labels.push_back(y[i]);
  }
  return auc(s, labels);
}

Outcome planted_bias() {
  CommunityProfile base;
  base.n_articles = 300;
  base.sources = {{"shared-one.com", 1}, {"shared-two.com", 1}};
  base.entities = {{"Dorvan Kelts", 1}, {"Marisol Teague", 1}};
  CommunityProfile hi = base, lo = base;
  hi.label = "heavy";
  hi.lexicon_rates = {{"hedges", 0.08}, {"bias", 0.08}, {"valence", 0.03}};
  lo.label = "light";
  lo.lexicon_rates = {{"hedges", 0.01}, {"bias", 0.01}, {"valence", 0.03}};
  const Corpus corpus = generate({hi, lo}, 51, res());
  const ExperimentConfig config = experiment_config(51);

  std::vector<std::array<double, 2>> x;
  std::vector<int> y;
  for (const Article& a : corpus) {
    x.push_back(planted_shares(a.body));
    y.push_back(a.community == "light" ? 1 : 0);
  }
  const SplitIndices split = stratified_split(y, config.train_fraction, config.seed);
  const double oracle = logistic_oracle_auc(x, y, split.train, split.test);

  const auto cells = pairwise_matrix(corpus, GroupSet{FeatureGroup::Bias}, config, res());
  const double got = cells.at(0).curve.auc;
  return {oracle >= 0.90 && got >= 0.90, "bias AUC " + fixed(got) + ", logistic oracle " + fixed(oracle)};
}

Outcome drift() {
  const SynthConfig cfg = shipped("synth_drift.json");
  const auto slices = generate_drift(cfg.communities, *cfg.drift, 61, res());
  const auto cells =
      drift_run(slices, GroupSet{FeatureGroup::Entity, FeatureGroup::Source}, experiment_config(61), res());
  const std::string first = slices.front().first;
  std::vector<double> entity_cross;
  bool ok = true;
  std::string detail = "entity cross";
  for (const auto& [label, corpus] : slices) {
    entity_cross.push_back(find_cell(cells, FeatureGroup::Entity, first, label, "cross").curve.auc);
    detail += " " + fixed(entity_cross.back());
  }
  for (std::size_t k = 1; k < entity_cross.size(); ++k) ok = ok && entity_cross[k] < entity_cross[k - 1];
  detail += "; source cross-within";
  for (const auto& [label, corpus] : slices) {
    const double cross = find_cell(cells, FeatureGroup::Source, first, label, "cross").curve.auc;
    const double within = find_cell(cells, FeatureGroup::Source, label, label, "within").curve.auc;
    ok = ok && std::abs(cross - within) <= 0.05;
    detail += " " + fixed(cross) + "/" + fixed(within);
  }
  return {ok, detail};
}

Outcome balanced_weights_effect() {
  // 90/10 classes with overlapping Gaussian clouds in two columns.
  auto draw = [](std::size_t n_neg, std::size_t n_pos, std::uint64_t seed, FeatureMatrix& X, std::vector<int>& y) {
    Rng rng(seed);
    for (std::size_t i = 0; i < n_neg + n_pos; ++i) {
      const int label = i < n_neg ? 0 : 1;
      std::array<double, kFeatureCount> row{};
      row[0] = rng.normal() + label;
      row[1] = rng.normal() + label;
      X.push_back(row);
      y.push_back(label);
    }
  };
  FeatureMatrix Xtr, Xte;
  std::vector<int> ytr, yte;
  draw(900, 100, 71, Xtr, ytr);
  draw(900, 100, 72, Xte, yte);
  const std::vector<std::size_t> cols{0, 1};
  auto recall = [&](const Classifier& m) {
    std::size_t pos = 0, hit = 0;
    for (std::size_t i = 0; i < yte.size(); ++i) {
      if (yte[i] != 1) continue;
      ++pos;
      hit += predict_proba(m, Xte.row(i)) >= 0.5;
    }
    return static_cast<double>(hit) / static_cast<double>(pos);
  };
  ForestParams fp;
  fp.n_trees = 100;
  fp.max_depth = 6;
  fp.min_leaf = 10;
  fp.seed = 7;
  LinearParams lp;
  lp.seed = 7;
  bool ok = true;
  std::string detail;
  for (const ModelParams& p : {ModelParams(fp), ModelParams(lp)}) {
    const double bal = recall(train_classifier(Xtr, ytr, sample_weights(ytr, true), p, cols));
    const double raw = recall(train_classifier(Xtr, ytr, sample_weights(ytr, false), p, cols));
    ok = ok && bal > raw;
    detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(algorithm_of(p))) +
              " minority recall balanced " + fixed(bal) + " vs unweighted " + fixed(raw);
  }
  return {ok, detail};
}

Outcome cascade_consistency() {
  // Part 1: a one-stage cascade against the pairwise cell.
  const SynthConfig four = shipped("synth_four.json");
  const Corpus corpus = generate(four.communities, 81, res());
  const ExperimentConfig config = experiment_config(81);
  // bias1 and bias2 share lexicon rates, so this AUC is far from 1 and
  // an exact match is informative.
  const Corpus pair = corpus.restrict_to({"bias1", "bias2"});
  const auto cells = pairwise_matrix(pair, GroupSet{FeatureGroup::Bias}, config, res());
  CascadeStage stage;
  stage.name = "only";
  stage.positive = {"bias2"};
  stage.negative = {"bias1"};
  stage.groups = GroupSet{FeatureGroup::Bias};
  const auto [pair_train, pair_test] = split_corpus(pair, config.train_fraction, config.seed);
  const Cascade single = train_cascade(CascadeSpec{{stage}}, pair_train, config, res());
  const auto single_eval = evaluate_cascade(single, pair_test, res());
  const double cell_auc = cells.at(0).curve.auc;
  const double stage_auc = single_eval.stages.at(0).auc.value_or(-1.0);
  const bool equal = cell_auc == stage_auc;

  // Part 2: the shipped spec against a one-vs-rest baseline.
  const auto [train, test] = split_corpus(corpus, config.train_fraction, config.seed);
  const Cascade cascade = train_cascade(default_cascade_spec(), train, config, res());
  const double cascade_acc = evaluate_cascade(cascade, test, res()).accuracy;
  const FlatClassifier flat = train_flat(train, GroupSet::all(), config, res());
  const double flat_acc = flat_accuracy(flat, test, res());
  return {equal && cascade_acc >= flat_acc,
          "one-stage " + fixed(stage_auc, 6) + " vs pairwise " + fixed(cell_auc, 6) + "; cascade accuracy " +
              fixed(cascade_acc) + " vs flat " + fixed(flat_acc)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism(const std::string& binary) {
  const fs::path dir = fs::temp_directory_path() / "newscomm_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "four.json") << embedded_resource("configs/synth_four.json");
  auto sh = [&](const std::string& args) {
    const std::string cmd = "\"" + binary + "\" " + args + " > \"" + (dir / "log.txt").string() + "\" 2>&1";
    return std::system(cmd.c_str());
  };
  const std::string corpus = (dir / "corpus.jsonl").string();
  if (sh("synth --profile \"" + (dir / "four.json").string() + "\" --seed 9 --out \"" + corpus + "\"") != 0) {
    return {false, "synth failed: " + slurp(dir / "log.txt")};
  }
  const std::string common = "matrix \"" + corpus + "\" --seed 9 --trees 30 --depths 8 --folds 3 --groups all";
  if (sh(common + " --workers 1 --out \"" + (dir / "w1").string() + "\"") != 0 ||
      sh(common + " --workers 4 --out \"" + (dir / "w4").string() + "\"") != 0) {
    return {false, "matrix failed: " + slurp(dir / "log.txt")};
  }
  const std::string a = slurp(dir / "w1" / "results.csv");
  const std::string b = slurp(dir / "w4" / "results.csv");
  const auto rows = static_cast<std::size_t>(std::count(a.begin(), a.end(), '\n'));
  std::size_t svgs = 0;
  for (const auto& e : fs::directory_iterator(dir / "w1")) svgs += e.path().extension() == ".svg";
  fs::remove_all(dir);
  return {!a.empty() && a == b && rows == 43 && svgs == 6,
          std::to_string(rows - 1) + " rows, " + std::to_string(svgs) + " SVGs, CSVs " +
              (a == b ? "byte-identical" : "differ")};
}

Outcome overlap_properties() {
  auto art = [](std::string id, std::string community, std::string source) {
    Article a;
    a.id = std::move(id);
    a.community = std::move(community);
    a.source = std::move(source);
    a.url = "https://" + a.source + "/" + a.id;
    a.timestamp = 100;
    return a;
  };
  // A and B: 3 of their 8 articles sit on a source both use (y.com).
  const Corpus hand({art("a1", "A", "x.com"), art("a2", "A", "x.com"), art("a3", "A", "y.com"),
                     art("a4", "A", "y.com"), art("b1", "B", "y.com"), art("b2", "B", "z.com"),
                     art("b3", "B", "z.com"), art("b4", "B", "z.com"), art("c1", "C", "w.com"),
                     art("c2", "C", "w.com")});
  const OverlapMatrix m = overlap_matrix(hand, OverlapKind::Source);
  bool ok = m.percent[0][1] == 37.5 && m.percent[0][2] == 0.0 && m.percent[1][2] == 0.0;

  const Corpus synthetic = generate(shipped("synth_four.json").communities, 91, res());
  const auto& r = res();
  const EntityKeyFn key = [&r](const Article& a) -> std::optional<std::string> {
    const auto e = most_frequent_entity(entity_text(a), r);
    return e ? std::optional<std::string>(e->surface) : std::nullopt;
  };
  for (const OverlapMatrix& o : {m, overlap_matrix(synthetic, OverlapKind::Article),
                                 overlap_matrix(synthetic, OverlapKind::Source),
                                 overlap_matrix(synthetic, OverlapKind::Entity, key)}) {
    for (std::size_t i = 0; i < o.communities.size(); ++i) {
      ok = ok && o.percent[i][i] == 100.0;
      for (std::size_t j = 0; j < o.communities.size(); ++j) ok = ok && o.percent[i][j] == o.percent[j][i];
    }
  }
  return {ok, "A-B " + fixed(m.percent[0][1], 1) + "%, symmetric with 100% diagonal"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <newscomm binary>\n";
    return 2;
  }
  const std::string binary = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 AUC oracle equivalence", auc_oracle},
      {"2 feature schema conformance", schema},
      {"3 separation by source", source_separation},
      {"4 null calibration", null_calibration},
      {"5 planted-bias detection", planted_bias},
      {"6 drift phenomenon", drift},
      {"7 balanced-weights effect", balanced_weights_effect},
      {"8 cascade consistency", cascade_consistency},
      {"9 end-to-end determinism", [&] { return cli_determinism(binary); }},
      {"10 overlap-matrix properties", overlap_properties},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail << " ["
              << fixed(seconds_since(start), 1) << " s]" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
