#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "newscomm/cli.hpp"
#include "newscomm/report.hpp"
#include "test_util.hpp"

using namespace newscomm;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
  nlohmann::json summary() const { return nlohmann::json::parse(out); }
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "newscomm");
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("newscomm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    corpus_ = (dir_ / "corpus.jsonl").string();
    write_jsonl(newscomm::testing::small_corpus(3, 24), fs::path(corpus_));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::vector<std::string> fast(std::vector<std::string> args) const {
    for (const char* a : {"--seed", "5", "--trees", "10", "--depths", "6", "--min-leaf", "1", "--folds", "3",
                          "--floor", "10"}) {
      args.emplace_back(a);
    }
    return args;
  }

  fs::path dir_;
  std::string corpus_;
};

}  // namespace

TEST_F(CliTest, ValidatePrintsCounts) {
  const CliResult r = run({"validate", corpus_});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.summary()["articles"], 72);
  EXPECT_EQ(r.summary()["communities"]["b"], 24);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  std::ofstream(dir_ / "bad.jsonl") << "{\"id\": \"x\"}\n";
  const CliResult bad = run({"validate", (dir_ / "bad.jsonl").string()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 1"), std::string::npos) << bad.err;
  EXPECT_EQ(run({"validate", (dir_ / "missing.jsonl").string()}).code, 2);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  const CliResult unknown_group = run(fast({"train", corpus_, "--pair", "a", "b", "--groups", "style,vibes"}));
  EXPECT_EQ(unknown_group.code, 1);
  EXPECT_NE(unknown_group.err.find("entity_slant"), std::string::npos) << unknown_group.err;
  const CliResult no_seed = run({"matrix", corpus_});
  EXPECT_EQ(no_seed.code, 1);
  EXPECT_NE(no_seed.err.find("--seed"), std::string::npos) << no_seed.err;
  EXPECT_EQ(run({"overlap", corpus_, "--kind", "vibes"}).code, 1);
  EXPECT_EQ(run({"validate"}).code, 1);
}

TEST_F(CliTest, HelpListsFlags) {
  const CliResult help = run({"matrix", "--help"});
  EXPECT_EQ(help.code, 0);
  for (const char* flag : {"--seed", "--workers", "--groups", "--trees", "--folds", "--out", "--lexicons"}) {
    EXPECT_NE(help.out.find(flag), std::string::npos) << flag;
  }
  const CliResult top = run({"--help"});
  EXPECT_EQ(top.code, 0);
  for (const char* cmd : {"validate", "overlap", "extract", "train", "matrix", "sweep", "drift", "cascade",
                          "synth", "predict"}) {
    EXPECT_NE(top.out.find(cmd), std::string::npos) << cmd;
  }
}

TEST_F(CliTest, MatrixWritesReport) {
  const auto out = dir_ / "m";
  const CliResult r = run(fast({"matrix", corpus_, "--groups", "source,complexity", "--out", out.string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_results_csv(out / "results.csv").size(), 6u);
  std::size_t svgs = 0;
  for (const auto& e : fs::directory_iterator(out)) svgs += e.path().extension() == ".svg";
  EXPECT_EQ(svgs, 3u);

  const auto again = dir_ / "m2";
  auto args = fast({"matrix", corpus_, "--groups", "source,complexity", "--out", again.string()});
  args.insert(args.end(), {"--workers", "3"});
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(slurp(out / "results.csv"), slurp(again / "results.csv"));
}

TEST_F(CliTest, TrainThenPredict) {
  const auto model = dir_ / "model.json";
  const CliResult t = run(fast({"train", corpus_, "--pair", "c", "a", "--groups", "source", "--out", model.string()}));
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(t.summary()["pair"], nlohmann::json({"a", "c"}));
  const CliResult p = run({"predict", "--model", model.string(), "--article", corpus_});
  ASSERT_EQ(p.code, 0) << p.err;
  const auto preds = p.summary()["predictions"];
  EXPECT_EQ(preds.size(), 72u);
  EXPECT_EQ(run({"predict", "--model", (dir_ / "nope.json").string(), "--article", corpus_}).code, 2);
  EXPECT_EQ(run(fast({"train", corpus_, "--pair", "a", "zzz"})).code, 2);
}

TEST_F(CliTest, OverlapAndExtract) {
  const CliResult o = run({"overlap", corpus_, "--kind", "source", "--out", dir_.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(fs::exists(dir_ / "overlap_source.csv"));
  const auto csv = dir_ / "f.csv";
  const CliResult e = run({"extract", corpus_, "--groups", "complexity", "--out", csv.string()});
  ASSERT_EQ(e.code, 0) << e.err;
  const std::string text = slurp(csv);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), 73u);
}

TEST_F(CliTest, SweepSkipsWithoutFailing) {
  const CliResult r = run(fast({"sweep", corpus_, "--groups", "source", "--fractions", "0.1", "--out",
                          (dir_ / "s").string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_results_csv(dir_ / "s" / "results.csv");
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_FALSE(rows[5].auc.has_value());
}

TEST_F(CliTest, SynthDriftAndCascade) {
  const auto profile = dir_ / "drift.json";
  std::ofstream(profile) << R"({
    "defaults": {"n_articles": 30, "sentences": [2, 3]},
    "communities": [
      {"label": "left", "sources": ["l.com"], "entities": ["Dorvan Kelts", "Marisol Teague"]},
      {"label": "right", "sources": ["r.com"], "entities": ["Halvor Brun", "Penric Vale"]}
    ],
    "drift": {"slices": [
      {"label": "y1", "start": 1420070400, "end": 1451606400},
      {"label": "y2", "start": 1451606400, "end": 1483228800, "rotation": 0.5}
    ]}
  })";
  const auto corpus = dir_ / "drift.jsonl";
  const CliResult s = run({"synth", "--profile", profile.string(), "--seed", "3", "--out", corpus.string()});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.summary()["articles"], 120);
  const std::string slices = s.summary()["slices"];
  EXPECT_EQ(run({"synth", "--profile", profile.string()}).code, 1);

  const CliResult d = run(fast({"drift", corpus.string(), "--slices", slices, "--groups", "source", "--out",
                          (dir_ / "d").string()}));
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(read_results_csv(dir_ / "d" / "results.csv").size(), 4u);

  const auto spec = dir_ / "spec.json";
  std::ofstream(spec) << R"({"stages": [{"name": "root", "positive": ["left"], "negative": ["right"],
                                         "groups": ["source"]}]})";
  const auto model = dir_ / "cascade";
  const CliResult ct = run(fast({"cascade", "train", corpus.string(), "--spec", spec.string(), "--out", model.string()}));
  ASSERT_EQ(ct.code, 0) << ct.err;
  const CliResult cp = run({"cascade", "predict", "--model", model.string(), "--article", corpus.string()});
  ASSERT_EQ(cp.code, 0) << cp.err;
  const CliResult ce = run({"cascade", "eval", "--model", model.string(), corpus.string()});
  ASSERT_EQ(ce.code, 0) << ce.err;
  EXPECT_GE(ce.summary()["accuracy"].get<double>(), 0.99);

  std::ofstream(spec) << R"({"stages": [{"name": "root", "positive": ["left"], "negative": ["nobody"],
                                         "groups": ["source"]}]})";
  EXPECT_EQ(run(fast({"cascade", "train", corpus.string(), "--spec", spec.string(), "--out", model.string()})).code,
            2);
}
