#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "relex/cli.h"
#include "relex/config.h"
#include "relex/corpus.h"
#include "relex/metrics.h"
#include "relex/synthetic.h"

using namespace relex;

namespace {

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::vector<const char*> argv = {"relex"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  int rc = cli_main(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old);
  if (out) *out = captured.str();
  return rc;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("cli_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({"eval"}) == 2);  // missing required --gold/--pred
}

TEST_CASE("gen-synthetic is deterministic and self-scores 1.0") {
  TempFile a("gen_a.txt"), b("gen_b.txt");
  CHECK(run_cli({"gen-synthetic", "--out", a.path, "--n", "12", "--seed", "9"}) == 0);
  CHECK(run_cli({"gen-synthetic", "--out", b.path, "--n", "12", "--seed", "9"}) == 0);
  std::ifstream fa(a.path), fb(b.path);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(!sa.str().empty());

  // Generated files parse cleanly.
  std::vector<Sentence> corpus = load_corpus(a.path);
  CHECK(corpus.size() == 12);

  // Gold scores perfectly against itself, with the exact machine line.
  std::string out;
  CHECK(run_cli({"eval", "--gold", a.path, "--pred", a.path}, &out) == 0);
  CHECK(out.find("ENT 1.0000 1.0000 1.0000 REL 1.0000 1.0000 1.0000") != std::string::npos);
}

TEST_CASE("different seeds differ") {
  TempFile a("gen_s1.txt"), b("gen_s2.txt");
  REQUIRE(run_cli({"gen-synthetic", "--out", a.path, "--n", "12", "--seed", "1"}) == 0);
  REQUIRE(run_cli({"gen-synthetic", "--out", b.path, "--n", "12", "--seed", "2"}) == 0);
  std::ifstream fa(a.path), fb(b.path);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() != sb.str());
}

TEST_CASE("train/predict/eval round trip on a tiny corpus") {
  TempFile corpus("roundtrip.txt"), cfg("roundtrip.cfg"), model("roundtrip.model"),
      pred("roundtrip.pred");
  REQUIRE(run_cli({"gen-synthetic", "--out", corpus.path, "--n", "6", "--seed", "4"}) == 0);
  {
    std::ofstream c(cfg.path);
    c << "train_file = " << corpus.path << "\n"
      << "test_file = " << corpus.path << "   # evaluate on train\n"
      << "model_out = " << model.path << "\n"
      << "model_in = " << model.path << "\n"
      << "pred_out = " << pred.path << "\n"
      << "word_dim = 8\npos_dim = 3\ndep_dim = 3\nlabel_dim = 3\n"
      << "seq_hidden = 6\ntree_hidden = 4\nent_hidden = 6\nrel_hidden = 4\n"
      << "epochs = 2\npretrain_epochs = 1\nseed = 5\n";
  }
  std::string out;
  CHECK(run_cli({"train", "--config", cfg.path}, &out) == 0);
  CHECK(out.find("epoch 0 ") != std::string::npos);
  CHECK(out.find("eps=") != std::string::npos);
  CHECK(out.find("dev_ent_f1=") != std::string::npos);
  CHECK(run_cli({"predict", "--config", cfg.path}, &out) == 0);
  CHECK(run_cli({"eval", "--gold", corpus.path, "--pred", pred.path}, &out) == 0);
  CHECK(out.find("ENT ") != std::string::npos);
  CHECK(out.find("REL ") != std::string::npos);

  // Overrides change behavior; an unknown key is a run error (exit 1).
  CHECK(run_cli({"train", "--config", cfg.path, "--set", "bogus_key=1"}) == 1);
  CHECK(run_cli({"train", "--config", cfg.path, "--set", "epochs=200"}) == 1);
}

TEST_CASE("inspect-path prints the structure") {
  TempFile corpus("inspect.txt");
  REQUIRE(run_cli({"gen-synthetic", "--out", corpus.path, "--n", "5", "--seed", "3"}) == 0);
  std::string out;
  CHECK(run_cli({"inspect-path", "--corpus", corpus.path, "--sentence", "1", "--first",
                 "1", "--second", "2"},
                &out) == 0);
  CHECK(out.find("kind=sptree") != std::string::npos);
  CHECK(out.find("ON_PATH") != std::string::npos);
  CHECK(run_cli({"inspect-path", "--corpus", corpus.path, "--sentence", "99", "--first",
                 "1", "--second", "2"}) == 1);
}

TEST_CASE("config parser details") {
  std::istringstream in(
      "# comment\n"
      "learning_rate = 0.002\n"
      "structure = subtree\n"
      "candidates = neg_sample\n"
      "pair = off\n"
      "negative_relation = OTHER\n");
  RunConfig cfg = parse_config(in);
  CHECK(cfg.train.learning_rate == 0.002);
  CHECK(cfg.model.structure == StructureKind::kSubTree);
  CHECK(cfg.model.candidates == CandidateMode::kNegSampling);
  CHECK_FALSE(cfg.model.pair_feature);
  CHECK(cfg.negative_relation == "OTHER");

  std::istringstream bad("nonsense = 1\n");
  CHECK_THROWS_WITH_AS(parse_config(bad), doctest::Contains("unknown key"),
                       std::invalid_argument);
  std::istringstream bad2("learning_rate abc\n");
  CHECK_THROWS_AS(parse_config(bad2), std::invalid_argument);

  RunConfig base;
  apply_override(base, "dropout=0.4");
  CHECK(base.train.dropout == 0.4);
  CHECK_THROWS_AS(apply_override(base, "dropout"), std::invalid_argument);
}

TEST_CASE("gradcheck subcommand passes at small dims") {
  std::string out;
  CHECK(run_cli({"gradcheck", "--dims", "small", "--seed", "7"}, &out) == 0);
}

TEST_CASE("pipeline mode trains, saves both models, and predicts from disk") {
  TempFile corpus("pipe.txt"), cfg("pipe.cfg"), model("pipe.model"), pred("pipe.pred");
  REQUIRE(run_cli({"gen-synthetic", "--out", corpus.path, "--n", "6", "--seed", "8"}) == 0);
  {
    std::ofstream c(cfg.path);
    c << "train_file = " << corpus.path << "\ntest_file = " << corpus.path << "\n"
      << "model_out = " << model.path << "\nmodel_in = " << model.path << "\n"
      << "pred_out = " << pred.path << "\n"
      << "word_dim = 8\npos_dim = 3\ndep_dim = 3\nlabel_dim = 3\n"
      << "seq_hidden = 6\ntree_hidden = 4\nent_hidden = 6\nrel_hidden = 4\n"
      << "epochs = 2\npretrain_epochs = 0\nseed = 5\nshared = false\n";
  }
  CHECK(run_cli({"train", "--config", cfg.path}) == 0);
  // Both parameter sets live in one container, prefixed.
  std::ifstream m(model.path);
  std::string text((std::istreambuf_iterator<char>(m)), std::istreambuf_iterator<char>());
  CHECK(text.find("a.emb.word ") != std::string::npos);
  CHECK(text.find("b.rel.Wh ") != std::string::npos);
  CHECK(run_cli({"predict", "--config", cfg.path}) == 0);
  std::vector<Sentence> out = load_corpus(pred.path, {false, true});
  CHECK(out.size() == 6);
}

TEST_CASE("semeval mode round trip through the CLI") {
  TempFile corpus("sem.txt"), cfg("sem.cfg"), model("sem.model"), pred("sem.pred");
  REQUIRE(run_cli({"gen-synthetic", "--out", corpus.path, "--n", "8", "--seed", "3",
                   "--mode", "semeval"}) == 0);
  {
    std::ofstream c(cfg.path);
    c << "train_file = " << corpus.path << "\ntest_file = " << corpus.path << "\n"
      << "model_out = " << model.path << "\nmodel_in = " << model.path << "\n"
      << "pred_out = " << pred.path << "\n"
      << "word_dim = 8\npos_dim = 3\ndep_dim = 3\nlabel_dim = 3\n"
      << "seq_hidden = 6\ntree_hidden = 4\nent_hidden = 6\nrel_hidden = 4\n"
      << "epochs = 3\npretrain_epochs = 0\nseed = 5\n"
      << "semeval = true\nnegative_relation = OTHER\n";
  }
  CHECK(run_cli({"train", "--config", cfg.path}) == 0);
  CHECK(run_cli({"predict", "--config", cfg.path}) == 0);
  std::string out;
  CHECK(run_cli({"eval", "--gold", corpus.path, "--pred", pred.path, "--semeval",
                 "--negative", "OTHER"},
                &out) == 0);
  CHECK(out.find("macro-F1:") != std::string::npos);
}
