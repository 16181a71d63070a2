#include "relex/cli.h"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "relex/config.h"
#include "relex/gradcheck.h"
#include "relex/metrics.h"
#include "relex/optimizer.h"
#include "relex/synthetic.h"
#include "relex/training.h"

namespace relex {

namespace {

RunConfig resolve_config(const std::string& config_path,
                         const std::vector<std::string>& overrides) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
  for (const std::string& o : overrides) apply_override(cfg, o);
  return cfg;
}

void require_path(const std::string& value, const char* key) {
  if (value.empty()) {
    throw std::runtime_error(std::string("config key '") + key + "' is required");
  }
  std::ifstream probe(value);
  if (!probe) throw std::runtime_error(std::string(key) + ": cannot open " + value);
}

Vocabulary vocab_from_config(const RunConfig& cfg, std::vector<Sentence>* train_out) {
  require_path(cfg.train_file, "train_file");
  ParseOptions popts;
  popts.require_entity_args = !cfg.model.semeval;
  std::vector<Sentence> train = load_corpus(cfg.train_file, popts);
  Vocabulary vocab = build_vocab(train, cfg.train.min_word_freq, cfg.negative_relation);
  if (train_out) *train_out = std::move(train);
  return vocab;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides) {
  RunConfig cfg = resolve_config(config_path, overrides);
  if (cfg.model_out.empty()) throw std::runtime_error("config key 'model_out' is required");
  std::vector<Sentence> train;
  Vocabulary vocab = vocab_from_config(cfg, &train);
  std::vector<Sentence> dev;
  if (!cfg.dev_file.empty()) {
    ParseOptions popts;
    popts.require_entity_args = !cfg.model.semeval;
    dev = load_corpus(cfg.dev_file, popts);
  }
  validate_ranges(cfg.train);

  auto init_vectors = [&](Model& model) {
    if (cfg.vectors_file.empty()) return;
    std::ifstream in(cfg.vectors_file);
    if (!in) throw std::runtime_error("vectors_file: cannot open " + cfg.vectors_file);
    int covered = load_word_vectors(in, model.vocab(), model.tables().word->value);
    std::cout << "word vectors: " << covered << "/" << model.vocab().words.size()
              << " vocabulary rows initialized\n";
  };
  TrainingRun run =
      run_training(cfg.model, cfg.train, vocab, train, dev, &std::cout, init_vectors);
  std::ofstream out(cfg.model_out);
  if (!out) throw std::runtime_error("model_out: cannot write " + cfg.model_out);
  if (run.rel_model) {
    save_params(out, {{"a.", &run.model->store()}, {"b.", &run.rel_model->store()}});
  } else {
    run.model->save(out);
  }
  std::cout << "model written to " << cfg.model_out << "\n";
  return 0;
}

struct LoadedModels {
  std::unique_ptr<Model> model;
  std::unique_ptr<Model> rel_model;
};

LoadedModels load_models(const RunConfig& cfg, const Vocabulary& vocab) {
  require_path(cfg.model_in, "model_in");
  LoadedModels out;
  std::mt19937 rng(cfg.train.seed);
  out.model = std::make_unique<Model>(cfg.model, vocab, rng);
  std::ifstream in(cfg.model_in);
  if (cfg.train.shared) {
    out.model->load(in);
  } else {
    out.rel_model = std::make_unique<Model>(cfg.model, vocab, rng);
    load_params(in, {{"a.", &out.model->store()}, {"b.", &out.rel_model->store()}});
  }
  return out;
}

int cmd_predict(const std::string& config_path, const std::vector<std::string>& overrides) {
  RunConfig cfg = resolve_config(config_path, overrides);
  if (cfg.pred_out.empty()) throw std::runtime_error("config key 'pred_out' is required");
  require_path(cfg.test_file, "test_file");
  Vocabulary vocab = vocab_from_config(cfg, nullptr);
  ParseOptions popts;
  popts.require_entity_args = !cfg.model.semeval;
  std::vector<Sentence> test = load_corpus(cfg.test_file, popts);
  LoadedModels models = load_models(cfg, vocab);
  std::vector<Sentence> pred =
      predicted_corpus(*models.model, models.rel_model.get(), test);
  std::ofstream out(cfg.pred_out);
  if (!out) throw std::runtime_error("pred_out: cannot write " + cfg.pred_out);
  write_corpus(out, pred);
  std::cout << "predictions written to " << cfg.pred_out << "\n";
  return 0;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path, bool semeval,
             bool with_macro, const std::string& negative_relation) {
  ParseOptions gold_opts;
  gold_opts.require_entity_args = !semeval;
  ParseOptions pred_opts;
  pred_opts.require_entity_args = false;
  pred_opts.repair_tags = true;
  std::vector<Sentence> gold = load_corpus(gold_path, gold_opts);
  std::vector<Sentence> pred = load_corpus(pred_path, pred_opts);
  MetricReport report = score_corpus(gold, pred, semeval, negative_relation,
                                     with_macro || semeval);
  std::cout << format_report(report);
  std::cout << machine_line(report) << "\n";
  return 0;
}

int cmd_gradcheck(const std::string& dims, unsigned seed) {
  bool large = dims == "medium";
  std::vector<FdReport> reports = gradcheck_suite(seed, large);
  bool ok = true;
  double total = 0.0;
  for (const FdReport& r : reports) {
    bool pass = r.ok(1e-4);
    ok = ok && pass;
    total += r.seconds;
    std::printf("%-32s %s  max_rel_err=%.3g  elements=%ld  (%.2fs)\n", r.name.c_str(),
                pass ? "ok" : "FAIL", r.max_rel, r.checked, r.seconds);
    if (!pass) std::printf("  worst element: %s\n", r.worst.c_str());
  }
  std::printf("gradcheck %s in %.2fs\n", ok ? "passed" : "FAILED", total);
  return ok ? 0 : 1;
}

int cmd_inspect_path(const std::string& corpus_path, int sentence_no, int first,
                     int second, const std::string& kind_name) {
  std::vector<Sentence> corpus = load_corpus(corpus_path);
  if (sentence_no < 1 || sentence_no > static_cast<int>(corpus.size())) {
    throw std::runtime_error("sentence " + std::to_string(sentence_no) +
                             " out of range (corpus has " +
                             std::to_string(corpus.size()) + ")");
  }
  const Sentence& sent = corpus[static_cast<size_t>(sentence_no) - 1];
  DepTree tree = validate_tree(sent);
  StructureKind kind = parse_structure_kind(kind_name);
  PathStructure ps = extract_structure(tree, first, second, kind);
  auto word = [&](int idx) {
    return std::to_string(idx) + "(" + sent.tokens[static_cast<size_t>(idx) - 1].form + ")";
  };
  std::cout << "sentence " << sentence_no << ":";
  for (const Token& t : sent.tokens) std::cout << " " << t.form;
  std::cout << "\nkind=" << structure_kind_name(kind) << " anchor=" << word(ps.anchor)
            << " root=" << word(ps.root) << " targets=" << word(ps.first) << ","
            << word(ps.second) << "\nnodes:";
  for (int v : ps.nodes) {
    std::cout << " " << word(v)
              << (ps.node_type[static_cast<size_t>(v)] == kOnPath ? "[ON_PATH]"
                                                                  : "[OFF_PATH]");
  }
  std::cout << "\nedges(child->parent):";
  for (int v : ps.nodes) {
    if (ps.parent[static_cast<size_t>(v)] != 0) {
      std::cout << " " << v << "->" << ps.parent[static_cast<size_t>(v)];
    }
  }
  std::cout << "\n";
  return 0;
}

int cmd_gen_synthetic(const std::string& out_path, int n, unsigned seed,
                      const std::string& mode) {
  if (mode != "ace" && mode != "semeval") {
    throw std::runtime_error("--mode must be ace or semeval");
  }
  SyntheticOptions opts;
  opts.n = n;
  opts.seed = seed;
  opts.semeval = (mode == "semeval");
  std::vector<Sentence> corpus = gen_synthetic(opts);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  write_corpus(out, corpus);
  std::cout << "wrote " << corpus.size() << " sentences to " << out_path << "\n";
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"relex: end-to-end entity and relation extraction"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_config_opts = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "configuration file (key = value lines)");
    cmd->add_option("--set", overrides, "override a config key (key=value)");
  };

  CLI::App* train = app.add_subcommand("train", "train a model");
  add_config_opts(train);

  CLI::App* predict = app.add_subcommand("predict", "write predictions for test_file");
  add_config_opts(predict);

  CLI::App* eval = app.add_subcommand("eval", "score a prediction file against gold");
  std::string gold_path, pred_path, negative_relation;
  bool semeval = false, with_macro = false;
  eval->add_option("--gold", gold_path, "gold corpus file")->required();
  eval->add_option("--pred", pred_path, "prediction corpus file")->required();
  eval->add_flag("--semeval", semeval, "nominal-pair scoring (no entity spans)");
  eval->add_flag("--macro", with_macro, "report macro-averaged relation F1");
  eval->add_option("--negative", negative_relation,
                   "relation type treated as the negative class");

  CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient suite");
  std::string dims = "small";
  unsigned gc_seed = 7;
  gradcheck->add_option("--dims", dims, "small or medium")
      ->check(CLI::IsMember({"small", "medium"}));
  gradcheck->add_option("--seed", gc_seed, "random seed");

  CLI::App* inspect = app.add_subcommand("inspect-path", "print a relation substructure");
  std::string corpus_path, kind_name = "sptree";
  int sentence_no = 1, first = 1, second = 2;
  inspect->add_option("--corpus", corpus_path, "corpus file")->required();
  inspect->add_option("--sentence", sentence_no, "1-based sentence number")->required();
  inspect->add_option("--first", first, "first target token index")->required();
  inspect->add_option("--second", second, "second target token index")->required();
  inspect->add_option("--kind", kind_name, "sptree, subtree, or fulltree");

  CLI::App* gen = app.add_subcommand("gen-synthetic", "write a synthetic corpus");
  std::string out_path, mode = "ace";
  int gen_n = 20;
  unsigned gen_seed = 42;
  gen->add_option("--out", out_path, "output corpus file")->required();
  gen->add_option("--n", gen_n, "number of sentences");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--mode", mode, "ace or semeval");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train->parsed()) return cmd_train(config_path, overrides);
    if (predict->parsed()) return cmd_predict(config_path, overrides);
    if (eval->parsed()) {
      return cmd_eval(gold_path, pred_path, semeval, with_macro, negative_relation);
    }
    if (gradcheck->parsed()) return cmd_gradcheck(dims, gc_seed);
    if (inspect->parsed()) {
      return cmd_inspect_path(corpus_path, sentence_no, first, second, kind_name);
    }
    if (gen->parsed()) return cmd_gen_synthetic(out_path, gen_n, gen_seed, mode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace relex
