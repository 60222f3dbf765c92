#include "more/cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "more/corpus.hpp"
#include "more/eval.hpp"
#include "more/ontology.hpp"
#include "more/simmatrix.hpp"

namespace more::cli {

namespace {

constexpr std::array<std::string_view, 20> kKeys = {
    "dim",         "window",      "min_count",   "subsample_threshold", "learning_rate",
    "batch_size",  "epochs_per_checkpoint",      "total_epochs",        "negatives",
    "seed",        "alpha",       "lr_schedule", "dynamic_window",      "workers",
    "objective",   "corpus",      "vocab",       "matrix",              "out_dir",
    "export"};

// Keys that are exposed as individual command-line flags on train.
constexpr std::array<std::string_view, 14> kTrainingFlags = {
    "dim",          "window",    "min_count", "subsample_threshold", "learning_rate",
    "batch_size",   "epochs_per_checkpoint",  "total_epochs",        "negatives",
    "seed",         "alpha",     "lr_schedule", "dynamic_window",    "workers"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string dashed(std::string_view key) {
  std::string s(key);
  for (auto& c : s) {
    if (c == '_') c = '-';
  }
  return s;
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  const std::string v(value);
  std::size_t used = 0;
  T out{};
  try {
    if constexpr (std::is_same_v<T, int>) out = std::stoi(v, &used);
    else if constexpr (std::is_same_v<T, double>) out = std::stod(v, &used);
    else out = static_cast<T>(std::stoull(v, &used, 0));
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw UsageError("bad value '" + v + "' for '" + std::string(key) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw UsageError("bad boolean '" + std::string(value) + "' for '" + std::string(key) + "'");
}

}  // namespace

std::span<const std::string_view> config_keys() { return kKeys; }

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MORE_SEED"); env != nullptr && *env != '\0') {
    return parse_number<std::uint64_t>("MORE_SEED", env);
  }
  return kDefaultSeed;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view raw) {
  const std::string value = trim(raw);
  auto& t = cfg.training;
  if (key == "dim") t.dim = parse_number<int>(key, value);
  else if (key == "window") t.window = parse_number<int>(key, value);
  else if (key == "min_count") t.min_count = parse_number<int>(key, value);
  else if (key == "subsample_threshold") t.subsample_threshold = parse_number<double>(key, value);
  else if (key == "learning_rate") t.learning_rate = parse_number<double>(key, value);
  else if (key == "batch_size") t.batch_size = parse_number<int>(key, value);
  else if (key == "epochs_per_checkpoint") t.epochs_per_checkpoint = parse_number<int>(key, value);
  else if (key == "total_epochs") t.total_epochs = parse_number<int>(key, value);
  else if (key == "negatives") t.negatives = parse_number<int>(key, value);
  else if (key == "seed") t.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "alpha") t.alpha = parse_number<double>(key, value);
  else if (key == "dynamic_window") t.dynamic_window = parse_bool(key, value);
  else if (key == "workers") t.workers = parse_number<int>(key, value);
  else if (key == "lr_schedule" || key == "objective") {
    try {
      if (key == "lr_schedule") t.lr_schedule = parse_lr_schedule(value);
      else cfg.objective = parse_objective(value);
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
  } else if (key == "corpus") {
    cfg.corpus.clear();
    std::string list = value;
    for (auto& c : list) {
      if (c == ',') c = ' ';
    }
    std::istringstream is(list);
    std::string path;
    while (is >> path) cfg.corpus.emplace_back(path);
  } else if (key == "vocab") cfg.vocab = value;
  else if (key == "matrix") cfg.matrix = value;
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "export") cfg.export_path = value;
  else throw UsageError("unknown config key '" + std::string(key) + "'");
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      apply_setting(cfg, trim(std::string_view(body).substr(0, eq)), std::string_view(body).substr(eq + 1));
    } catch (const UsageError& e) {
      throw UsageError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

namespace {

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

Vocabulary vocab_for(const RunConfig& cfg, std::ostream& err) {
  if (!cfg.vocab.empty()) return Vocabulary::load(cfg.vocab);
  if (cfg.corpus.empty()) throw UsageError("need --vocab or --corpus");
  auto v = Vocabulary::build(count_tokens(cfg.corpus), static_cast<std::uint64_t>(cfg.training.min_count));
  err << "built vocabulary: " << v.size() << " tokens, checksum " << v.checksum_hex() << '\n';
  return v;
}

SimilarityMatrix matrix_for(const RunConfig& cfg, const Vocabulary& vocab) {
  if (cfg.matrix.empty()) return SimilarityMatrix{};
  return SimilarityMatrix::load(cfg.matrix, vocab);
}

void print_epoch(std::ostream& out, const EpochStats& s) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "epoch=%d loss=%.6f", s.epoch, s.mean_loss);
  out << buf << '\n' << std::flush;
}

struct TrainingFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App* sub, std::span<const std::string_view> keys) {
    for (auto key : keys) {
      const std::string k(key);
      options[k] = sub->add_option("--" + dashed(k), values[k], "overrides config key '" + k + "'");
    }
  }

  void apply(RunConfig& cfg) const {
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) apply_setting(cfg, key, values.at(key));
    }
  }
};

int train_command(RunConfig cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.training.validate();
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  if (cfg.corpus.empty()) throw UsageError("train needs --corpus");
  const Vocabulary vocab = vocab_for(cfg, err);
  const SimilarityMatrix matrix = matrix_for(cfg, vocab);
  const EncodedCorpus corpus = encode_corpus(cfg.corpus, vocab);

  TrainOptions opts;
  opts.objective = cfg.objective;
  opts.checkpoint_dir = cfg.out_dir.empty() ? std::filesystem::path(".") : cfg.out_dir;
  opts.on_epoch = [&out](const EpochStats& s) { print_epoch(out, s); };
  const auto result = train(corpus, vocab, matrix, cfg.training, opts);
  if (!cfg.export_path.empty()) export_text(result.model, vocab, cfg.export_path);
  if (!result.checkpoints.empty()) err << "checkpoint: " << result.checkpoints.back().string() << '\n';
  return 0;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ontology-refined skip-gram embeddings: vocabulary, ontology measures, "
               "similarity matrix, training and evaluation."};
  app.require_subcommand(1);

  // build-vocab
  auto* bv = app.add_subcommand("build-vocab", "Count corpus tokens and write a vocabulary file");
  std::vector<std::string> bv_corpus;
  std::uint64_t bv_min_count = 5;
  std::string bv_out;
  bv->add_option("corpus", bv_corpus, "plain-text corpus files")->required();
  bv->add_option("--min-count", bv_min_count, "drop tokens seen fewer times")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 62));
  bv->add_option("--out,-o", bv_out, "vocabulary TSV to write")->required();

  // onto-sim
  auto* os = app.add_subcommand("onto-sim", "Print raw wup, lch and nam for two concept ids");
  std::string os_edges, os_labels, os_c1, os_c2;
  os->add_option("--edges", os_edges, "child<TAB>parent TSV")->required();
  os->add_option("--labels", os_labels, "concept<TAB>label TSV")->required();
  os->add_option("concept1", os_c1, "first concept id")->required();
  os->add_option("concept2", os_c2, "second concept id")->required();

  // build-matrix
  auto* bm = app.add_subcommand("build-matrix", "Fuse ontology measures into a token similarity matrix");
  std::string bm_vocab, bm_edges, bm_labels, bm_out;
  bool bm_serial = false;
  bm->add_option("--vocab", bm_vocab, "vocabulary TSV")->required();
  bm->add_option("--edges", bm_edges, "child<TAB>parent TSV")->required();
  bm->add_option("--labels", bm_labels, "concept<TAB>label TSV")->required();
  bm->add_option("--out,-o", bm_out, "matrix file to write")->required();
  bm->add_flag("--serial", bm_serial, "use the single-threaded reference builder");

  // train
  auto* tr = app.add_subcommand("train", "Train embeddings from scratch");
  std::string tr_config;
  std::vector<std::string> tr_corpus;
  std::string tr_vocab, tr_matrix, tr_out_dir, tr_export;
  bool tr_baseline = false;
  tr->add_option("--config", tr_config, "key = value config file (flags override it)");
  auto* tr_corpus_opt = tr->add_option("--corpus", tr_corpus, "plain-text corpus files");
  auto* tr_vocab_opt = tr->add_option("--vocab", tr_vocab, "vocabulary TSV (built from the corpus if absent)");
  auto* tr_matrix_opt = tr->add_option("--matrix", tr_matrix, "similarity matrix (plain skip-gram signal if absent)");
  auto* tr_out_opt = tr->add_option("--out-dir", tr_out_dir, "checkpoint directory (default .)");
  auto* tr_export_opt = tr->add_option("--export", tr_export, "write the final vectors in text format");
  tr->add_flag("--baseline", tr_baseline, "plain skip-gram objective, ignore the matrix");
  TrainingFlags tr_flags;
  tr_flags.add(tr, kTrainingFlags);

  // resume
  auto* rs = app.add_subcommand("resume", "Continue training from a checkpoint");
  std::string rs_ckpt, rs_vocab, rs_matrix, rs_out_dir, rs_export;
  std::vector<std::string> rs_corpus;
  int rs_total = 0, rs_workers = 0;
  rs->add_option("--checkpoint", rs_ckpt, "checkpoint file")->required();
  rs->add_option("--corpus", rs_corpus, "plain-text corpus files")->required();
  rs->add_option("--vocab", rs_vocab, "vocabulary TSV the checkpoint was trained with")->required();
  rs->add_option("--matrix", rs_matrix, "similarity matrix used for training");
  rs->add_option("--total-epochs", rs_total, "train until this epoch (default: checkpoint config)");
  rs->add_option("--workers", rs_workers, "override worker count");
  rs->add_option("--out-dir", rs_out_dir, "checkpoint directory (default .)");
  rs->add_option("--export", rs_export, "write the final vectors in text format");

  // eval
  auto* ev = app.add_subcommand("eval", "Correlate embedding cosines with rated concept pairs");
  std::string ev_bench, ev_vectors, ev_ckpt, ev_vocab, ev_group = "all", ev_tsv;
  ev->add_option("--benchmark", ev_bench, "term1<TAB>term2<TAB>group... TSV")->required();
  ev->add_option("--vectors", ev_vectors, "exported text vectors");
  ev->add_option("--checkpoint", ev_ckpt, "checkpoint (needs --vocab)");
  ev->add_option("--vocab", ev_vocab, "vocabulary TSV for --checkpoint");
  ev->add_option("--group", ev_group, "rater group, 'combined' or 'all'");
  ev->add_option("--tsv", ev_tsv, "also write the machine-readable report here ('-' for stdout)");

  // export
  auto* ex = app.add_subcommand("export", "Write checkpoint input vectors in text format");
  std::string ex_ckpt, ex_vocab, ex_out;
  ex->add_option("--checkpoint", ex_ckpt, "checkpoint file")->required();
  ex->add_option("--vocab", ex_vocab, "vocabulary TSV")->required();
  ex->add_option("--out,-o", ex_out, "output path")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (bv->parsed()) {
      std::vector<std::filesystem::path> files(bv_corpus.begin(), bv_corpus.end());
      const auto vocab = Vocabulary::build(count_tokens(files), bv_min_count);
      vocab.save(bv_out);
      out << "vocab: " << vocab.size() << " tokens, total=" << vocab.total_count()
          << " checksum=" << vocab.checksum_hex() << '\n';
      return 0;
    }

    if (os->parsed()) {
      std::vector<std::string> warnings;
      const auto g = OntologyGraph::parse(os_edges, os_labels, &warnings);
      print_warnings(warnings, err);
      const auto m = all_measures(g, os_c1, os_c2);
      char buf[128];
      std::snprintf(buf, sizeof buf, "wup=%.6f lch=%.6f nam=%.6f", m.wup, m.lch, m.nam);
      out << buf << '\n';
      return 0;
    }

    if (bm->parsed()) {
      const auto vocab = Vocabulary::load(bm_vocab);
      std::vector<std::string> warnings;
      const auto g = OntologyGraph::parse(bm_edges, bm_labels, &warnings);
      print_warnings(warnings, err);
      const auto map = intersect(vocab, g);
      const auto m = bm_serial ? build_matrix_serial(vocab, g, map) : build_matrix(vocab, g, map);
      m.save(bm_out, vocab);
      out << "matrix: tokens=" << m.token_count() << " pairs=" << m.pair_count()
          << " vocab=" << vocab.checksum_hex() << '\n';
      return 0;
    }

    if (tr->parsed()) {
      RunConfig cfg;
      cfg.training.seed = default_seed();
      if (!tr_config.empty()) apply_config_file(cfg, tr_config);
      if (tr_corpus_opt->count()) cfg.corpus.assign(tr_corpus.begin(), tr_corpus.end());
      if (tr_vocab_opt->count()) cfg.vocab = tr_vocab;
      if (tr_matrix_opt->count()) cfg.matrix = tr_matrix;
      if (tr_out_opt->count()) cfg.out_dir = tr_out_dir;
      if (tr_export_opt->count()) cfg.export_path = tr_export;
      if (tr_baseline) cfg.objective = Objective::baseline;
      tr_flags.apply(cfg);
      return train_command(std::move(cfg), out, err);
    }

    if (rs->parsed()) {
      Checkpoint ck = Checkpoint::load(rs_ckpt);
      const auto vocab = Vocabulary::load(rs_vocab);
      RunConfig cfg;
      cfg.matrix = rs_matrix;
      const auto matrix = matrix_for(cfg, vocab);
      std::vector<std::filesystem::path> files(rs_corpus.begin(), rs_corpus.end());
      const auto corpus = encode_corpus(files, vocab);
      if (rs_total > 0) ck.config.total_epochs = rs_total;
      if (rs_workers > 0) ck.config.workers = rs_workers;
      try {
        ck.config.validate();
      } catch (const PreconditionError& e) {
        throw UsageError(e.what());
      }
      const int until = ck.config.total_epochs;
      Trainer trainer = Trainer::resume(std::move(ck), corpus, vocab, matrix);
      TrainOptions opts;
      opts.checkpoint_dir = rs_out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(rs_out_dir);
      opts.on_epoch = [&out](const EpochStats& s) { print_epoch(out, s); };
      const auto result = continue_training(trainer, until, opts);
      if (!rs_export.empty()) export_text(result.model, vocab, rs_export);
      if (!result.checkpoints.empty()) err << "checkpoint: " << result.checkpoints.back().string() << '\n';
      return 0;
    }

    if (ev->parsed()) {
      EmbeddingTable table;
      if (!ev_vectors.empty()) {
        table = EmbeddingTable::load_text(ev_vectors);
      } else if (!ev_ckpt.empty() && !ev_vocab.empty()) {
        const auto vocab = Vocabulary::load(ev_vocab);
        const auto ck = Checkpoint::load(ev_ckpt);
        if (ck.vocab_hash != vocab.checksum()) {
          throw ChecksumMismatchError("checkpoint", vocab.checksum_hex(), to_hex(ck.vocab_hash));
        }
        table = EmbeddingTable::from_model(ck.model, vocab);
      } else {
        throw UsageError("eval needs --vectors, or --checkpoint with --vocab");
      }
      const auto dataset = EvalDataset::load(ev_bench);
      std::vector<CorrelationReport> reports;
      if (ev_group == "all") reports = evaluate_all(table, dataset);
      else reports.push_back(evaluate(table, dataset, ev_group));
      write_report_table(out, reports, dataset);
      if (ev_tsv == "-") {
        write_report_tsv(out, reports);
      } else if (!ev_tsv.empty()) {
        std::ofstream tsv(ev_tsv);
        if (!tsv) throw IoError("cannot write '" + ev_tsv + "'");
        write_report_tsv(tsv, reports);
      }
      return 0;
    }

    if (ex->parsed()) {
      const auto vocab = Vocabulary::load(ex_vocab);
      const auto ck = Checkpoint::load(ex_ckpt);
      if (ck.vocab_hash != vocab.checksum()) {
        throw ChecksumMismatchError("checkpoint", vocab.checksum_hex(), to_hex(ck.vocab_hash));
      }
      export_text(ck.model, vocab, std::filesystem::path(ex_out));
      out << "exported " << ck.model.vocab_size() << " vectors of dim " << ck.model.dim() << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace more::cli
