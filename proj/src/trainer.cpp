#include "more/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "more/error.hpp"

namespace more {

std::string to_string(LrSchedule s) { return s == LrSchedule::constant ? "constant" : "linear_decay"; }
std::string to_string(Objective o) { return o == Objective::more ? "more" : "baseline"; }

LrSchedule parse_lr_schedule(const std::string& s) {
  if (s == "constant") return LrSchedule::constant;
  if (s == "linear_decay") return LrSchedule::linear_decay;
  throw PreconditionError("unknown lr_schedule '" + s + "' (constant|linear_decay)");
}

Objective parse_objective(const std::string& s) {
  if (s == "more") return Objective::more;
  if (s == "baseline") return Objective::baseline;
  throw PreconditionError("unknown objective '" + s + "' (more|baseline)");
}

void TrainingConfig::validate() const {
  auto positive = [](bool ok, const char* what) {
    if (!ok) throw PreconditionError(std::string(what) + " must be positive");
  };
  positive(dim > 0, "dim");
  positive(window > 0, "window");
  positive(min_count > 0, "min_count");
  positive(subsample_threshold > 0, "subsample_threshold");
  positive(learning_rate > 0, "learning_rate");
  positive(batch_size > 0, "batch_size");
  positive(epochs_per_checkpoint > 0, "epochs_per_checkpoint");
  positive(total_epochs > 0, "total_epochs");
  positive(negatives > 0, "negatives");
  positive(alpha >= 0, "alpha");
  positive(workers > 0, "workers");
  if (total_epochs % epochs_per_checkpoint != 0) {
    throw PreconditionError("total_epochs must be a multiple of epochs_per_checkpoint");
  }
}

// ---------------------------------------------------------------------------
// EmbeddingModel

EmbeddingModel::EmbeddingModel(std::size_t vocab_size, std::size_t dim)
    : vocab_size_(vocab_size), dim_(dim), input_(vocab_size * dim, 0.0f), output_(vocab_size * dim, 0.0f) {}

EmbeddingModel EmbeddingModel::init(std::size_t vocab_size, std::size_t dim, std::uint64_t seed) {
  if (vocab_size < 1) throw PreconditionError("init_model: vocabulary size must be >= 1");
  if (dim < 1) throw PreconditionError("init_model: dimension must be >= 1");
  EmbeddingModel m(vocab_size, dim);
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double half = 0.5 / static_cast<double>(dim);
  const float hi = static_cast<float>(half);
  for (float& x : m.input_) {
    float v = static_cast<float>(-half + unit(rng) * 2.0 * half);
    if (v >= hi) v = std::nextafter(hi, 0.0f);
    x = v;
  }
  return m;
}

bool EmbeddingModel::all_finite() const noexcept {
  auto finite = [](float x) { return std::isfinite(x); };
  return std::all_of(input_.begin(), input_.end(), finite) &&
         std::all_of(output_.begin(), output_.end(), finite);
}

bool EmbeddingModel::same_weights(const EmbeddingModel& o) const noexcept {
  return vocab_size_ == o.vocab_size_ && dim_ == o.dim_ &&
         std::memcmp(input_.data(), o.input_.data(), input_.size() * sizeof(float)) == 0 &&
         std::memcmp(output_.data(), o.output_.data(), output_.size() * sizeof(float)) == 0;
}

// ---------------------------------------------------------------------------
// Scalar loss pieces

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

// ln(1 + e^x) without overflow.
double softplus(double x) noexcept { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double dot(std::span<const float> a, std::span<const float> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += static_cast<double>(a[k]) * b[k];
  return s;
}

}  // namespace

double logit(const EmbeddingModel& m, TokenId input, TokenId label) noexcept {
  return dot(m.output(label), m.input(input));
}

double loss_positive(double x, double s) noexcept { return positive_weight(s) * softplus(-x); }
double loss_negative(double x, double s) noexcept { return negative_weight(s) * softplus(x); }

// sigma(x) - 1 is evaluated as -sigma(-x) to keep precision for large x.
double grad_logit_positive(double x, double s) noexcept { return positive_weight(s) * -sigmoid(-x); }
double grad_logit_negative(double x, double s) noexcept { return negative_weight(s) * sigmoid(x); }

double batch_loss(std::span<const double> pos_losses, std::span<const double> neg_losses,
                  std::size_t batch_size) {
  if (batch_size < 1) throw PreconditionError("batch_loss: empty batch");
  double sum = 0.0;
  for (double l : pos_losses) sum += l;
  for (double l : neg_losses) sum += l;
  return sum / static_cast<double>(batch_size);
}

// ---------------------------------------------------------------------------
// SGD steps

namespace {

// Applies u -= coef * v and accumulates err += coef * u (pre-update u).
// Returns the sum of the updated row for the finiteness check.
float update_output(std::span<float> u, std::span<const float> v, float coef, float* err) noexcept {
  float acc = 0.0f;
  for (std::size_t k = 0; k < u.size(); ++k) {
    err[k] += coef * u[k];
    u[k] -= coef * v[k];
    acc += u[k];
  }
  return acc;
}

float apply_center(std::span<float> v, const float* err) noexcept {
  float acc = 0.0f;
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] -= err[k];
    acc += v[k];
  }
  return acc;
}

[[noreturn]] void non_finite(TrainingPair p) {
  throw NumericalError("non-finite embedding after update of pair (" + std::to_string(p.center) +
                       ", " + std::to_string(p.context) + "); lower the learning rate");
}

}  // namespace

StepLoss sgd_update(EmbeddingModel& m, TrainingPair pair, std::span<const TokenId> negatives,
                    const SimilarityMatrix& matrix, double lr, std::span<float> scratch) {
  auto v = m.input(pair.center);
  float* err = scratch.data();
  std::fill_n(err, m.dim(), 0.0f);
  StepLoss loss;
  bool finite = true;

  {
    const double s = matrix.lookup(pair.center, pair.context);
    auto u = m.output(pair.context);
    const double x = dot(u, v);
    loss.positive = loss_positive(x, s);
    const auto coef = static_cast<float>(lr * grad_logit_positive(x, s));
    finite &= std::isfinite(update_output(u, v, coef, err));
  }
  for (TokenId neg : negatives) {
    const double s = matrix.lookup(pair.center, neg);
    auto u = m.output(neg);
    const double x = dot(u, v);
    loss.negative += loss_negative(x, s);
    const auto coef = static_cast<float>(lr * grad_logit_negative(x, s));
    finite &= std::isfinite(update_output(u, v, coef, err));
  }
  finite &= std::isfinite(apply_center(v, err));
  if (!finite) non_finite(pair);
  return loss;
}

StepLoss sgd_update(EmbeddingModel& m, TrainingPair pair, std::span<const TokenId> negatives,
                    const SimilarityMatrix& matrix, double lr) {
  std::vector<float> scratch(m.dim());
  return sgd_update(m, pair, negatives, matrix, lr, scratch);
}

StepLoss sgd_update_baseline(EmbeddingModel& m, TrainingPair pair,
                             std::span<const TokenId> negatives, double lr,
                             std::span<float> scratch) {
  auto v = m.input(pair.center);
  float* err = scratch.data();
  std::fill_n(err, m.dim(), 0.0f);
  StepLoss loss;
  bool finite = true;

  {
    auto u = m.output(pair.context);
    const double x = dot(u, v);
    loss.positive = softplus(-x);
    const auto coef = static_cast<float>(lr * -sigmoid(-x));
    finite &= std::isfinite(update_output(u, v, coef, err));
  }
  for (TokenId neg : negatives) {
    auto u = m.output(neg);
    const double x = dot(u, v);
    loss.negative += softplus(x);
    const auto coef = static_cast<float>(lr * sigmoid(x));
    finite &= std::isfinite(update_output(u, v, coef, err));
  }
  finite &= std::isfinite(apply_center(v, err));
  if (!finite) non_finite(pair);
  return loss;
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_table(std::ostream& out, std::span<const float> table, std::size_t dim) {
  char buf[32];
  std::string line;
  for (std::size_t r = 0; r * dim < table.size(); ++r) {
    line.clear();
    for (std::size_t k = 0; k < dim; ++k) {
      std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(table[r * dim + k]));
      if (k) line += ' ';
      line += buf;
    }
    line += '\n';
    out << line;
  }
}

void read_table(std::istream& in, std::span<float> table, std::size_t dim, const std::string& source,
                std::size_t& lineno) {
  std::string line;
  const std::size_t rows = dim == 0 ? 0 : table.size() / dim;
  for (std::size_t r = 0; r < rows; ++r) {
    ++lineno;
    if (!std::getline(in, line)) throw ParseError(source, lineno, "checkpoint truncated");
    const char* p = line.c_str();
    for (std::size_t k = 0; k < dim; ++k) {
      char* end = nullptr;
      const float v = std::strtof(p, &end);
      if (end == p) throw ParseError(source, lineno, "expected " + std::to_string(dim) + " values");
      table[r * dim + k] = v;
      p = end;
    }
    while (*p == ' ') ++p;
    if (*p != '\0') throw ParseError(source, lineno, "trailing data in row");
  }
}

std::map<std::string, std::string> parse_fields(const std::string& text, const std::string& source,
                                                std::size_t lineno) {
  std::map<std::string, std::string> fields;
  std::istringstream is(text);
  std::string f;
  while (is >> f) {
    const auto eq = f.find('=');
    if (eq == std::string::npos) throw ParseError(source, lineno, "bad field '" + f + "'");
    fields[f.substr(0, eq)] = f.substr(eq + 1);
  }
  return fields;
}

}  // namespace

void Checkpoint::write(std::ostream& out) const {
  out << "#moreckpt v1 dim=" << model.dim() << " vocab=" << to_hex(vocab_hash)
      << " step=" << model.step() << " seed_state=" << to_hex(config.seed) << '\n';
  const auto& c = config;
  out << "#config vocab_size=" << model.vocab_size() << " epochs_done=" << epochs_done
      << " objective=" << to_string(objective) << " window=" << c.window
      << " min_count=" << c.min_count << " subsample_threshold=" << fmt_double(c.subsample_threshold)
      << " learning_rate=" << fmt_double(c.learning_rate) << " batch_size=" << c.batch_size
      << " epochs_per_checkpoint=" << c.epochs_per_checkpoint << " total_epochs=" << c.total_epochs
      << " negatives=" << c.negatives << " alpha=" << fmt_double(c.alpha)
      << " lr_schedule=" << to_string(c.lr_schedule) << " dynamic_window=" << (c.dynamic_window ? 1 : 0)
      << " workers=" << c.workers << '\n';
  write_table(out, model.input_table(), model.dim());
  write_table(out, model.output_table(), model.dim());
}

Checkpoint Checkpoint::read(std::istream& in, const std::string& source) {
  std::string line;
  const std::string magic = "#moreckpt v1 ";
  if (!std::getline(in, line) || line.rfind(magic, 0) != 0) {
    throw ParseError(source, 1, "expected '#moreckpt v1' header");
  }
  auto head = parse_fields(line.substr(magic.size()), source, 1);
  const std::string config_tag = "#config ";
  if (!std::getline(in, line) || line.rfind(config_tag, 0) != 0) {
    throw ParseError(source, 2, "expected '#config' line");
  }
  auto conf = parse_fields(line.substr(config_tag.size()), source, 2);

  auto take = [&](std::map<std::string, std::string>& fields, const std::string& key,
                  std::size_t lineno) -> std::string {
    auto it = fields.find(key);
    if (it == fields.end()) throw ParseError(source, lineno, "missing field '" + key + "'");
    return it->second;
  };

  Checkpoint ck;
  std::size_t dim = 0, vocab_size = 0;
  std::uint64_t step = 0;
  try {
    dim = std::stoull(take(head, "dim", 1));
    ck.vocab_hash = from_hex(take(head, "vocab", 1));
    step = std::stoull(take(head, "step", 1));
    ck.config.seed = from_hex(take(head, "seed_state", 1));

    vocab_size = std::stoull(take(conf, "vocab_size", 2));
    ck.epochs_done = std::stoi(take(conf, "epochs_done", 2));
    ck.objective = parse_objective(take(conf, "objective", 2));
    auto& c = ck.config;
    c.dim = static_cast<int>(dim);
    c.window = std::stoi(take(conf, "window", 2));
    c.min_count = std::stoi(take(conf, "min_count", 2));
    c.subsample_threshold = std::stod(take(conf, "subsample_threshold", 2));
    c.learning_rate = std::stod(take(conf, "learning_rate", 2));
    c.batch_size = std::stoi(take(conf, "batch_size", 2));
    c.epochs_per_checkpoint = std::stoi(take(conf, "epochs_per_checkpoint", 2));
    c.total_epochs = std::stoi(take(conf, "total_epochs", 2));
    c.negatives = std::stoi(take(conf, "negatives", 2));
    c.alpha = std::stod(take(conf, "alpha", 2));
    c.lr_schedule = parse_lr_schedule(take(conf, "lr_schedule", 2));
    c.dynamic_window = take(conf, "dynamic_window", 2) == "1";
    c.workers = std::stoi(take(conf, "workers", 2));
  } catch (const std::logic_error&) {
    throw ParseError(source, 2, "bad numeric field in checkpoint header");
  }
  if (dim == 0 || vocab_size == 0) throw ParseError(source, 1, "empty checkpoint dimensions");

  ck.model = EmbeddingModel(vocab_size, dim);
  ck.model.advance(step);
  std::size_t lineno = 2;
  read_table(in, ck.model.input_table(), dim, source, lineno);
  read_table(in, ck.model.output_table(), dim, source, lineno);
  return ck;
}

void Checkpoint::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint '" + path.string() + "'");
  write(out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint '" + path.string() + "'");
  return read(in, path.string());
}

// ---------------------------------------------------------------------------
// Trainer

namespace {

Rng epoch_rng(std::uint64_t seed, int epoch, int worker) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(worker)};
  return Rng(seq);
}

// Mean of per-batch losses; a trailing partial batch is averaged over its own size.
struct BatchMeter {
  std::size_t batch_size;
  double batch_sum = 0.0;
  std::size_t in_batch = 0;
  double total = 0.0;
  std::size_t batches = 0;

  void add(double l) {
    batch_sum += l;
    if (++in_batch == batch_size) flush();
  }
  void flush() {
    if (in_batch == 0) return;
    total += batch_sum / static_cast<double>(in_batch);
    ++batches;
    batch_sum = 0.0;
    in_batch = 0;
  }
};

void check_vocab(const Vocabulary& vocab, const SimilarityMatrix& matrix) {
  if (!matrix.empty() && matrix.vocab_hash() != vocab.checksum()) {
    throw ChecksumMismatchError("similarity matrix", vocab.checksum_hex(), to_hex(matrix.vocab_hash()));
  }
}

}  // namespace

Trainer::Trainer(const EncodedCorpus& corpus, const Vocabulary& vocab, const SimilarityMatrix& matrix,
                 TrainingConfig config, Objective objective)
    : Trainer(corpus, vocab, matrix, config, objective,
              EmbeddingModel::init(vocab.size(), static_cast<std::size_t>(std::max(config.dim, 0)),
                                   config.seed),
              0) {}

Trainer::Trainer(const EncodedCorpus& corpus, const Vocabulary& vocab, const SimilarityMatrix& matrix,
                 TrainingConfig config, Objective objective, EmbeddingModel model, int epochs_done)
    : corpus_(&corpus),
      vocab_(&vocab),
      matrix_(&matrix),
      config_(config),
      objective_(objective),
      model_(std::move(model)),
      noise_(vocab, config.alpha),
      keep_(keep_probabilities(vocab, config.subsample_threshold)),
      epochs_done_(epochs_done) {
  config_.validate();
  check_vocab(vocab, matrix);
  if (model_.vocab_size() != vocab.size()) {
    throw PreconditionError("model has " + std::to_string(model_.vocab_size()) +
                            " rows but the vocabulary has " + std::to_string(vocab.size()));
  }
}

Trainer Trainer::resume(Checkpoint ck, const EncodedCorpus& corpus, const Vocabulary& vocab,
                        const SimilarityMatrix& matrix) {
  if (ck.vocab_hash != vocab.checksum()) {
    throw ChecksumMismatchError("checkpoint", vocab.checksum_hex(), to_hex(ck.vocab_hash));
  }
  return Trainer(corpus, vocab, matrix, ck.config, ck.objective, std::move(ck.model), ck.epochs_done);
}

Checkpoint Trainer::checkpoint() const {
  Checkpoint ck;
  ck.model = model_;
  ck.config = config_;
  ck.objective = objective_;
  ck.epochs_done = epochs_done_;
  ck.vocab_hash = vocab_->checksum();
  return ck;
}

double Trainer::learning_rate(std::uint64_t tokens_seen) const noexcept {
  if (config_.lr_schedule == LrSchedule::constant) return config_.learning_rate;
  const double per_epoch = static_cast<double>(std::max<std::uint64_t>(corpus_->token_count, 1));
  const double progress = (epochs_done_ * per_epoch + static_cast<double>(tokens_seen)) /
                          (config_.total_epochs * per_epoch);
  return config_.learning_rate * std::max(1e-4, 1.0 - progress);
}

EpochStats Trainer::run_epoch() {
  const auto start = std::chrono::steady_clock::now();
  EpochStats stats = config_.workers > 1 ? run_parallel_epoch() : run_serial_epoch();
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  model_.advance(stats.pairs);
  ++epochs_done_;
  stats.epoch = epochs_done_;
  return stats;
}

EpochStats Trainer::run_serial_epoch() {
  Rng rng = epoch_rng(config_.seed, epochs_done_, 0);
  std::vector<TokenId> kept;
  std::vector<TokenId> negatives(static_cast<std::size_t>(config_.negatives));
  std::vector<float> scratch(model_.dim());
  BatchMeter meter{static_cast<std::size_t>(config_.batch_size)};
  std::uint64_t pairs = 0, tokens_seen = 0;
  Rng* shrink = config_.dynamic_window ? &rng : nullptr;

  for (const auto& line : corpus_->lines) {
    const double lr = learning_rate(tokens_seen);
    tokens_seen += line.size();
    subsample(line, keep_, rng, kept);
    for_each_pair(
        kept, config_.window,
        [&](TrainingPair p) {
          for (auto& n : negatives) n = noise_.sample(rng);
          const StepLoss l = objective_ == Objective::more
                                 ? sgd_update(model_, p, negatives, *matrix_, lr, scratch)
                                 : sgd_update_baseline(model_, p, negatives, lr, scratch);
          meter.add(l.positive + l.negative);
          ++pairs;
        },
        shrink);
  }
  meter.flush();
  EpochStats stats;
  stats.pairs = pairs;
  stats.mean_loss = meter.batches ? meter.total / static_cast<double>(meter.batches) : 0.0;
  return stats;
}

// Hogwild: workers update the shared tables without synchronisation.
EpochStats Trainer::run_parallel_epoch() {
  const auto& lines = corpus_->lines;
  std::vector<std::uint64_t> offset(lines.size() + 1, 0);
  for (std::size_t i = 0; i < lines.size(); ++i) offset[i + 1] = offset[i] + lines[i].size();

  double total = 0.0;
  std::uint64_t batches = 0, pairs = 0;
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(lines.size());

#pragma omp parallel num_threads(config_.workers) reduction(+ : total, batches, pairs)
  {
    int worker = 0;
#ifdef _OPENMP
    worker = omp_get_thread_num();
#endif
    Rng rng = epoch_rng(config_.seed, epochs_done_, worker + 1);
    std::vector<TokenId> kept;
    std::vector<TokenId> negatives(static_cast<std::size_t>(config_.negatives));
    std::vector<float> scratch(model_.dim());
    BatchMeter meter{static_cast<std::size_t>(config_.batch_size)};
    Rng* shrink = config_.dynamic_window ? &rng : nullptr;

#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        const auto& line = lines[static_cast<std::size_t>(i)];
        const double lr = learning_rate(offset[static_cast<std::size_t>(i)]);
        subsample(line, keep_, rng, kept);
        for_each_pair(
            kept, config_.window,
            [&](TrainingPair p) {
              for (auto& neg : negatives) neg = noise_.sample(rng);
              const StepLoss l = objective_ == Objective::more
                                     ? sgd_update(model_, p, negatives, *matrix_, lr, scratch)
                                     : sgd_update_baseline(model_, p, negatives, lr, scratch);
              meter.add(l.positive + l.negative);
              ++pairs;
            },
            shrink);
      } catch (...) {
#pragma omp critical(more_trainer_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    meter.flush();
    total += meter.total;
    batches += meter.batches;
  }
  if (failure) std::rethrow_exception(failure);

  EpochStats stats;
  stats.pairs = pairs;
  stats.mean_loss = batches ? total / static_cast<double>(batches) : 0.0;
  return stats;
}

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, int epoch) {
  char name[32];
  std::snprintf(name, sizeof name, "epoch-%04d.ckpt", epoch);
  return dir / name;
}

TrainResult continue_training(Trainer& trainer, int until_epoch, const TrainOptions& options) {
  TrainResult result;
  if (!options.checkpoint_dir.empty()) std::filesystem::create_directories(options.checkpoint_dir);
  while (trainer.epochs_done() < until_epoch) {
    const EpochStats stats = trainer.run_epoch();
    result.epochs.push_back(stats);
    if (options.on_epoch) options.on_epoch(stats);
    if (!options.checkpoint_dir.empty() &&
        (trainer.epochs_done() % trainer.config().epochs_per_checkpoint == 0 ||
         trainer.epochs_done() == until_epoch)) {
      auto path = checkpoint_path(options.checkpoint_dir, trainer.epochs_done());
      trainer.checkpoint().save(path);
      result.checkpoints.push_back(std::move(path));
    }
  }
  result.model = trainer.model();
  return result;
}

TrainResult train(const EncodedCorpus& corpus, const Vocabulary& vocab, const SimilarityMatrix& matrix,
                  const TrainingConfig& config, const TrainOptions& options) {
  Trainer trainer(corpus, vocab, matrix, config, options.objective);
  return continue_training(trainer, config.total_epochs, options);
}

void export_text(const EmbeddingModel& m, const Vocabulary& vocab, std::ostream& out) {
  if (m.vocab_size() != vocab.size()) {
    throw PreconditionError("export: model rows do not match vocabulary size");
  }
  out << m.vocab_size() << ' ' << m.dim() << '\n';
  char buf[32];
  std::string line;
  for (std::size_t w = 0; w < m.vocab_size(); ++w) {
    line = vocab.token(static_cast<TokenId>(w));
    for (float x : m.input(static_cast<TokenId>(w))) {
      std::snprintf(buf, sizeof buf, " %.6f", static_cast<double>(x));
      line += buf;
    }
    line += '\n';
    out << line;
  }
}

void export_text(const EmbeddingModel& m, const Vocabulary& vocab, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  export_text(m, vocab, out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace more
