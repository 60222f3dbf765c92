#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "more/corpus.hpp"
#include "more/simmatrix.hpp"

namespace more {

inline constexpr std::uint64_t kDefaultSeed = 20200405;

enum class LrSchedule { constant, linear_decay };

// Which loss the trainer minimises. `baseline` is plain skip-gram with
// negative sampling and never consults the similarity matrix.
enum class Objective { more, baseline };

std::string to_string(LrSchedule s);
std::string to_string(Objective o);
LrSchedule parse_lr_schedule(const std::string& s);
Objective parse_objective(const std::string& s);

struct TrainingConfig {
  int dim = 300;
  int window = 10;
  int min_count = 5;
  double subsample_threshold = 1e-3;
  double learning_rate = 0.3;
  int batch_size = 1024;
  int epochs_per_checkpoint = 10;
  int total_epochs = 150;
  int negatives = 5;
  std::uint64_t seed = kDefaultSeed;
  double alpha = 0.75;
  LrSchedule lr_schedule = LrSchedule::constant;
  bool dynamic_window = false;
  // 1 runs the deterministic serial kernel; more runs lock-free workers.
  int workers = 1;

  // Throws PreconditionError.
  void validate() const;

  friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

/// Input (center) and output (context) vector tables, row-major V x d.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(std::size_t vocab_size, std::size_t dim);

  // Inputs uniform in [-0.5/d, 0.5/d), outputs zero.
  static EmbeddingModel init(std::size_t vocab_size, std::size_t dim, std::uint64_t seed);

  std::size_t vocab_size() const noexcept { return vocab_size_; }
  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t step() const noexcept { return step_; }
  void advance(std::uint64_t updates) noexcept { step_ += updates; }

  std::span<float> input(TokenId w) noexcept { return {input_.data() + std::size_t{w} * dim_, dim_}; }
  std::span<const float> input(TokenId w) const noexcept {
    return {input_.data() + std::size_t{w} * dim_, dim_};
  }
  std::span<float> output(TokenId w) noexcept { return {output_.data() + std::size_t{w} * dim_, dim_}; }
  std::span<const float> output(TokenId w) const noexcept {
    return {output_.data() + std::size_t{w} * dim_, dim_};
  }

  std::span<float> input_table() noexcept { return input_; }
  std::span<const float> input_table() const noexcept { return input_; }
  std::span<float> output_table() noexcept { return output_; }
  std::span<const float> output_table() const noexcept { return output_; }

  bool all_finite() const noexcept;

  // Bitwise table equality; step is ignored.
  bool same_weights(const EmbeddingModel& other) const noexcept;

 private:
  std::size_t vocab_size_ = 0;
  std::size_t dim_ = 0;
  std::uint64_t step_ = 0;
  std::vector<float> input_;
  std::vector<float> output_;
};

double sigmoid(double x) noexcept;

// u_label . v_input, no bias.
double logit(const EmbeddingModel& m, TokenId input, TokenId label) noexcept;

// Label weights from an ontology score s in [0,1], or the sentinel -1 (weight 1).
inline double positive_weight(double s) noexcept { return s == SimilarityMatrix::kSentinel ? 1.0 : (1.0 + s) / 2.0; }
inline double negative_weight(double s) noexcept { return s == SimilarityMatrix::kSentinel ? 1.0 : 1.0 - s / 2.0; }

double loss_positive(double x, double s) noexcept;
double loss_negative(double x, double s) noexcept;
double grad_logit_positive(double x, double s) noexcept;
double grad_logit_negative(double x, double s) noexcept;

// (sum pos + sum neg) / batch_size, batch_size counting positive pairs.
double batch_loss(std::span<const double> pos_losses, std::span<const double> neg_losses,
                  std::size_t batch_size);

struct StepLoss {
  double positive = 0.0;
  double negative = 0.0;
};

/// One SGD step on a (center, context) pair and its negatives. Scores come
/// from `matrix` (sentinel when absent). All output-vector updates use the
/// pre-update center vector. `scratch` needs dim() floats. Throws
/// NumericalError if a touched row stops being finite.
StepLoss sgd_update(EmbeddingModel& m, TrainingPair pair, std::span<const TokenId> negatives,
                    const SimilarityMatrix& matrix, double lr, std::span<float> scratch);
StepLoss sgd_update(EmbeddingModel& m, TrainingPair pair, std::span<const TokenId> negatives,
                    const SimilarityMatrix& matrix, double lr);

// Textbook skip-gram NEG step with unit label weights.
StepLoss sgd_update_baseline(EmbeddingModel& m, TrainingPair pair,
                             std::span<const TokenId> negatives, double lr,
                             std::span<float> scratch);

/// Everything needed to continue training exactly where it stopped.
struct Checkpoint {
  EmbeddingModel model;
  TrainingConfig config;
  Objective objective = Objective::more;
  int epochs_done = 0;
  std::uint64_t vocab_hash = 0;

  void write(std::ostream& out) const;
  static Checkpoint read(std::istream& in, const std::string& source = "<checkpoint>");
  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double mean_loss = 0.0;
  std::uint64_t pairs = 0;
  double seconds = 0.0;
};

class Trainer {
 public:
  /// Throws ChecksumMismatchError if a non-empty matrix belongs to another vocabulary.
  Trainer(const EncodedCorpus& corpus, const Vocabulary& vocab, const SimilarityMatrix& matrix,
          TrainingConfig config, Objective objective = Objective::more);

  static Trainer resume(Checkpoint checkpoint, const EncodedCorpus& corpus, const Vocabulary& vocab,
                        const SimilarityMatrix& matrix);

  // The trainer keeps references; temporaries would dangle.
  Trainer(EncodedCorpus&&, const Vocabulary&, const SimilarityMatrix&, TrainingConfig,
          Objective = Objective::more) = delete;
  Trainer(const EncodedCorpus&, Vocabulary&&, const SimilarityMatrix&, TrainingConfig,
          Objective = Objective::more) = delete;
  Trainer(const EncodedCorpus&, const Vocabulary&, SimilarityMatrix&&, TrainingConfig,
          Objective = Objective::more) = delete;
  static Trainer resume(Checkpoint, const EncodedCorpus&, const Vocabulary&, SimilarityMatrix&&) = delete;

  EpochStats run_epoch();

  int epochs_done() const noexcept { return epochs_done_; }
  const TrainingConfig& config() const noexcept { return config_; }
  const EmbeddingModel& model() const noexcept { return model_; }
  Checkpoint checkpoint() const;

 private:
  Trainer(const EncodedCorpus& corpus, const Vocabulary& vocab, const SimilarityMatrix& matrix,
          TrainingConfig config, Objective objective, EmbeddingModel model, int epochs_done);

  double learning_rate(std::uint64_t tokens_seen) const noexcept;
  EpochStats run_serial_epoch();
  EpochStats run_parallel_epoch();

  const EncodedCorpus* corpus_;
  const Vocabulary* vocab_;
  const SimilarityMatrix* matrix_;
  TrainingConfig config_;
  Objective objective_;
  EmbeddingModel model_;
  NoiseDistribution noise_;
  std::vector<double> keep_;
  int epochs_done_ = 0;
};

struct TrainOptions {
  Objective objective = Objective::more;
  // Empty: no checkpoint files.
  std::filesystem::path checkpoint_dir;
  std::function<void(const EpochStats&)> on_epoch;
};

struct TrainResult {
  EmbeddingModel model;
  std::vector<EpochStats> epochs;
  std::vector<std::filesystem::path> checkpoints;
};

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, int epoch);

/// Runs the trainer until `config.total_epochs`, writing a checkpoint every
/// `epochs_per_checkpoint` epochs when a directory is given.
TrainResult train(const EncodedCorpus& corpus, const Vocabulary& vocab,
                  const SimilarityMatrix& matrix, const TrainingConfig& config,
                  const TrainOptions& options = {});

TrainResult continue_training(Trainer& trainer, int until_epoch, const TrainOptions& options);

// Text format: "<V> <d>" then "token v1 ... vd", input vectors, 6 decimals.
void export_text(const EmbeddingModel& m, const Vocabulary& vocab, std::ostream& out);
void export_text(const EmbeddingModel& m, const Vocabulary& vocab, const std::filesystem::path& path);

}  // namespace more
