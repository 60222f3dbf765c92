#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace more {

using TokenId = std::uint32_t;
using Rng = std::mt19937_64;

// Lowercases, splits on whitespace and strips leading/trailing characters
// outside [a-z0-9-] from each token. Empty tokens are dropped.
std::vector<std::string> tokenize(std::string_view line);

using TokenCounts = std::unordered_map<std::string, std::uint64_t>;

void add_counts(TokenCounts& counts, std::string_view line);
TokenCounts count_tokens(std::span<const std::filesystem::path> files);

/// Token <-> dense id mapping. Ids follow descending count, ties broken
/// lexicographically, so id 0 is the most frequent token.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Drops tokens below `min_count`. Throws EmptyVocabularyError when nothing survives.
  static Vocabulary build(const TokenCounts& counts, std::uint64_t min_count);
  static Vocabulary from_tokens(std::span<const std::string> tokens, std::uint64_t min_count);

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::uint64_t count(TokenId id) const { return counts_.at(id); }
  std::optional<TokenId> id(std::string_view token) const;
  std::uint64_t total_count() const noexcept { return total_count_; }
  std::uint64_t min_count() const noexcept { return min_count_; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  /// FNV-1a over the ordered (token, count) rows; binds matrices and checkpoints
  /// to this vocabulary.
  std::uint64_t checksum() const noexcept;
  std::string checksum_hex() const;

  void write(std::ostream& out) const;
  static Vocabulary read(std::istream& in, const std::string& source = "<vocab>");
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.counts_ == b.counts_;
  }

 private:
  void index();

  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, TokenId> ids_;
  std::uint64_t total_count_ = 0;
  std::uint64_t min_count_ = 1;
};

std::string to_hex(std::uint64_t value);
std::uint64_t from_hex(std::string_view text);

/// Lines of in-vocabulary token ids. Out-of-vocabulary tokens are removed and
/// lines left empty are dropped; a line is a window boundary.
struct EncodedCorpus {
  std::vector<std::vector<TokenId>> lines;
  std::uint64_t token_count = 0;
};

EncodedCorpus encode_lines(std::span<const std::string> lines, const Vocabulary& vocab);
EncodedCorpus encode_corpus(std::span<const std::filesystem::path> files, const Vocabulary& vocab);

// word2vec keep probability min(1, (sqrt(f/t) + 1) * t / f).
double keep_probability(double freq, double threshold);

/// Per-token keep probabilities for a vocabulary at the given threshold.
std::vector<double> keep_probabilities(const Vocabulary& vocab, double threshold);

// Drops each token independently with probability 1 - keep[token].
// Tokens kept with certainty consume no random numbers.
void subsample(std::span<const TokenId> line, std::span<const double> keep, Rng& rng,
               std::vector<TokenId>& out);

struct TrainingPair {
  TokenId center;
  TokenId context;

  friend bool operator==(const TrainingPair&, const TrainingPair&) = default;
  friend auto operator<=>(const TrainingPair&, const TrainingPair&) = default;
};

/// Calls `emit(TrainingPair)` for every (center, context) within `window`
/// positions on the same line. With `shrink` set, each center draws an
/// effective window uniformly from [1, window] (word2vec style).
template <class Emit>
void for_each_pair(std::span<const TokenId> tokens, int window, Emit&& emit, Rng* shrink = nullptr) {
  const auto n = static_cast<std::ptrdiff_t>(tokens.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::ptrdiff_t w = window;
    if (shrink != nullptr && window > 1) {
      w = std::uniform_int_distribution<std::ptrdiff_t>(1, window)(*shrink);
    }
    const std::ptrdiff_t lo = i - w < 0 ? 0 : i - w;
    const std::ptrdiff_t hi = i + w >= n ? n - 1 : i + w;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) {
      if (j != i) emit(TrainingPair{tokens[i], tokens[j]});
    }
  }
}

std::vector<TrainingPair> generate_pairs(std::span<const TokenId> tokens, int window,
                                         Rng* shrink = nullptr);

/// Unigram^alpha noise distribution for negative sampling.
class NoiseDistribution {
 public:
  NoiseDistribution(const Vocabulary& vocab, double alpha);

  std::size_t size() const noexcept { return weights_.size(); }
  double weight(TokenId id) const { return weights_.at(id); }
  double total_weight() const noexcept { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  double probability(TokenId id) const { return weight(id) / total_weight(); }
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }

  TokenId sample(Rng& rng) const;

 private:
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

}  // namespace more
