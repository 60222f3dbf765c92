#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "more/corpus.hpp"
#include "more/ontology.hpp"

namespace more {

/// Vocabulary tokens that equal the (lowercased, single-word) label of at
/// least one concept. Ambiguous tokens keep every matching concept.
struct WordConceptMap {
  std::map<TokenId, std::vector<ConceptIndex>> entries;

  bool empty() const noexcept { return entries.empty(); }
  std::size_t size() const noexcept { return entries.size(); }
};

WordConceptMap intersect(const Vocabulary& vocab, const OntologyGraph& g);

enum class Orientation { similarity, distance };

// Min-max bounds of a measure over the pair population.
struct MeasureRange {
  double min;
  double max;

  // Scales x into [0,1]; distance-oriented values are inverted afterwards so
  // that 1 always means "most similar". A degenerate range maps to 1 for
  // similarities and 0 for distances.
  double normalize(double x, Orientation o) const;
};

std::vector<double> normalize_measure(std::span<const double> values, Orientation o);

// Median; even counts average the two middle values. Throws on empty input.
double fuse_median(std::span<const double> scores);

/// Symmetric token-pair scores in [0,1]. Only tokens with a slot (the matched
/// tokens) can carry scores; lookups of absent pairs return the sentinel.
class SimilarityMatrix {
 public:
  static constexpr double kSentinel = -1.0;

  SimilarityMatrix() = default;
  explicit SimilarityMatrix(const Vocabulary& vocab);

  double lookup(TokenId a, TokenId b) const noexcept {
    if (a >= slot_.size() || b >= slot_.size()) return kSentinel;
    const std::int32_t sa = slot_[a];
    const std::int32_t sb = slot_[b];
    if (sa < 0 || sb < 0) return kSentinel;
    const float v = scores_[tri_index(sa, sb)];
    return v != v ? kSentinel : static_cast<double>(v);
  }

  // Stores a score in [0,1]; the token pair gains slots if needed.
  void set(TokenId a, TokenId b, double score);

  bool empty() const noexcept { return pair_count_ == 0; }
  std::size_t token_count() const noexcept { return slot_tokens_.size(); }
  std::size_t pair_count() const noexcept { return pair_count_; }
  std::uint64_t vocab_hash() const noexcept { return vocab_hash_; }
  std::size_t vocab_size() const noexcept { return slot_.size(); }
  std::span<const TokenId> tokens() const noexcept { return slot_tokens_; }

  void write(std::ostream& out, const Vocabulary& vocab) const;
  static SimilarityMatrix read(std::istream& in, const Vocabulary& vocab,
                               const std::string& source = "<matrix>");
  void save(const std::filesystem::path& path, const Vocabulary& vocab) const;
  /// Throws ChecksumMismatchError when the file was produced for another vocabulary.
  static SimilarityMatrix load(const std::filesystem::path& path, const Vocabulary& vocab);

  friend bool operator==(const SimilarityMatrix& a, const SimilarityMatrix& b);
  friend SimilarityMatrix build_matrix(const Vocabulary&, const OntologyGraph&,
                                       const WordConceptMap&);

 private:
  std::int32_t ensure_slot(TokenId t);

  static std::size_t tri_index(std::int32_t a, std::int32_t b) noexcept {
    const auto lo = static_cast<std::size_t>(a < b ? a : b);
    const auto hi = static_cast<std::size_t>(a < b ? b : a);
    return hi * (hi + 1) / 2 + lo;
  }

  std::uint64_t vocab_hash_ = 0;
  std::vector<std::int32_t> slot_;
  std::vector<TokenId> slot_tokens_;
  std::vector<float> scores_;  // lower triangle over slots, NaN = absent
  std::size_t pair_count_ = 0;
};

/// Scores every unordered pair of mapped tokens, self-pairs included: wup
/// as is, lch min-max scaled, nam min-max scaled and inverted, pooled over
/// all concept combinations and fused by median. OpenMP-parallel over
/// concept sources and token pairs.
SimilarityMatrix build_matrix(const Vocabulary& vocab, const OntologyGraph& g,
                              const WordConceptMap& map);

// Reference path for testing: per-pair ontology queries, no tables, one thread.
SimilarityMatrix build_matrix_serial(const Vocabulary& vocab, const OntologyGraph& g,
                                     const WordConceptMap& map);

}  // namespace more
