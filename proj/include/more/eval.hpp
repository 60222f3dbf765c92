#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "more/corpus.hpp"
#include "more/trainer.hpp"

namespace more {

/// Read-only token -> vector table; what evaluation consumes.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> tokens, std::size_t dim, std::vector<float> values);

  // Input vectors of a trained model.
  static EmbeddingTable from_model(const EmbeddingModel& m, const Vocabulary& vocab);
  // Reads the "<V> <d>" text format written by export_text.
  static EmbeddingTable load_text(std::istream& in, const std::string& source = "<vectors>");
  static EmbeddingTable load_text(const std::filesystem::path& path);

  std::size_t size() const noexcept { return tokens_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& token(std::size_t row) const { return tokens_.at(row); }
  std::optional<std::span<const float>> find(std::string_view token) const;
  std::span<const float> row(std::size_t r) const { return {values_.data() + r * dim_, dim_}; }

 private:
  std::vector<std::string> tokens_;
  std::size_t dim_ = 0;
  std::vector<float> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Mean of the constituent token vectors; nullopt (excluded) when any token is
/// out of vocabulary or the term has no tokens.
std::optional<std::vector<double>> term_vector(std::string_view term, const EmbeddingTable& table);

// Throws DomainError on a zero vector.
double cosine(std::span<const double> a, std::span<const double> b);

// Sample Pearson correlation. Throws PreconditionError for n < 3 or constant input.
double pearson(std::span<const double> xs, std::span<const double> ys);
// Pearson over mid-ranks.
double spearman(std::span<const double> xs, std::span<const double> ys);
std::vector<double> mid_ranks(std::span<const double> xs);

struct SignificanceTest {
  double t = 0.0;
  double p = 1.0;
  double ci_low = -1.0;
  double ci_high = 1.0;
  int df = 0;
};

// t = r sqrt((n-2)/(1-r^2)), two-sided Student-t p with n-2 df, Fisher-z 95% CI.
SignificanceTest correlation_test(double r, std::size_t n);

struct RatedPair {
  std::string term1;
  std::string term2;
  std::vector<double> ratings;  // one per rater group
};

struct EvalDataset {
  std::vector<std::string> groups;
  std::vector<RatedPair> pairs;

  static EvalDataset read(std::istream& in, const std::string& source = "<benchmark>");
  static EvalDataset load(const std::filesystem::path& path);
};

struct CorrelationReport {
  std::string group;
  std::size_t n = 0;         // observations correlated
  std::size_t excluded = 0;  // pairs dropped
  double r = 0.0;
  double r_spearman = 0.0;
  SignificanceTest test;
  std::vector<std::size_t> excluded_pairs;  // indices into the dataset
};

inline constexpr std::string_view kCombinedGroup = "combined";

/// Correlates pair cosines with one rater group, or with every group's
/// ratings concatenated when `group` is "combined". Throws
/// InsufficientDataError below three usable pairs.
CorrelationReport evaluate(const EmbeddingTable& table, const EvalDataset& dataset,
                           std::string_view group);

// One report per group, then the combined one when there are several groups.
std::vector<CorrelationReport> evaluate_all(const EmbeddingTable& table, const EvalDataset& dataset);

void write_report_table(std::ostream& out, std::span<const CorrelationReport> reports,
                        const EvalDataset& dataset);
void write_report_tsv(std::ostream& out, std::span<const CorrelationReport> reports);

}  // namespace more
