#include "more/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include <boost/math/distributions/students_t.hpp>

#include "more/error.hpp"

namespace more {

// ---------------------------------------------------------------------------
// EmbeddingTable

EmbeddingTable::EmbeddingTable(std::vector<std::string> tokens, std::size_t dim, std::vector<float> values)
    : tokens_(std::move(tokens)), dim_(dim), values_(std::move(values)) {
  if (values_.size() != tokens_.size() * dim_) throw PreconditionError("embedding table size mismatch");
  for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
}

EmbeddingTable EmbeddingTable::from_model(const EmbeddingModel& m, const Vocabulary& vocab) {
  if (m.vocab_size() != vocab.size()) throw PreconditionError("model rows do not match vocabulary size");
  auto t = m.input_table();
  return EmbeddingTable(vocab.tokens(), m.dim(), std::vector<float>(t.begin(), t.end()));
}

EmbeddingTable EmbeddingTable::load_text(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing '<V> <d>' header");
  std::size_t rows = 0, dim = 0;
  {
    std::istringstream head(line);
    if (!(head >> rows >> dim) || dim == 0) throw ParseError(source, 1, "expected '<V> <d>'");
  }
  std::vector<std::string> tokens;
  std::vector<float> values;
  tokens.reserve(rows);
  values.reserve(rows * dim);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t lineno = r + 2;
    if (!std::getline(in, line)) throw ParseError(source, lineno, "file truncated");
    const auto sp = line.find(' ');
    if (sp == std::string::npos || sp == 0) throw ParseError(source, lineno, "expected 'token v1 ... vd'");
    tokens.push_back(line.substr(0, sp));
    const char* p = line.c_str() + sp;
    for (std::size_t k = 0; k < dim; ++k) {
      char* end = nullptr;
      const float v = std::strtof(p, &end);
      if (end == p) throw ParseError(source, lineno, "expected " + std::to_string(dim) + " values");
      values.push_back(v);
      p = end;
    }
    while (*p == ' ' || *p == '\r') ++p;
    if (*p != '\0') throw ParseError(source, lineno, "trailing data in row");
  }
  return EmbeddingTable(std::move(tokens), dim, std::move(values));
}

EmbeddingTable EmbeddingTable::load_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return load_text(in, path.string());
}

std::optional<std::span<const float>> EmbeddingTable::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

// ---------------------------------------------------------------------------
// Vectors and correlation

std::optional<std::vector<double>> term_vector(std::string_view term, const EmbeddingTable& table) {
  const auto tokens = tokenize(term);
  if (tokens.empty()) return std::nullopt;
  std::vector<double> mean(table.dim(), 0.0);
  for (const auto& t : tokens) {
    auto v = table.find(t);
    if (!v) return std::nullopt;
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += (*v)[k];
  }
  for (auto& x : mean) x /= static_cast<double>(tokens.size());
  return mean;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw PreconditionError("cosine: dimension mismatch");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  if (aa == 0.0 || bb == 0.0) throw DomainError("cosine of a zero vector");
  return std::clamp(ab / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw PreconditionError("pearson: length mismatch");
  const std::size_t n = xs.size();
  if (n < 3) throw PreconditionError("pearson: need at least 3 observations");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw PreconditionError("pearson: constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> mid_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  const auto rx = mid_ranks(xs);
  const auto ry = mid_ranks(ys);
  return pearson(rx, ry);
}

namespace {

double two_sided_p(double t, int df) {
  boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

std::pair<double, double> fisher_ci(double r, std::size_t n) {
  const double z = std::atanh(r);
  const double half = 1.96 / std::sqrt(static_cast<double>(n) - 3.0);
  return {std::tanh(z - half), std::tanh(z + half)};
}

// correlation_test with the degenerate cases evaluation can hit: n = 3 has
// no Fisher interval, |r| = 1 has an infinite t.
SignificanceTest lenient_test(double r, std::size_t n) {
  if (n >= 4 && std::abs(r) < 1.0) return correlation_test(r, n);
  SignificanceTest s;
  s.df = static_cast<int>(n) - 2;
  if (std::abs(r) >= 1.0) {
    s.t = std::copysign(std::numeric_limits<double>::infinity(), r);
    s.p = 0.0;
    s.ci_low = s.ci_high = r;
    return s;
  }
  s.t = r * std::sqrt((static_cast<double>(n) - 2.0) / (1.0 - r * r));
  s.p = two_sided_p(s.t, s.df);
  return s;
}

}  // namespace

SignificanceTest correlation_test(double r, std::size_t n) {
  if (n < 4) throw PreconditionError("correlation_test: need n >= 4");
  if (!(std::abs(r) < 1.0)) throw PreconditionError("correlation_test: need |r| < 1");
  SignificanceTest s;
  s.df = static_cast<int>(n) - 2;
  s.t = r * std::sqrt((static_cast<double>(n) - 2.0) / (1.0 - r * r));
  s.p = two_sided_p(s.t, s.df);
  std::tie(s.ci_low, s.ci_high) = fisher_ci(r, n);
  return s;
}

// ---------------------------------------------------------------------------
// Datasets

EvalDataset EvalDataset::read(std::istream& in, const std::string& source) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    return cols;
  };
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto head = split(line);
  if (head.size() < 3) throw ParseError(source, 1, "need term1, term2 and at least one rater group");
  EvalDataset ds;
  ds.groups.assign(head.begin() + 2, head.end());
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cols = split(line);
    if (cols.size() != head.size()) {
      throw ParseError(source, lineno, "expected " + std::to_string(head.size()) + " columns");
    }
    if (cols[0].empty() || cols[1].empty()) throw ParseError(source, lineno, "empty term");
    RatedPair p{cols[0], cols[1], {}};
    for (std::size_t g = 2; g < cols.size(); ++g) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cols[g], &used);
      } catch (const std::exception&) {
        throw ParseError(source, lineno, "bad rating '" + cols[g] + "'");
      }
      if (used != cols[g].size() || !std::isfinite(v)) {
        throw ParseError(source, lineno, "bad rating '" + cols[g] + "'");
      }
      p.ratings.push_back(v);
    }
    ds.pairs.push_back(std::move(p));
  }
  return ds;
}

EvalDataset EvalDataset::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read(in, path.string());
}

// ---------------------------------------------------------------------------
// Evaluation

CorrelationReport evaluate(const EmbeddingTable& table, const EvalDataset& dataset, std::string_view group) {
  if (dataset.pairs.empty()) throw PreconditionError("evaluate: empty dataset");
  std::vector<std::size_t> groups;
  if (group == kCombinedGroup) {
    for (std::size_t g = 0; g < dataset.groups.size(); ++g) groups.push_back(g);
  } else {
    auto it = std::find(dataset.groups.begin(), dataset.groups.end(), group);
    if (it == dataset.groups.end()) {
      throw PreconditionError("unknown rater group '" + std::string(group) + "'");
    }
    groups.push_back(static_cast<std::size_t>(it - dataset.groups.begin()));
  }

  CorrelationReport rep;
  rep.group = std::string(group);
  std::vector<double> sims;
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < dataset.pairs.size(); ++i) {
    const auto& pair = dataset.pairs[i];
    auto a = term_vector(pair.term1, table);
    auto b = term_vector(pair.term2, table);
    if (!a || !b) {
      rep.excluded_pairs.push_back(i);
      continue;
    }
    sims.push_back(cosine(*a, *b));
    used.push_back(i);
  }
  rep.excluded = rep.excluded_pairs.size();

  std::vector<double> xs, ys;
  for (std::size_t g : groups) {
    for (std::size_t k = 0; k < used.size(); ++k) {
      xs.push_back(sims[k]);
      ys.push_back(dataset.pairs[used[k]].ratings[g]);
    }
  }
  rep.n = xs.size();
  if (used.size() < 3) {
    throw InsufficientDataError("evaluate: only " + std::to_string(used.size()) +
                                " usable pairs (need 3)");
  }
  rep.r = pearson(xs, ys);
  rep.r_spearman = spearman(xs, ys);
  rep.test = lenient_test(rep.r, rep.n);
  return rep;
}

std::vector<CorrelationReport> evaluate_all(const EmbeddingTable& table, const EvalDataset& dataset) {
  std::vector<CorrelationReport> out;
  for (const auto& g : dataset.groups) out.push_back(evaluate(table, dataset, g));
  if (dataset.groups.size() > 1) out.push_back(evaluate(table, dataset, kCombinedGroup));
  return out;
}

void write_report_table(std::ostream& out, std::span<const CorrelationReport> reports,
                        const EvalDataset& dataset) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-16s %5s %8s %10s %9s %12s  %s\n", "group", "n", "r", "spearman",
                "t", "p", "95% CI");
  out << buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%-16s %5zu %8.3f %10.3f %9.3f %12.4g  [%.3f, %.3f]\n",
                  r.group.c_str(), r.n, r.r, r.r_spearman, r.test.t, r.test.p, r.test.ci_low,
                  r.test.ci_high);
    out << buf;
  }
  if (!reports.empty() && !reports.front().excluded_pairs.empty()) {
    out << "excluded pairs (out-of-vocabulary terms):\n";
    for (std::size_t i : reports.front().excluded_pairs) {
      out << "  " << i + 1 << ": " << dataset.pairs[i].term1 << " / " << dataset.pairs[i].term2 << '\n';
    }
  }
}

void write_report_tsv(std::ostream& out, std::span<const CorrelationReport> reports) {
  out << "group\tn\tr\tr_spearman\tt\tp\tci_low\tci_high\n";
  char buf[512];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%s\t%zu\t%.9g\t%.9g\t%.9g\t%.9g\t%.9g\t%.9g\n", r.group.c_str(), r.n,
                  r.r, r.r_spearman, r.test.t, r.test.p, r.test.ci_low, r.test.ci_high);
    out << buf;
  }
}

}  // namespace more
