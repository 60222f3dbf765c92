#include "more/simmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "more/error.hpp"

namespace more {

namespace {

constexpr float kAbsent = std::numeric_limits<float>::quiet_NaN();

bool single_word(const std::string& label) {
  return !label.empty() && label.find_first_of(" \t") == std::string::npos;
}

}  // namespace

WordConceptMap intersect(const Vocabulary& vocab, const OntologyGraph& g) {
  WordConceptMap map;
  for (ConceptIndex c = 0; c < g.size(); ++c) {
    if (g.has_synthetic_root() && c == g.root()) continue;
    const auto& label = g.label(c);
    if (!single_word(label)) continue;
    if (auto id = vocab.id(label)) map.entries[*id].push_back(c);
  }
  return map;
}

double MeasureRange::normalize(double x, Orientation o) const {
  if (!(max > min)) return o == Orientation::similarity ? 1.0 : 0.0;
  const double scaled = (x - min) / (max - min);
  return o == Orientation::similarity ? scaled : 1.0 - scaled;
}

std::vector<double> normalize_measure(std::span<const double> values, Orientation o) {
  if (values.empty()) throw PreconditionError("normalize_measure: empty value set");
  MeasureRange range{values[0], values[0]};
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("normalize_measure: non-finite value");
    range.min = std::min(range.min, v);
    range.max = std::max(range.max, v);
  }
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = range.normalize(values[i], o);
  return out;
}

double fuse_median(std::span<const double> scores) {
  if (scores.empty()) throw PreconditionError("fuse_median: empty score list");
  std::vector<double> v(scores.begin(), scores.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// ---------------------------------------------------------------------------
// SimilarityMatrix

SimilarityMatrix::SimilarityMatrix(const Vocabulary& vocab)
    : vocab_hash_(vocab.checksum()), slot_(vocab.size(), -1) {}

std::int32_t SimilarityMatrix::ensure_slot(TokenId t) {
  if (t >= slot_.size()) throw PreconditionError("token id outside the bound vocabulary");
  if (slot_[t] >= 0) return slot_[t];
  const auto s = static_cast<std::int32_t>(slot_tokens_.size());
  slot_[t] = s;
  slot_tokens_.push_back(t);
  const std::size_t k = slot_tokens_.size();
  scores_.resize(k * (k + 1) / 2, kAbsent);
  return s;
}

void SimilarityMatrix::set(TokenId a, TokenId b, double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw DomainError("similarity score " + std::to_string(score) + " outside [0,1]");
  }
  const auto sa = ensure_slot(a);
  const auto sb = ensure_slot(b);
  float& cell = scores_[tri_index(sa, sb)];
  if (cell != cell) ++pair_count_;
  cell = static_cast<float>(score);
}

bool operator==(const SimilarityMatrix& a, const SimilarityMatrix& b) {
  if (a.vocab_hash_ != b.vocab_hash_ || a.pair_count_ != b.pair_count_ ||
      a.slot_tokens_.size() != b.slot_tokens_.size() || a.slot_.size() != b.slot_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.slot_tokens_.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const TokenId x = a.slot_tokens_[i];
      const TokenId y = a.slot_tokens_[j];
      const double va = a.lookup(x, y);
      const double vb = b.lookup(x, y);
      if (va != vb) return false;
    }
  }
  return true;
}

void SimilarityMatrix::write(std::ostream& out, const Vocabulary& vocab) const {
  if (vocab.checksum() != vocab_hash_ && !slot_tokens_.empty()) {
    throw ChecksumMismatchError("save matrix", to_hex(vocab_hash_), vocab.checksum_hex());
  }
  struct Row {
    const std::string* a;
    const std::string* b;
    float score;
  };
  std::vector<Row> rows;
  rows.reserve(pair_count_);
  for (std::size_t i = 0; i < slot_tokens_.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const float v = scores_[i * (i + 1) / 2 + j];
      if (v != v) continue;
      const std::string* x = &vocab.token(slot_tokens_[i]);
      const std::string* y = &vocab.token(slot_tokens_[j]);
      if (*y < *x) std::swap(x, y);
      rows.push_back({x, y, v});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& l, const Row& r) {
    return *l.a != *r.a ? *l.a < *r.a : *l.b < *r.b;
  });
  out << "#simmatrix v1 vocab=" << vocab.checksum_hex() << " tokens=" << slot_tokens_.size()
      << " pairs=" << rows.size() << '\n';
  char buf[32];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(r.score));
    out << *r.a << '\t' << *r.b << '\t' << buf << '\n';
  }
}

SimilarityMatrix SimilarityMatrix::read(std::istream& in, const Vocabulary& vocab,
                                        const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing '#simmatrix v1' header");
  std::string vocab_hex;
  std::size_t tokens = 0, pairs = 0;
  {
    const std::string prefix = "#simmatrix v1 ";
    if (line.rfind(prefix, 0) != 0) throw ParseError(source, 1, "expected '#simmatrix v1' header");
    std::istringstream fields(line.substr(prefix.size()));
    std::string field;
    int seen = 0;
    while (fields >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw ParseError(source, 1, "bad header field '" + field + "'");
      const auto key = field.substr(0, eq);
      const auto value = field.substr(eq + 1);
      try {
        if (key == "vocab") vocab_hex = value, seen |= 1;
        else if (key == "tokens") tokens = std::stoull(value), seen |= 2;
        else if (key == "pairs") pairs = std::stoull(value), seen |= 4;
        else throw ParseError(source, 1, "unknown header field '" + key + "'");
      } catch (const std::invalid_argument&) {
        throw ParseError(source, 1, "bad value for '" + key + "'");
      }
    }
    if (seen != 7) throw ParseError(source, 1, "header needs vocab=, tokens= and pairs=");
  }
  if (from_hex(vocab_hex) != vocab.checksum()) {
    throw ChecksumMismatchError(source, vocab.checksum_hex(), vocab_hex);
  }

  SimilarityMatrix m(vocab);
  std::size_t lineno = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw ParseError(source, lineno, "expected 'token1<TAB>token2<TAB>score'");
    const auto a = vocab.id(std::string_view(line).substr(0, t1));
    const auto b = vocab.id(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    if (!a || !b) throw ParseError(source, lineno, "token not in vocabulary");
    double score = 0.0;
    std::size_t used = 0;
    try {
      score = std::stod(line.substr(t2 + 1), &used);
    } catch (const std::exception&) {
      throw ParseError(source, lineno, "bad score");
    }
    if (used != line.size() - t2 - 1) throw ParseError(source, lineno, "bad score");
    if (!(score >= 0.0 && score <= 1.0)) throw ParseError(source, lineno, "score outside [0,1]");
    if (m.lookup(*a, *b) != kSentinel) throw ParseError(source, lineno, "duplicate pair");
    m.set(*a, *b, score);
    ++rows;
  }
  if (rows != pairs) {
    throw ParseError(source, lineno + 1,
                     "expected " + std::to_string(pairs) + " pairs, found " + std::to_string(rows));
  }
  if (m.token_count() != tokens) {
    throw ParseError(source, lineno + 1,
                     "expected " + std::to_string(tokens) + " tokens, found " +
                         std::to_string(m.token_count()));
  }
  return m;
}

void SimilarityMatrix::save(const std::filesystem::path& path, const Vocabulary& vocab) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write(out, vocab);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

SimilarityMatrix SimilarityMatrix::load(const std::filesystem::path& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read(in, vocab, path.string());
}

// ---------------------------------------------------------------------------
// Matrix construction

namespace {

struct RawMeasures {
  double wup;
  double lch;
  double nam;
};

// Shared tables for the parallel build: distinct mapped concepts, their
// pairwise path lengths, and each mapped token's concept positions.
struct PairTables {
  std::vector<ConceptIndex> concepts;
  std::vector<std::uint32_t> path;  // lower triangle over `concepts`
  std::vector<TokenId> tokens;
  std::vector<std::vector<std::uint32_t>> token_concepts;

  std::uint32_t path_len(std::uint32_t i, std::uint32_t j) const {
    const std::size_t hi = std::max(i, j), lo = std::min(i, j);
    return path[hi * (hi + 1) / 2 + lo];
  }
};

PairTables make_tables(const OntologyGraph& g, const WordConceptMap& map) {
  PairTables t;
  for (const auto& [token, cs] : map.entries) t.concepts.insert(t.concepts.end(), cs.begin(), cs.end());
  std::sort(t.concepts.begin(), t.concepts.end());
  t.concepts.erase(std::unique(t.concepts.begin(), t.concepts.end()), t.concepts.end());

  std::vector<std::int64_t> position(g.size(), -1);
  for (std::size_t i = 0; i < t.concepts.size(); ++i) position[t.concepts[i]] = static_cast<std::int64_t>(i);

  for (const auto& [token, cs] : map.entries) {
    t.tokens.push_back(token);
    auto& ps = t.token_concepts.emplace_back();
    for (ConceptIndex c : cs) ps.push_back(static_cast<std::uint32_t>(position[c]));
  }

  const auto k = static_cast<std::int64_t>(t.concepts.size());
  t.path.resize(static_cast<std::size_t>(k * (k + 1) / 2));
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < k; ++i) {
    const auto dist = g.path_lengths_from(t.concepts[static_cast<std::size_t>(i)]);
    const std::size_t row = static_cast<std::size_t>(i * (i + 1) / 2);
    for (std::int64_t j = 0; j <= i; ++j) {
      t.path[row + static_cast<std::size_t>(j)] = dist[t.concepts[static_cast<std::size_t>(j)]];
    }
  }
  return t;
}

RawMeasures raw_measures(const OntologyGraph& g, const PairTables& t, std::uint32_t ci,
                         std::uint32_t cj) {
  const ConceptIndex a = t.concepts[ci];
  const ConceptIndex b = t.concepts[cj];
  const std::uint32_t len = t.path_len(ci, cj);
  const std::uint32_t lcs_depth = lowest_common_subsumer(g, a, b).second;
  return {wup_formula(g.depth(a), g.depth(b), lcs_depth), lch_formula(len, g.max_depth()),
          nam_formula(len, g.max_depth(), lcs_depth)};
}

}  // namespace

SimilarityMatrix build_matrix(const Vocabulary& vocab, const OntologyGraph& g,
                              const WordConceptMap& map) {
  SimilarityMatrix m(vocab);
  if (map.empty()) return m;
  const PairTables t = make_tables(g, map);
  const auto n = static_cast<std::int64_t>(t.tokens.size());

  double lch_min = std::numeric_limits<double>::infinity(), lch_max = -lch_min;
  double nam_min = lch_min, nam_max = -lch_min;
#pragma omp parallel for schedule(dynamic, 8) reduction(min : lch_min, nam_min) \
    reduction(max : lch_max, nam_max)
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j <= i; ++j) {
      for (auto ci : t.token_concepts[static_cast<std::size_t>(i)]) {
        for (auto cj : t.token_concepts[static_cast<std::size_t>(j)]) {
          const auto r = raw_measures(g, t, ci, cj);
          lch_min = std::min(lch_min, r.lch);
          lch_max = std::max(lch_max, r.lch);
          nam_min = std::min(nam_min, r.nam);
          nam_max = std::max(nam_max, r.nam);
        }
      }
    }
  }
  const MeasureRange lch_range{lch_min, lch_max};
  const MeasureRange nam_range{nam_min, nam_max};

  for (TokenId token : t.tokens) m.ensure_slot(token);
  std::vector<float>& cells = m.scores_;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < n; ++i) {
    std::vector<double> pool;
    for (std::int64_t j = 0; j <= i; ++j) {
      pool.clear();
      for (auto ci : t.token_concepts[static_cast<std::size_t>(i)]) {
        for (auto cj : t.token_concepts[static_cast<std::size_t>(j)]) {
          const auto r = raw_measures(g, t, ci, cj);
          pool.push_back(r.wup);
          pool.push_back(lch_range.normalize(r.lch, Orientation::similarity));
          pool.push_back(nam_range.normalize(r.nam, Orientation::distance));
        }
      }
      // Slots were assigned in token order, so slot index == i.
      cells[static_cast<std::size_t>(i * (i + 1) / 2 + j)] = static_cast<float>(fuse_median(pool));
    }
  }
  m.pair_count_ = static_cast<std::size_t>(n * (n + 1) / 2);
  return m;
}

SimilarityMatrix build_matrix_serial(const Vocabulary& vocab, const OntologyGraph& g,
                                     const WordConceptMap& map) {
  SimilarityMatrix m(vocab);
  std::vector<TokenId> tokens;
  for (const auto& [token, cs] : map.entries) tokens.push_back(token);

  struct PairSpan {
    TokenId a, b;
    std::size_t begin, end;
  };
  std::vector<PairSpan> spans;
  std::vector<double> wup, lch, nam;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t j = i; j < tokens.size(); ++j) {
      PairSpan s{tokens[i], tokens[j], wup.size(), 0};
      for (ConceptIndex ca : map.entries.at(tokens[i])) {
        for (ConceptIndex cb : map.entries.at(tokens[j])) {
          const auto v = all_measures(g, ca, cb);
          wup.push_back(v.wup);
          lch.push_back(v.lch);
          nam.push_back(v.nam);
        }
      }
      s.end = wup.size();
      spans.push_back(s);
    }
  }
  if (spans.empty()) return m;

  const auto lch_n = normalize_measure(lch, Orientation::similarity);
  const auto nam_n = normalize_measure(nam, Orientation::distance);
  std::vector<double> pool;
  for (const auto& s : spans) {
    pool.clear();
    for (std::size_t k = s.begin; k < s.end; ++k) {
      pool.push_back(wup[k]);
      pool.push_back(lch_n[k]);
      pool.push_back(nam_n[k]);
    }
    m.set(s.a, s.b, fuse_median(pool));
  }
  return m;
}

}  // namespace more
