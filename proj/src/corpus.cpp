#include "more/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "more/error.hpp"

namespace more {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_kept_edge(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

template <class Fn>
void for_each_token(std::string_view line, Fn&& fn) {
  std::string token;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < n && !is_space(line[j])) ++j;
    if (j > i) {
      std::size_t b = i, e = j;
      while (b < e && !is_kept_edge(lower(line[b]))) ++b;
      while (e > b && !is_kept_edge(lower(line[e - 1]))) --e;
      if (e > b) {
        token.assign(line.substr(b, e - b));
        for (auto& c : token) c = lower(c);
        fn(token);
      }
    }
    i = j;
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  for_each_token(line, [&](const std::string& t) { out.push_back(t); });
  return out;
}

void add_counts(TokenCounts& counts, std::string_view line) {
  for_each_token(line, [&](const std::string& t) { ++counts[t]; });
}

TokenCounts count_tokens(std::span<const std::filesystem::path> files) {
  TokenCounts counts;
  std::string line;
  for (const auto& path : files) {
    auto in = open_input(path);
    while (std::getline(in, line)) add_counts(counts, line);
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary Vocabulary::build(const TokenCounts& counts, std::uint64_t min_count) {
  if (min_count < 1) throw PreconditionError("min_count must be >= 1");
  std::vector<std::pair<std::string, std::uint64_t>> rows;
  for (const auto& [token, count] : counts) {
    if (count >= min_count) rows.emplace_back(token, count);
  }
  if (rows.empty()) {
    throw EmptyVocabularyError("no token occurs at least " + std::to_string(min_count) +
                               " times");
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  Vocabulary v;
  v.min_count_ = min_count;
  v.tokens_.reserve(rows.size());
  v.counts_.reserve(rows.size());
  for (auto& [token, count] : rows) {
    v.tokens_.push_back(std::move(token));
    v.counts_.push_back(count);
  }
  v.index();
  return v;
}

Vocabulary Vocabulary::from_tokens(std::span<const std::string> tokens, std::uint64_t min_count) {
  TokenCounts counts;
  for (const auto& t : tokens) ++counts[t];
  return build(counts, min_count);
}

void Vocabulary::index() {
  ids_.clear();
  ids_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) ids_.emplace(tokens_[i], static_cast<TokenId>(i));
  total_count_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::optional<TokenId> Vocabulary::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::checksum() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    mix(tokens_[i]);
    mix("\t");
    mix(std::to_string(counts_[i]));
    mix("\n");
  }
  return h;
}

std::string Vocabulary::checksum_hex() const { return to_hex(checksum()); }

void Vocabulary::write(std::ostream& out) const {
  out << "#vocab v1 total=" << total_count_ << '\n';
  for (std::size_t i = 0; i < tokens_.size(); ++i) out << tokens_[i] << '\t' << counts_[i] << '\n';
}

Vocabulary Vocabulary::read(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing '#vocab v1' header");
  ++lineno;
  const std::string prefix = "#vocab v1 total=";
  if (line.rfind(prefix, 0) != 0) throw ParseError(source, lineno, "expected '#vocab v1 total=<N>'");
  std::uint64_t declared_total = 0;
  try {
    declared_total = std::stoull(line.substr(prefix.size()));
  } catch (const std::exception&) {
    throw ParseError(source, lineno, "bad total in header");
  }

  TokenCounts counts;
  std::uint64_t smallest = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw ParseError(source, lineno, "expected 'token<TAB>count'");
    }
    std::uint64_t count = 0;
    std::size_t used = 0;
    try {
      count = std::stoull(line.substr(tab + 1), &used);
    } catch (const std::exception&) {
      throw ParseError(source, lineno, "bad count");
    }
    if (used != line.size() - tab - 1 || count == 0) throw ParseError(source, lineno, "bad count");
    if (!counts.emplace(line.substr(0, tab), count).second) {
      throw ParseError(source, lineno, "duplicate token");
    }
    smallest = smallest == 0 ? count : std::min(smallest, count);
  }
  if (counts.empty()) throw EmptyVocabularyError(source + ": vocabulary file has no tokens");
  Vocabulary v = build(counts, smallest);
  if (v.total_count() != declared_total) {
    throw ParseError(source, 1, "header total " + std::to_string(declared_total) +
                                    " does not match sum of counts " +
                                    std::to_string(v.total_count()));
  }
  return v;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write(out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read(in, path.string());
}

std::string to_hex(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
    value >>= 4;
  }
  return s;
}

std::uint64_t from_hex(std::string_view text) {
  if (text.empty() || text.size() > 16) throw ParseError("<hex>", 0, "bad hex value");
  std::uint64_t v = 0;
  for (char c : text) {
    v <<= 4;
    if (c >= '0' && c <= '9') v |= static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f') v |= static_cast<std::uint64_t>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') v |= static_cast<std::uint64_t>(c - 'A' + 10);
    else throw ParseError("<hex>", 0, "bad hex value '" + std::string(text) + "'");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Encoding, subsampling, pairs

namespace {

void encode_line(std::string_view line, const Vocabulary& vocab, EncodedCorpus& corpus,
                 std::vector<TokenId>& buf) {
  buf.clear();
  for_each_token(line, [&](const std::string& t) {
    if (auto id = vocab.id(t)) buf.push_back(*id);
  });
  corpus.token_count += buf.size();
  if (!buf.empty()) corpus.lines.push_back(buf);
}

}  // namespace

EncodedCorpus encode_lines(std::span<const std::string> lines, const Vocabulary& vocab) {
  EncodedCorpus corpus;
  std::vector<TokenId> buf;
  for (const auto& line : lines) encode_line(line, vocab, corpus, buf);
  return corpus;
}

EncodedCorpus encode_corpus(std::span<const std::filesystem::path> files, const Vocabulary& vocab) {
  EncodedCorpus corpus;
  std::vector<TokenId> buf;
  std::string line;
  for (const auto& path : files) {
    auto in = open_input(path);
    while (std::getline(in, line)) encode_line(line, vocab, corpus, buf);
  }
  return corpus;
}

double keep_probability(double freq, double threshold) {
  if (!(freq > 0.0)) throw DomainError("keep_probability: frequency must be > 0");
  if (!(threshold > 0.0)) throw DomainError("keep_probability: threshold must be > 0");
  const double p = (std::sqrt(freq / threshold) + 1.0) * (threshold / freq);
  return std::min(1.0, p);
}

std::vector<double> keep_probabilities(const Vocabulary& vocab, double threshold) {
  std::vector<double> keep(vocab.size());
  const double total = static_cast<double>(vocab.total_count());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    keep[i] = keep_probability(static_cast<double>(vocab.count(static_cast<TokenId>(i))) / total,
                               threshold);
  }
  return keep;
}

void subsample(std::span<const TokenId> line, std::span<const double> keep, Rng& rng,
               std::vector<TokenId>& out) {
  out.clear();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (TokenId t : line) {
    const double p = keep[t];
    if (p >= 1.0 || unit(rng) < p) out.push_back(t);
  }
}

std::vector<TrainingPair> generate_pairs(std::span<const TokenId> tokens, int window, Rng* shrink) {
  if (window < 1) throw PreconditionError("window must be >= 1");
  std::vector<TrainingPair> pairs;
  for_each_pair(tokens, window, [&](TrainingPair p) { pairs.push_back(p); }, shrink);
  return pairs;
}

// ---------------------------------------------------------------------------
// Noise distribution

NoiseDistribution::NoiseDistribution(const Vocabulary& vocab, double alpha) {
  if (!(alpha >= 0.0)) throw PreconditionError("alpha must be >= 0");
  if (vocab.empty()) throw EmptyVocabularyError("noise distribution over an empty vocabulary");
  weights_.resize(vocab.size());
  cumulative_.resize(vocab.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    weights_[i] = std::pow(static_cast<double>(vocab.count(static_cast<TokenId>(i))), alpha);
    acc += weights_[i];
    cumulative_[i] = acc;
  }
}

TokenId NoiseDistribution::sample(Rng& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, cumulative_.back())(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<TokenId>(it - cumulative_.begin());
}

}  // namespace more
