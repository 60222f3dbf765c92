#include "more/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <map>

#include "more/error.hpp"

namespace more {

namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

std::string lowercase(std::string s) {
  for (auto& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool skippable(const std::string& line) {
  return line.empty() || line[0] == '#';
}

// Splits "a<TAB>b" exactly once; returns false otherwise.
bool split_tab(const std::string& line, std::string& a, std::string& b) {
  const auto tab = line.find('\t');
  if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) return false;
  a = line.substr(0, tab);
  b = line.substr(tab + 1);
  return !a.empty() && !b.empty();
}

}  // namespace

OntologyGraph OntologyGraph::build(std::vector<ConceptLabel> labels, std::span<const IsAEdge> edges,
                                   std::vector<std::string>* warnings) {
  std::sort(labels.begin(), labels.end(),
            [](const ConceptLabel& a, const ConceptLabel& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i].id == labels[i - 1].id) {
      throw ParseError("<labels>", 0, "duplicate concept id '" + labels[i].id + "'");
    }
  }

  OntologyGraph g;
  const std::size_t n = labels.size();
  g.ids_.reserve(n + 1);
  g.labels_.reserve(n + 1);
  for (auto& l : labels) {
    if (l.id == kSyntheticRootId) throw ParseError("<labels>", 0, "reserved concept id '<root>'");
    g.index_.emplace(l.id, static_cast<ConceptIndex>(g.ids_.size()));
    g.ids_.push_back(std::move(l.id));
    g.labels_.push_back(lowercase(std::move(l.label)));
  }

  if (warnings != nullptr) {
    std::map<std::string_view, std::vector<std::string_view>> by_label;
    for (std::size_t i = 0; i < n; ++i) by_label[g.labels_[i]].push_back(g.ids_[i]);
    for (const auto& [label, ids] : by_label) {
      if (ids.size() < 2) continue;
      std::string msg = "label '" + std::string(label) + "' is shared by concepts";
      for (auto id : ids) msg += " " + std::string(id);
      warnings->push_back(std::move(msg));
    }
  }

  g.parents_.assign(n, {});
  g.children_.assign(n, {});
  for (const auto& e : edges) {
    const ConceptIndex child = g.require(e.child);
    const ConceptIndex parent = g.require(e.parent);
    if (child == parent) throw CycleError(e.child);
    g.parents_[child].push_back(parent);
    g.children_[parent].push_back(child);
  }
  for (std::size_t c = 0; c < n; ++c) {
    auto& ps = g.parents_[c];
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    auto& cs = g.children_[c];
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  }

  std::vector<ConceptIndex> parentless;
  for (ConceptIndex c = 0; c < n; ++c) {
    if (g.parents_[c].empty()) parentless.push_back(c);
  }
  if (parentless.size() == 1 && !g.children_[parentless[0]].empty()) {
    g.root_ = parentless[0];
  } else {
    g.root_ = static_cast<ConceptIndex>(n);
    g.synthetic_root_ = true;
    g.ids_.emplace_back(kSyntheticRootId);
    g.labels_.emplace_back();
    g.parents_.emplace_back();
    g.children_.emplace_back(parentless);
    for (ConceptIndex c : parentless) g.parents_[c].push_back(g.root_);
  }
  const std::size_t total = g.ids_.size();

  // Kahn's algorithm from the root downwards. Anything left over sits on or
  // below a cycle.
  std::vector<std::size_t> pending(total);
  for (std::size_t c = 0; c < total; ++c) pending[c] = g.parents_[c].size();
  std::vector<ConceptIndex> order;
  order.reserve(total);
  order.push_back(g.root_);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (ConceptIndex ch : g.children_[order[head]]) {
      if (--pending[ch] == 0) order.push_back(ch);
    }
  }
  if (order.size() != total) {
    std::vector<bool> done(total, false);
    for (ConceptIndex c : order) done[c] = true;
    ConceptIndex start = 0;
    while (done[start]) ++start;
    // Walk unfinished parents until a node repeats; that node is on a cycle.
    std::vector<bool> seen(total, false);
    ConceptIndex cur = start;
    while (!seen[cur]) {
      seen[cur] = true;
      for (ConceptIndex p : g.parents_[cur]) {
        if (!done[p]) {
          cur = p;
          break;
        }
      }
    }
    throw CycleError(g.ids_[cur]);
  }

  g.depth_.assign(total, kUnreached);
  g.depth_[g.root_] = 1;
  std::deque<ConceptIndex> queue{g.root_};
  while (!queue.empty()) {
    const ConceptIndex c = queue.front();
    queue.pop_front();
    for (ConceptIndex ch : g.children_[c]) {
      if (g.depth_[ch] == kUnreached) {
        g.depth_[ch] = g.depth_[c] + 1;
        queue.push_back(ch);
      }
    }
  }
  g.max_depth_ = *std::max_element(g.depth_.begin(), g.depth_.end());

  g.ancestors_.assign(total, {});
  for (ConceptIndex c : order) {
    auto& anc = g.ancestors_[c];
    anc.push_back(c);
    for (ConceptIndex p : g.parents_[c]) {
      anc.insert(anc.end(), g.ancestors_[p].begin(), g.ancestors_[p].end());
    }
    std::sort(anc.begin(), anc.end());
    anc.erase(std::unique(anc.begin(), anc.end()), anc.end());
  }
  return g;
}

OntologyGraph OntologyGraph::parse(const std::filesystem::path& edges_file,
                                   const std::filesystem::path& labels_file,
                                   std::vector<std::string>* warnings) {
  std::vector<ConceptLabel> labels;
  std::vector<IsAEdge> edges;
  std::string line, a, b;

  std::ifstream lin(labels_file);
  if (!lin) throw IoError("cannot open '" + labels_file.string() + "'");
  for (std::size_t lineno = 1; std::getline(lin, line); ++lineno) {
    strip_cr(line);
    if (skippable(line)) continue;
    if (!split_tab(line, a, b)) throw ParseError(labels_file.string(), lineno, "expected 'concept_id<TAB>label'");
    labels.push_back({a, b});
  }

  std::ifstream ein(edges_file);
  if (!ein) throw IoError("cannot open '" + edges_file.string() + "'");
  for (std::size_t lineno = 1; std::getline(ein, line); ++lineno) {
    strip_cr(line);
    if (skippable(line)) continue;
    if (!split_tab(line, a, b)) throw ParseError(edges_file.string(), lineno, "expected 'child_id<TAB>parent_id'");
    edges.push_back({a, b});
  }
  return build(std::move(labels), edges, warnings);
}

std::optional<ConceptIndex> OntologyGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    if (synthetic_root_ && id == kSyntheticRootId) return root_;
    return std::nullopt;
  }
  return it->second;
}

ConceptIndex OntologyGraph::require(std::string_view id) const {
  if (auto c = find(id)) return *c;
  throw UnknownConceptError(std::string(id));
}

std::vector<std::uint32_t> OntologyGraph::path_lengths_from(ConceptIndex source) const {
  if (source >= size()) throw UnknownConceptError(std::to_string(source));
  std::vector<std::uint32_t> dist(size(), kUnreached);
  std::vector<ConceptIndex> frontier{source};
  dist[source] = 1;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const ConceptIndex c = frontier[head];
    const std::uint32_t next = dist[c] + 1;
    for (ConceptIndex p : parents_[c]) {
      if (dist[p] == kUnreached) {
        dist[p] = next;
        frontier.push_back(p);
      }
    }
    for (ConceptIndex ch : children_[c]) {
      if (dist[ch] == kUnreached) {
        dist[ch] = next;
        frontier.push_back(ch);
      }
    }
  }
  return dist;
}

namespace {

void check(const OntologyGraph& g, ConceptIndex c) {
  if (c >= g.size()) throw UnknownConceptError("#" + std::to_string(c));
}

}  // namespace

std::uint32_t shortest_path_len(const OntologyGraph& g, ConceptIndex a, ConceptIndex b) {
  check(g, a);
  check(g, b);
  if (a == b) return 1;
  std::vector<std::uint32_t> dist(g.size(), kUnreached);
  std::vector<ConceptIndex> frontier{a};
  dist[a] = 1;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const ConceptIndex c = frontier[head];
    for (auto adj : {g.parents(c), g.children(c)}) {
      for (ConceptIndex x : adj) {
        if (dist[x] != kUnreached) continue;
        dist[x] = dist[c] + 1;
        if (x == b) return dist[x];
        frontier.push_back(x);
      }
    }
  }
  // Unreachable only if the graph were disconnected, which rooting rules out.
  throw Error("no path between '" + g.id(a) + "' and '" + g.id(b) + "'");
}

std::uint32_t shortest_path_len(const OntologyGraph& g, std::string_view a, std::string_view b) {
  return shortest_path_len(g, g.require(a), g.require(b));
}

std::pair<ConceptIndex, std::uint32_t> lowest_common_subsumer(const OntologyGraph& g,
                                                              ConceptIndex a, ConceptIndex b) {
  check(g, a);
  check(g, b);
  auto xs = g.ancestors(a);
  auto ys = g.ancestors(b);
  ConceptIndex best = g.root();
  std::uint32_t best_depth = 0;
  auto i = xs.begin();
  auto j = ys.begin();
  // Both lists are sorted by index, so the first maximum found is the smallest index.
  while (i != xs.end() && j != ys.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      const std::uint32_t d = g.depth(*i);
      if (d > best_depth) {
        best_depth = d;
        best = *i;
      }
      ++i;
      ++j;
    }
  }
  return {best, best_depth};
}

ConceptPairGeometry lcs(const OntologyGraph& g, ConceptIndex a, ConceptIndex b) {
  const auto [c, d] = lowest_common_subsumer(g, a, b);
  return ConceptPairGeometry{shortest_path_len(g, a, b), c, d};
}

ConceptPairGeometry lcs(const OntologyGraph& g, std::string_view a, std::string_view b) {
  return lcs(g, g.require(a), g.require(b));
}

double wup_formula(std::uint32_t depth_a, std::uint32_t depth_b, std::uint32_t lcs_depth) {
  // With shortest-chain depths a poly-hierarchy can put the LCS deeper than
  // one of the concepts, so the ratio is capped at 1.
  return std::min(1.0, 2.0 * lcs_depth / (static_cast<double>(depth_a) + depth_b));
}

double lch_formula(std::uint32_t path_len, std::uint32_t max_depth) {
  return -std::log(static_cast<double>(path_len) / (2.0 * max_depth));
}

double nam_formula(std::uint32_t path_len, std::uint32_t max_depth, std::uint32_t lcs_depth) {
  return std::log((static_cast<double>(path_len) - 1.0) *
                      (static_cast<double>(max_depth) - lcs_depth) +
                  2.0);
}

double sim_wup(const OntologyGraph& g, ConceptIndex a, ConceptIndex b) {
  const auto [c, d] = lowest_common_subsumer(g, a, b);
  return wup_formula(g.depth(a), g.depth(b), d);
}

double sim_lch(const OntologyGraph& g, ConceptIndex a, ConceptIndex b) {
  return lch_formula(shortest_path_len(g, a, b), g.max_depth());
}

double sim_nam(const OntologyGraph& g, ConceptIndex a, ConceptIndex b) {
  const auto geo = lcs(g, a, b);
  return nam_formula(geo.path_len, g.max_depth(), geo.lcs_depth);
}

MeasureValues all_measures(const OntologyGraph& g, ConceptIndex a, ConceptIndex b) {
  const auto geo = lcs(g, a, b);
  return {wup_formula(g.depth(a), g.depth(b), geo.lcs_depth), lch_formula(geo.path_len, g.max_depth()),
          nam_formula(geo.path_len, g.max_depth(), geo.lcs_depth)};
}

MeasureValues all_measures(const OntologyGraph& g, std::string_view a, std::string_view b) {
  return all_measures(g, g.require(a), g.require(b));
}

}  // namespace more
