#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace more {

using ConceptIndex = std::uint32_t;

struct ConceptPairGeometry {
  std::uint32_t path_len = 0;  // nodes on the shortest undirected path, identity = 1
  ConceptIndex lcs = 0;
  std::uint32_t lcs_depth = 0;
};

struct ConceptLabel {
  std::string id;
  std::string label;
};

struct IsAEdge {
  std::string child;
  std::string parent;
};

/// Rooted is-a DAG. Concept indices follow lexicographic order of the concept
/// ids; a synthetic root, when one is needed, takes the last index.
///
/// Rooting: if exactly one concept has no parent and it has children, it is
/// the root. Otherwise a synthetic root is placed above every parentless
/// concept.
class OntologyGraph {
 public:
  /// Throws CycleError, UnknownConceptError (edge endpoint without a label) or
  /// ParseError (duplicate concept id). Labels shared by several concepts are
  /// reported through `warnings`.
  static OntologyGraph build(std::vector<ConceptLabel> labels, std::span<const IsAEdge> edges,
                             std::vector<std::string>* warnings = nullptr);

  static OntologyGraph parse(const std::filesystem::path& edges_file,
                             const std::filesystem::path& labels_file,
                             std::vector<std::string>* warnings = nullptr);

  std::size_t size() const noexcept { return ids_.size(); }
  ConceptIndex root() const noexcept { return root_; }
  bool has_synthetic_root() const noexcept { return synthetic_root_; }
  std::uint32_t max_depth() const noexcept { return max_depth_; }

  std::optional<ConceptIndex> find(std::string_view id) const;
  // Throws UnknownConceptError.
  ConceptIndex require(std::string_view id) const;

  const std::string& id(ConceptIndex c) const { return ids_.at(c); }
  const std::string& label(ConceptIndex c) const { return labels_.at(c); }
  std::uint32_t depth(ConceptIndex c) const { return depth_.at(c); }
  std::span<const ConceptIndex> parents(ConceptIndex c) const { return parents_.at(c); }
  std::span<const ConceptIndex> children(ConceptIndex c) const { return children_.at(c); }
  // Sorted, includes c itself.
  std::span<const ConceptIndex> ancestors(ConceptIndex c) const { return ancestors_.at(c); }

  /// Node-count distances from `source` to every concept over the undirected hierarchy.
  std::vector<std::uint32_t> path_lengths_from(ConceptIndex source) const;

 private:
  std::vector<std::string> ids_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, ConceptIndex> index_;
  std::vector<std::vector<ConceptIndex>> parents_;
  std::vector<std::vector<ConceptIndex>> children_;
  std::vector<std::vector<ConceptIndex>> ancestors_;
  std::vector<std::uint32_t> depth_;
  std::uint32_t max_depth_ = 0;
  ConceptIndex root_ = 0;
  bool synthetic_root_ = false;
};

inline constexpr std::string_view kSyntheticRootId = "<root>";

std::uint32_t shortest_path_len(const OntologyGraph& g, ConceptIndex a, ConceptIndex b);
std::uint32_t shortest_path_len(const OntologyGraph& g, std::string_view a, std::string_view b);

// Deepest common ancestor (ties: smallest concept index) together with the path length.
ConceptPairGeometry lcs(const OntologyGraph& g, ConceptIndex a, ConceptIndex b);
ConceptPairGeometry lcs(const OntologyGraph& g, std::string_view a, std::string_view b);

// Deepest common ancestor given only the ancestor sets; no path search.
std::pair<ConceptIndex, std::uint32_t> lowest_common_subsumer(const OntologyGraph& g,
                                                              ConceptIndex a, ConceptIndex b);

// Measure formulas over precomputed geometry. Natural log throughout. wup is
// capped at 1.
double wup_formula(std::uint32_t depth_a, std::uint32_t depth_b, std::uint32_t lcs_depth);
double lch_formula(std::uint32_t path_len, std::uint32_t max_depth);
double nam_formula(std::uint32_t path_len, std::uint32_t max_depth, std::uint32_t lcs_depth);

double sim_wup(const OntologyGraph& g, ConceptIndex a, ConceptIndex b);
double sim_lch(const OntologyGraph& g, ConceptIndex a, ConceptIndex b);
// Distance-oriented: grows as concepts get further apart, ln 2 at identity.
double sim_nam(const OntologyGraph& g, ConceptIndex a, ConceptIndex b);

struct MeasureValues {
  double wup;
  double lch;
  double nam;
};

MeasureValues all_measures(const OntologyGraph& g, ConceptIndex a, ConceptIndex b);
MeasureValues all_measures(const OntologyGraph& g, std::string_view a, std::string_view b);

}  // namespace more
