#pragma once

// Layered claim network: claims, publications and entities as nodes,
// undirected labeled edges, connected components, summary statistics and
// deterministic exports.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "aida/core.hpp"
#include "aida/errors.hpp"
#include "aida/linker.hpp"

namespace aida {

enum class NodeKind { CLAIM, PUBLICATION, ENTITY };
enum class Layer { BASE, CURATED, LINKED };
enum class GraphFormat { EDGE_TSV, GRAPH_JSON };

const char* to_string(NodeKind k);
const char* to_string(Layer layer);
NodeKind parse_node_kind(std::string_view s);  // throws FormatError on unknown name
Layer parse_layer(std::string_view s);         // accepts base/curated/linked

struct GraphNode {
  std::string id;
  NodeKind kind = NodeKind::CLAIM;
  std::string label;

  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  std::string source;
  Relation relation = Relation::HAS_CLAIM;
  std::string target;

  auto operator<=>(const GraphEdge&) const = default;
};

// Undirected multigraph-free graph: one edge per unordered endpoint pair and
// relation. The direction an edge was first added with is kept for export.
class Graph {
 public:
  // Re-adding an id with the same kind is a no-op (first label wins); a kind
  // conflict throws FormatError.
  void add_node(std::string id, NodeKind kind, std::string label);

  // Both endpoints must already exist; self-loops are rejected. Duplicate
  // undirected edges collapse. Returns true if the edge was new.
  bool add_edge(const std::string& source, Relation relation, const std::string& target);

  bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }
  const std::map<std::string, GraphNode>& nodes() const { return nodes_; }
  std::vector<GraphEdge> edges() const;  // sorted by (source, relation name, target)

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t count_kind(NodeKind kind) const;

  bool operator==(const Graph&) const = default;

 private:
  using EdgeKey = std::tuple<std::string, std::string, Relation>;

  std::map<std::string, GraphNode> nodes_;
  std::map<EdgeKey, GraphEdge> edges_;  // key is (min endpoint, max endpoint, relation)
};

// BASE: claim + publication nodes, HAS_CLAIM and claim-claim edges.
// CURATED: BASE plus GENE/ORGANISM corpus entities and their MENTIONS edges.
// LINKED: CURATED plus one entity node per distinct annotation URI and one
// MENTIONS edge per (claim, URI) pair. Annotations naming unknown claims are
// an error at every layer.
Graph build_graph(const Corpus& corpus, const std::vector<Annotation>& annotations, Layer layer);

struct Partition {
  // Sorted by size descending, ties by smallest contained node id; members
  // sorted ascending.
  std::vector<std::vector<std::string>> components;
  std::map<std::string, std::size_t> component_of;

  bool operator==(const Partition&) const = default;
};

Partition connected_components(const Graph& graph);

struct NetworkStats {
  std::size_t node_count = 0;
  std::size_t claim_count = 0;
  std::size_t publication_count = 0;
  std::size_t entity_count = 0;
  std::size_t edge_count = 0;
  std::size_t component_count = 0;
  std::size_t largest_component_node_count = 0;
  std::size_t largest_component_claim_count = 0;
  double largest_component_claim_fraction = 0.0;  // claims in largest / all claims
  double mean_annotations_per_claim = 0.0;

  bool operator==(const NetworkStats&) const = default;
};

NetworkStats network_stats(const Graph& graph, const Partition& partition,
                           const std::vector<Annotation>& annotations);

struct MergeReport {
  std::size_t components_before = 0;
  std::size_t components_after = 0;
  double merged_fraction = 0.0;  // (before - after) / before, 0 when before is 0

  bool operator==(const MergeReport&) const = default;
};

MergeReport component_merge_report(const Partition& before, const Partition& after);

// EDGE_TSV: `<source>\t<relation>\t<target>` lines, sorted lexicographically.
// GRAPH_JSON: one object with `nodes` (id, kind, label) and `edges` (source,
// relation, target), both sorted. Byte-identical across runs for equal
// graphs.
std::string export_graph(const Graph& graph, GraphFormat format);

// Inverse of export_graph(..., GRAPH_JSON). Throws FormatError on anything
// that does not round-trip.
Graph import_graph_json(std::string_view text);

}  // namespace aida
