#include "aida/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace aida {

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::CLAIM: return "CLAIM";
    case NodeKind::PUBLICATION: return "PUBLICATION";
    case NodeKind::ENTITY: return "ENTITY";
  }
  return "";
}

const char* to_string(Layer layer) {
  switch (layer) {
    case Layer::BASE: return "base";
    case Layer::CURATED: return "curated";
    case Layer::LINKED: return "linked";
  }
  return "";
}

NodeKind parse_node_kind(std::string_view s) {
  if (s == "CLAIM") return NodeKind::CLAIM;
  if (s == "PUBLICATION") return NodeKind::PUBLICATION;
  if (s == "ENTITY") return NodeKind::ENTITY;
  throw FormatError("unknown node kind '" + std::string(s) + "'");
}

Layer parse_layer(std::string_view s) {
  if (s == "base") return Layer::BASE;
  if (s == "curated") return Layer::CURATED;
  if (s == "linked") return Layer::LINKED;
  throw FormatError("unknown layer '" + std::string(s) + "' (expected base, curated or linked)");
}

void Graph::add_node(std::string id, NodeKind kind, std::string label) {
  if (id.empty()) throw FormatError("graph node id must be non-empty");
  GraphNode node{id, kind, std::move(label)};
  const auto [it, inserted] = nodes_.try_emplace(std::move(id), std::move(node));
  if (!inserted && it->second.kind != kind)
    throw FormatError("node '" + it->first + "' is both " + to_string(it->second.kind) + " and " +
                      to_string(kind));
}

bool Graph::add_edge(const std::string& source, Relation relation, const std::string& target) {
  if (!has_node(source)) throw FormatError("edge source '" + source + "' is not a node");
  if (!has_node(target)) throw FormatError("edge target '" + target + "' is not a node");
  if (source == target) throw FormatError("self-loop on '" + source + "' is not allowed");
  EdgeKey key{std::min(source, target), std::max(source, target), relation};
  return edges_.try_emplace(std::move(key), GraphEdge{source, relation, target}).second;
}

std::vector<GraphEdge> Graph::edges() const {
  std::vector<GraphEdge> out;
  out.reserve(edges_.size());
  for (const auto& [key, edge] : edges_) out.push_back(edge);
  std::sort(out.begin(), out.end(), [](const GraphEdge& a, const GraphEdge& b) {
    if (a.source != b.source) return a.source < b.source;
    const std::string_view ra = to_string(a.relation);
    const std::string_view rb = to_string(b.relation);
    if (ra != rb) return ra < rb;
    return a.target < b.target;
  });
  return out;
}

std::size_t Graph::count_kind(NodeKind kind) const {
  std::size_t n = 0;
  for (const auto& [id, node] : nodes_)
    if (node.kind == kind) ++n;
  return n;
}

Graph build_graph(const Corpus& corpus, const std::vector<Annotation>& annotations, Layer layer) {
  for (const auto& a : annotations)
    if (corpus.claims.count(a.claim_id) == 0)
      throw FormatError("annotation references unknown claim '" + a.claim_id + "'");

  Graph g;
  for (const auto& [id, claim] : corpus.claims) g.add_node(id, NodeKind::CLAIM, claim.text);
  for (const auto& [id, pub] : corpus.publications) g.add_node(id, NodeKind::PUBLICATION, pub.label);

  const bool curated = layer != Layer::BASE;
  auto curated_entity = [&corpus](const std::string& uri) {
    const auto it = corpus.entities.find(uri);
    return it != corpus.entities.end() &&
           (it->second.kind == EntityKind::GENE || it->second.kind == EntityKind::ORGANISM);
  };

  if (curated) {
    for (const auto& [uri, entity] : corpus.entities)
      if (entity.kind == EntityKind::GENE || entity.kind == EntityKind::ORGANISM)
        g.add_node(uri, NodeKind::ENTITY, entity.label);
  }

  for (const auto& edge : corpus.edges) {
    if (edge.relation == Relation::MENTIONS) {
      if (curated && curated_entity(edge.target))
        g.add_edge(edge.source, edge.relation, edge.target);
    } else {
      g.add_edge(edge.source, edge.relation, edge.target);
    }
  }

  if (layer == Layer::LINKED) {
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& a : annotations) pairs.emplace(a.claim_id, a.entity_uri);
    for (const auto& [claim_id, uri] : pairs) g.add_node(uri, NodeKind::ENTITY, "");
    for (const auto& [claim_id, uri] : pairs) g.add_edge(claim_id, Relation::MENTIONS, uri);
  }
  return g;
}

Partition connected_components(const Graph& graph) {
  std::vector<std::string> ids;
  ids.reserve(graph.node_count());
  std::map<std::string, std::size_t> index;
  for (const auto& [id, node] : graph.nodes()) {
    index.emplace(id, ids.size());
    ids.push_back(id);
  }

  std::vector<std::size_t> parent(ids.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& edge : graph.edges()) {
    const std::size_t a = find(index.at(edge.source));
    const std::size_t b = find(index.at(edge.target));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < ids.size(); ++i) groups[find(i)].push_back(ids[i]);

  Partition partition;
  partition.components.reserve(groups.size());
  for (auto& [root, members] : groups) partition.components.push_back(std::move(members));
  // Members arrive sorted (node map iterates in id order), so the smallest
  // member is members.front().
  std::sort(partition.components.begin(), partition.components.end(),
            [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a.front() < b.front();
            });
  for (std::size_t c = 0; c < partition.components.size(); ++c)
    for (const auto& id : partition.components[c]) partition.component_of.emplace(id, c);
  return partition;
}

NetworkStats network_stats(const Graph& graph, const Partition& partition,
                           const std::vector<Annotation>& annotations) {
  NetworkStats stats;
  stats.node_count = graph.node_count();
  stats.claim_count = graph.count_kind(NodeKind::CLAIM);
  stats.publication_count = graph.count_kind(NodeKind::PUBLICATION);
  stats.entity_count = graph.count_kind(NodeKind::ENTITY);
  stats.edge_count = graph.edge_count();
  stats.component_count = partition.components.size();

  if (!partition.components.empty()) {
    const auto& largest = partition.components.front();
    stats.largest_component_node_count = largest.size();
    for (const auto& id : largest)
      if (graph.nodes().at(id).kind == NodeKind::CLAIM) ++stats.largest_component_claim_count;
  }
  if (stats.claim_count > 0) {
    stats.largest_component_claim_fraction =
        static_cast<double>(stats.largest_component_claim_count) /
        static_cast<double>(stats.claim_count);
    stats.mean_annotations_per_claim =
        static_cast<double>(annotations.size()) / static_cast<double>(stats.claim_count);
  }
  return stats;
}

MergeReport component_merge_report(const Partition& before, const Partition& after) {
  MergeReport report;
  report.components_before = before.components.size();
  report.components_after = after.components.size();
  if (report.components_before > 0)
    report.merged_fraction = (static_cast<double>(report.components_before) -
                              static_cast<double>(report.components_after)) /
                             static_cast<double>(report.components_before);
  return report;
}

std::string export_graph(const Graph& graph, GraphFormat format) {
  if (format == GraphFormat::EDGE_TSV) {
    std::vector<std::string> lines;
    lines.reserve(graph.edge_count());
    for (const auto& edge : graph.edges())
      lines.push_back(edge.source + '\t' + to_string(edge.relation) + '\t' + edge.target);
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& line : lines) {
      out += line;
      out += '\n';
    }
    return out;
  }

  using ordered = nlohmann::ordered_json;
  ordered doc;
  doc["nodes"] = ordered::array();
  for (const auto& [id, node] : graph.nodes())
    doc["nodes"].push_back(
        ordered{{"id", node.id}, {"kind", to_string(node.kind)}, {"label", node.label}});
  doc["edges"] = ordered::array();
  for (const auto& edge : graph.edges())
    doc["edges"].push_back(ordered{{"source", edge.source},
                                   {"relation", to_string(edge.relation)},
                                   {"target", edge.target}});
  return doc.dump(2) + "\n";
}

Graph import_graph_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("graph JSON is invalid: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array() ||
      !doc.contains("edges") || !doc["edges"].is_array())
    throw FormatError("graph JSON must be an object with 'nodes' and 'edges' arrays");

  Graph g;
  for (const auto& node : doc["nodes"]) {
    if (!node.is_object() || !node.contains("id") || !node["id"].is_string() ||
        !node.contains("kind") || !node["kind"].is_string() || !node.contains("label") ||
        !node["label"].is_string())
      throw FormatError("graph JSON node must carry string id, kind and label");
    g.add_node(node["id"].get<std::string>(), parse_node_kind(node["kind"].get<std::string>()),
               node["label"].get<std::string>());
  }
  for (const auto& edge : doc["edges"]) {
    if (!edge.is_object() || !edge.contains("source") || !edge["source"].is_string() ||
        !edge.contains("relation") || !edge["relation"].is_string() ||
        !edge.contains("target") || !edge["target"].is_string())
      throw FormatError("graph JSON edge must carry string source, relation and target");
    g.add_edge(edge["source"].get<std::string>(),
               parse_relation(edge["relation"].get<std::string>()),
               edge["target"].get<std::string>());
  }
  return g;
}

}  // namespace aida
