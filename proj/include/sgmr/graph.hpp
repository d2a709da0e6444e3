#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace sgmr {

using NodeId = std::uint64_t;

// Undirected edge. DataGraph stores them with u < v.
struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct LoadStats {
  std::size_t lines = 0;
  std::size_t edges_read = 0;
  std::size_t duplicate_edges = 0;
};

// Immutable simple undirected graph. Node ids are kept verbatim; a sorted node
// table maps them to dense indices for the adjacency arrays.
class DataGraph {
 public:
  DataGraph() = default;

  // Self-loops throw DomainError; duplicates (in either orientation) collapse.
  static DataGraph from_edges(std::span<const Edge> edges, LoadStats* stats = nullptr);
  // Same, plus nodes that carry no edges.
  static DataGraph from_edges(std::span<const Edge> edges, std::span<const NodeId> extra_nodes,
                              LoadStats* stats = nullptr);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  // Sorted ascending.
  const std::vector<NodeId>& nodes() const { return nodes_; }
  // Sorted by (u, v), u < v.
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_node(NodeId u) const { return index_.contains(u); }
  std::size_t degree(NodeId u) const;
  std::size_t max_degree() const;
  // Sorted ascending ids.
  std::span<const NodeId> neighbors(NodeId u) const;

  // Throws ContractViolation when u == v. Unknown nodes simply have no edges.
  bool edge_exists(NodeId u, NodeId v) const;

  // Dense-index access for hot loops.
  std::uint32_t index_of(NodeId u) const;
  NodeId id_at(std::uint32_t i) const { return nodes_[i]; }
  std::span<const NodeId> neighbors_at(std::uint32_t i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  bool edge_exists_at(std::uint32_t a, std::uint32_t b) const;

 private:
  std::vector<NodeId> nodes_;
  std::unordered_map<NodeId, std::uint32_t> index_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::vector<Edge> edges_;
  std::unordered_set<std::uint64_t> edge_index_;
};

DataGraph load_edge_list(std::istream& in, LoadStats* stats = nullptr);
DataGraph load_edge_list_text(std::string_view text, LoadStats* stats = nullptr);
DataGraph load_edge_list_file(const std::string& path, LoadStats* stats = nullptr);
void write_edge_list(std::ostream& out, const DataGraph& g);

// Sample graph variables are small integers 0..p-1 with display names.
using Var = int;

class SampleGraph {
 public:
  static constexpr int kMaxNodes = 63;

  SampleGraph() = default;
  SampleGraph(std::vector<std::string> names, std::vector<std::pair<Var, Var>> edges);

  int node_count() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(Var v) const { return names_.at(v); }
  Var var(std::string_view name) const;

  // In declaration order, each as given (first, second).
  const std::vector<std::pair<Var, Var>>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  bool has_edge(Var a, Var b) const { return (adjacency_[a] >> b) & 1U; }
  std::uint64_t neighbor_mask(Var v) const { return adjacency_[v]; }
  int degree(Var v) const;
  int edge_position(Var a, Var b) const;

  bool is_regular() const;
  bool is_connected() const;
  // Node masks of connected components, ordered by smallest member.
  std::vector<std::uint64_t> components() const;
  // Subgraph induced by the nodes of `mask`, nodes renumbered in increasing order.
  SampleGraph induced(std::uint64_t mask) const;

  std::string describe() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::pair<Var, Var>> edges_;
  std::vector<std::uint64_t> adjacency_;
};

// Builtins: triangle, square, lollipop, edge, cycle:p, path:p, star:p, clique:p.
SampleGraph builtin_sample(std::string_view spec);
bool is_builtin_sample(std::string_view spec);
// Sample file: whitespace separated name pairs, single names for isolated
// nodes, optional "p <count>" header, '#' comments.
SampleGraph load_sample(std::istream& in);
SampleGraph load_sample_file(const std::string& path);
// Builtin name or file path.
SampleGraph resolve_sample(const std::string& spec);

// h(u) = ((u * 0x9E3779B97F4A7C15 + seed) mod 2^64) mod b + 1
inline std::uint64_t bucket_hash(NodeId u, std::uint64_t b, std::uint64_t seed) {
  return (u * 0x9E3779B97F4A7C15ULL + seed) % b + 1;
}

enum class OrderKind { bucket_then_id, degree_then_id, id };

std::string to_string(OrderKind kind);

// Total order on data nodes: lexicographic on (key(u), u).
class NodeOrder {
 public:
  NodeOrder() = default;

  static NodeOrder by_id();
  static NodeOrder by_bucket(std::uint64_t b, std::uint64_t seed);
  static NodeOrder by_degree(const DataGraph& g);

  OrderKind kind() const { return kind_; }
  std::uint64_t bucket_count() const { return b_; }
  std::uint64_t seed() const { return seed_; }

  std::uint64_t primary(NodeId u) const;
  bool less(NodeId a, NodeId b) const {
    auto ka = primary(a);
    auto kb = primary(b);
    return ka != kb ? ka < kb : a < b;
  }
  bool operator()(NodeId a, NodeId b) const { return less(a, b); }

 private:
  OrderKind kind_ = OrderKind::id;
  std::uint64_t b_ = 1;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const std::unordered_map<NodeId, std::uint64_t>> degrees_;
};

NodeOrder make_order(const DataGraph& g, OrderKind kind, std::uint64_t b = 1, std::uint64_t seed = 0);

}  // namespace sgmr
