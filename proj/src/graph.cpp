#include "sgmr/graph.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "sgmr/errors.hpp"

namespace sgmr {

namespace {

std::uint64_t pack(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t{a} << 32) | b;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  auto out = std::vector<std::string_view>{};
  auto i = std::size_t{0};
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    auto j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_comment_or_blank(std::string_view line) {
  auto pos = line.find_first_not_of(" \t\r\n");
  return pos == std::string_view::npos || line[pos] == '#';
}

std::optional<std::uint64_t> parse_u64(std::string_view tok) {
  auto value = std::uint64_t{0};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

}  // namespace

DataGraph DataGraph::from_edges(std::span<const Edge> edges, LoadStats* stats) {
  return from_edges(edges, {}, stats);
}

DataGraph DataGraph::from_edges(std::span<const Edge> edges, std::span<const NodeId> extra_nodes,
                                LoadStats* stats) {
  auto g = DataGraph{};
  auto normalized = std::vector<Edge>{};
  normalized.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u == e.v) throw DomainError("self-loop on node " + std::to_string(e.u));
    normalized.push_back(e.u < e.v ? e : Edge{e.v, e.u});
  }
  std::sort(normalized.begin(), normalized.end());
  auto last = std::unique(normalized.begin(), normalized.end());
  if (stats) {
    stats->edges_read += edges.size();
    stats->duplicate_edges += static_cast<std::size_t>(normalized.end() - last);
  }
  normalized.erase(last, normalized.end());

  g.nodes_.reserve(normalized.size() * 2 + extra_nodes.size());
  for (const auto& e : normalized) {
    g.nodes_.push_back(e.u);
    g.nodes_.push_back(e.v);
  }
  g.nodes_.insert(g.nodes_.end(), extra_nodes.begin(), extra_nodes.end());
  std::sort(g.nodes_.begin(), g.nodes_.end());
  g.nodes_.erase(std::unique(g.nodes_.begin(), g.nodes_.end()), g.nodes_.end());

  g.index_.reserve(g.nodes_.size());
  for (auto i = std::size_t{0}; i < g.nodes_.size(); ++i) g.index_.emplace(g.nodes_[i], static_cast<std::uint32_t>(i));

  auto degrees = std::vector<std::size_t>(g.nodes_.size(), 0);
  for (const auto& e : normalized) {
    ++degrees[g.index_.at(e.u)];
    ++degrees[g.index_.at(e.v)];
  }
  g.offsets_.assign(g.nodes_.size() + 1, 0);
  for (auto i = std::size_t{0}; i < degrees.size(); ++i) g.offsets_[i + 1] = g.offsets_[i] + degrees[i];
  g.adjacency_.resize(g.offsets_.back());
  auto fill = std::vector<std::size_t>(g.offsets_.begin(), g.offsets_.end() - 1);
  g.edge_index_.reserve(normalized.size());
  for (const auto& e : normalized) {
    auto a = g.index_.at(e.u);
    auto b = g.index_.at(e.v);
    g.adjacency_[fill[a]++] = e.v;
    g.adjacency_[fill[b]++] = e.u;
    g.edge_index_.insert(pack(a, b));
  }
  for (auto i = std::size_t{0}; i < g.nodes_.size(); ++i) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
  }
  g.edges_ = std::move(normalized);
  return g;
}

std::uint32_t DataGraph::index_of(NodeId u) const {
  auto it = index_.find(u);
  if (it == index_.end()) throw ContractViolation("unknown node " + std::to_string(u));
  return it->second;
}

std::size_t DataGraph::degree(NodeId u) const {
  auto it = index_.find(u);
  if (it == index_.end()) return 0;
  return offsets_[it->second + 1] - offsets_[it->second];
}

std::size_t DataGraph::max_degree() const {
  auto best = std::size_t{0};
  for (auto i = std::size_t{0}; i + 1 < offsets_.size(); ++i) best = std::max(best, offsets_[i + 1] - offsets_[i]);
  return best;
}

std::span<const NodeId> DataGraph::neighbors(NodeId u) const {
  auto it = index_.find(u);
  if (it == index_.end()) return {};
  return neighbors_at(it->second);
}

bool DataGraph::edge_exists(NodeId u, NodeId v) const {
  if (u == v) throw ContractViolation("edge_exists called with u == v (" + std::to_string(u) + ")");
  auto a = index_.find(u);
  if (a == index_.end()) return false;
  auto b = index_.find(v);
  if (b == index_.end()) return false;
  return edge_index_.contains(pack(a->second, b->second));
}

bool DataGraph::edge_exists_at(std::uint32_t a, std::uint32_t b) const {
  if (a == b) throw ContractViolation("edge_exists called with u == v");
  return edge_index_.contains(pack(a, b));
}

DataGraph load_edge_list(std::istream& in, LoadStats* stats) {
  auto edges = std::vector<Edge>{};
  auto line = std::string{};
  auto line_no = std::size_t{0};
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto tokens = split_ws(line);
    if (tokens.size() != 2) throw ParseError(line_no, "expected two node ids, got '" + line + "'");
    auto u = parse_u64(tokens[0]);
    auto v = parse_u64(tokens[1]);
    if (!u || !v) throw ParseError(line_no, "node ids must be non-negative integers: '" + line + "'");
    if (*u == *v) throw DomainError("self-loop on node " + std::to_string(*u) + " at line " + std::to_string(line_no));
    edges.push_back({*u, *v});
  }
  if (stats) stats->lines += line_no;
  return DataGraph::from_edges(edges, stats);
}

DataGraph load_edge_list_text(std::string_view text, LoadStats* stats) {
  auto in = std::istringstream{std::string{text}};
  return load_edge_list(in, stats);
}

DataGraph load_edge_list_file(const std::string& path, LoadStats* stats) {
  auto in = std::ifstream{path};
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  return load_edge_list(in, stats);
}

void write_edge_list(std::ostream& out, const DataGraph& g) {
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

// ---------------------------------------------------------------------------

SampleGraph::SampleGraph(std::vector<std::string> names, std::vector<std::pair<Var, Var>> edges)
    : names_(std::move(names)), edges_(std::move(edges)), adjacency_(names_.size(), 0) {
  if (names_.empty()) throw DomainError("sample graph needs at least one node");
  if (names_.size() > static_cast<std::size_t>(kMaxNodes)) throw SizeLimitError("sample graph too large");
  auto p = node_count();
  for (auto [a, b] : edges_) {
    if (a < 0 || b < 0 || a >= p || b >= p) throw DomainError("sample edge refers to unknown node");
    if (a == b) throw DomainError("self-loop on sample node " + names_[a]);
    if (has_edge(a, b)) throw DomainError("duplicate sample edge " + names_[a] + "-" + names_[b]);
    adjacency_[a] |= std::uint64_t{1} << b;
    adjacency_[b] |= std::uint64_t{1} << a;
  }
}

Var SampleGraph::var(std::string_view name) const {
  for (auto i = 0; i < node_count(); ++i) {
    if (names_[i] == name) return i;
  }
  throw DomainError("unknown sample variable '" + std::string{name} + "'");
}

int SampleGraph::degree(Var v) const { return std::popcount(adjacency_[v]); }

int SampleGraph::edge_position(Var a, Var b) const {
  for (auto i = 0; i < edge_count(); ++i) {
    auto [x, y] = edges_[i];
    if ((x == a && y == b) || (x == b && y == a)) return i;
  }
  return -1;
}

bool SampleGraph::is_regular() const {
  for (auto v = 1; v < node_count(); ++v) {
    if (degree(v) != degree(0)) return false;
  }
  return true;
}

std::vector<std::uint64_t> SampleGraph::components() const {
  auto out = std::vector<std::uint64_t>{};
  auto seen = std::uint64_t{0};
  for (auto v = 0; v < node_count(); ++v) {
    if ((seen >> v) & 1U) continue;
    auto comp = std::uint64_t{1} << v;
    auto frontier = comp;
    while (frontier) {
      auto next = std::uint64_t{0};
      for (auto f = frontier; f; f &= f - 1) next |= adjacency_[std::countr_zero(f)];
      frontier = next & ~comp;
      comp |= next;
    }
    seen |= comp;
    out.push_back(comp);
  }
  return out;
}

bool SampleGraph::is_connected() const { return components().size() == 1; }

SampleGraph SampleGraph::induced(std::uint64_t mask) const {
  auto remap = std::vector<int>(names_.size(), -1);
  auto names = std::vector<std::string>{};
  for (auto v = 0; v < node_count(); ++v) {
    if ((mask >> v) & 1U) {
      remap[v] = static_cast<int>(names.size());
      names.push_back(names_[v]);
    }
  }
  auto edges = std::vector<std::pair<Var, Var>>{};
  for (auto [a, b] : edges_) {
    if (remap[a] >= 0 && remap[b] >= 0) edges.emplace_back(remap[a], remap[b]);
  }
  return SampleGraph{std::move(names), std::move(edges)};
}

std::string SampleGraph::describe() const {
  auto out = std::string{"p=" + std::to_string(node_count()) + " edges:"};
  for (auto [a, b] : edges_) out += " " + names_[a] + "-" + names_[b];
  return out;
}

namespace {

std::vector<std::string> numbered(int p) {
  auto names = std::vector<std::string>{};
  for (auto i = 1; i <= p; ++i) names.push_back("X" + std::to_string(i));
  return names;
}

int parse_size(std::string_view spec, std::string_view prefix, int minimum) {
  auto tail = spec.substr(prefix.size());
  auto value = parse_u64(tail);
  if (!value) throw DomainError("bad sample size in '" + std::string{spec} + "'");
  if (*value < static_cast<std::uint64_t>(minimum) || *value > static_cast<std::uint64_t>(SampleGraph::kMaxNodes)) {
    throw DomainError("sample size out of range in '" + std::string{spec} + "'");
  }
  return static_cast<int>(*value);
}

}  // namespace

bool is_builtin_sample(std::string_view spec) {
  for (auto name : {"triangle", "square", "lollipop", "edge"}) {
    if (spec == name) return true;
  }
  for (auto prefix : {"cycle:", "path:", "star:", "clique:"}) {
    if (spec.starts_with(prefix)) return true;
  }
  return false;
}

SampleGraph builtin_sample(std::string_view spec) {
  if (spec == "triangle") return SampleGraph{{"X", "Y", "Z"}, {{0, 1}, {1, 2}, {0, 2}}};
  if (spec == "square") return SampleGraph{{"W", "X", "Y", "Z"}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}};
  if (spec == "lollipop") return SampleGraph{{"W", "X", "Y", "Z"}, {{0, 1}, {1, 2}, {1, 3}, {2, 3}}};
  if (spec == "edge") return SampleGraph{{"A", "B"}, {{0, 1}}};
  if (spec.starts_with("cycle:")) {
    auto p = parse_size(spec, "cycle:", 3);
    auto edges = std::vector<std::pair<Var, Var>>{};
    for (auto i = 0; i + 1 < p; ++i) edges.emplace_back(i, i + 1);
    edges.emplace_back(0, p - 1);
    return SampleGraph{numbered(p), std::move(edges)};
  }
  if (spec.starts_with("path:")) {
    auto p = parse_size(spec, "path:", 1);
    auto edges = std::vector<std::pair<Var, Var>>{};
    for (auto i = 0; i + 1 < p; ++i) edges.emplace_back(i, i + 1);
    return SampleGraph{numbered(p), std::move(edges)};
  }
  if (spec.starts_with("star:")) {
    // star:p has p nodes: X1 is the center.
    auto p = parse_size(spec, "star:", 2);
    auto edges = std::vector<std::pair<Var, Var>>{};
    for (auto i = 1; i < p; ++i) edges.emplace_back(0, i);
    return SampleGraph{numbered(p), std::move(edges)};
  }
  if (spec.starts_with("clique:")) {
    auto p = parse_size(spec, "clique:", 1);
    auto edges = std::vector<std::pair<Var, Var>>{};
    for (auto i = 0; i < p; ++i) {
      for (auto j = i + 1; j < p; ++j) edges.emplace_back(i, j);
    }
    return SampleGraph{numbered(p), std::move(edges)};
  }
  throw DomainError("unknown builtin sample '" + std::string{spec} + "'");
}

SampleGraph load_sample(std::istream& in) {
  auto names = std::vector<std::string>{};
  auto edges = std::vector<std::pair<Var, Var>>{};
  auto declared = std::optional<std::size_t>{};
  auto lookup = [&](std::string_view name) {
    for (auto i = std::size_t{0}; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<Var>(i);
    }
    names.emplace_back(name);
    return static_cast<Var>(names.size() - 1);
  };
  auto line = std::string{};
  auto line_no = std::size_t{0};
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto tokens = split_ws(line);
    if (tokens.size() == 2 && tokens[0] == "p" && !declared && names.empty()) {
      auto count = parse_u64(tokens[1]);
      if (!count || *count == 0) throw ParseError(line_no, "bad node count");
      declared = *count;
      continue;
    }
    if (tokens.size() == 1) {
      lookup(tokens[0]);
      continue;
    }
    if (tokens.size() != 2) throw ParseError(line_no, "expected one or two node names");
    auto a = lookup(tokens[0]);
    auto b = lookup(tokens[1]);
    if (a == b) throw DomainError("self-loop on sample node " + names[a]);
    edges.emplace_back(a, b);
  }
  if (declared) {
    if (*declared < names.size()) throw ParseError(line_no, "header declares fewer nodes than used");
    for (auto i = std::size_t{1}; names.size() < *declared; ++i) {
      auto name = "I" + std::to_string(i);
      if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
  }
  return SampleGraph{std::move(names), std::move(edges)};
}

SampleGraph load_sample_file(const std::string& path) {
  auto in = std::ifstream{path};
  if (!in) throw std::runtime_error("cannot open sample file '" + path + "'");
  return load_sample(in);
}

SampleGraph resolve_sample(const std::string& spec) {
  if (is_builtin_sample(spec)) return builtin_sample(spec);
  if (!std::filesystem::exists(spec)) {
    throw DomainError("unknown sample '" + spec + "': not a builtin name or an existing file");
  }
  return load_sample_file(spec);
}

// ---------------------------------------------------------------------------

std::string to_string(OrderKind kind) {
  switch (kind) {
    case OrderKind::bucket_then_id:
      return "bucket-then-id";
    case OrderKind::degree_then_id:
      return "degree-then-id";
    case OrderKind::id:
      return "id";
  }
  return "?";
}

NodeOrder NodeOrder::by_id() { return NodeOrder{}; }

NodeOrder NodeOrder::by_bucket(std::uint64_t b, std::uint64_t seed) {
  if (b < 1) throw DomainError("bucket count must be at least 1");
  auto order = NodeOrder{};
  order.kind_ = OrderKind::bucket_then_id;
  order.b_ = b;
  order.seed_ = seed;
  return order;
}

NodeOrder NodeOrder::by_degree(const DataGraph& g) {
  auto degrees = std::make_shared<std::unordered_map<NodeId, std::uint64_t>>();
  degrees->reserve(g.node_count());
  for (auto u : g.nodes()) degrees->emplace(u, g.degree(u));
  auto order = NodeOrder{};
  order.kind_ = OrderKind::degree_then_id;
  order.degrees_ = std::move(degrees);
  return order;
}

std::uint64_t NodeOrder::primary(NodeId u) const {
  switch (kind_) {
    case OrderKind::bucket_then_id:
      return bucket_hash(u, b_, seed_);
    case OrderKind::degree_then_id: {
      auto it = degrees_->find(u);
      return it == degrees_->end() ? 0 : it->second;
    }
    case OrderKind::id:
      return 0;
  }
  return 0;
}

NodeOrder make_order(const DataGraph& g, OrderKind kind, std::uint64_t b, std::uint64_t seed) {
  switch (kind) {
    case OrderKind::bucket_then_id:
      return NodeOrder::by_bucket(b, seed);
    case OrderKind::degree_then_id:
      return NodeOrder::by_degree(g);
    case OrderKind::id:
      return NodeOrder::by_id();
  }
  return NodeOrder::by_id();
}

}  // namespace sgmr
