#include "sgmr/serial_enum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include "sgmr/errors.hpp"
#include "sgmr/sample_cq.hpp"

namespace sgmr {

namespace {

constexpr NodeId kUnset = std::numeric_limits<NodeId>::max();

// Variables in an order where each one (after the first of its component)
// has an earlier neighbor. anchor[i] is that neighbor or -1.
void search_order(const SampleGraph& s, std::uint64_t mask, std::vector<Var>& vars, std::vector<Var>& anchor) {
  auto bound = std::uint64_t{0};
  while (bound != mask) {
    auto best = -1;
    auto best_key = std::pair<int, int>{-1, -1};
    for (auto v = 0; v < s.node_count(); ++v) {
      if (!((mask >> v) & 1U) || ((bound >> v) & 1U)) continue;
      auto key = std::pair<int, int>{std::popcount(s.neighbor_mask(v) & bound), std::popcount(s.neighbor_mask(v) & mask)};
      if (key > best_key) {
        best_key = key;
        best = v;
      }
    }
    auto links = s.neighbor_mask(best) & bound;
    vars.push_back(best);
    anchor.push_back(links ? std::countr_zero(links) : -1);
    bound |= std::uint64_t{1} << best;
  }
}

}  // namespace

bool oracle_feasible(const DataGraph& g, const SampleGraph& s, const OracleLimits& limits) {
  auto cap = s.node_count() <= 3 ? limits.max_nodes_small_p : limits.max_nodes;
  return g.node_count() <= cap && s.node_count() <= kMaxPermutationNodes;
}

std::vector<Instance> brute_force_oracle(const DataGraph& g, const SampleGraph& s, const OracleLimits& limits) {
  if (!oracle_feasible(g, s, limits)) {
    throw SizeLimitError("oracle refused: n=" + std::to_string(g.node_count()) + ", p=" +
                         std::to_string(s.node_count()) + " exceeds limits (n <= " + std::to_string(limits.max_nodes) +
                         ", or n <= " + std::to_string(limits.max_nodes_small_p) + " for p <= 3; p <= " +
                         std::to_string(kMaxPermutationNodes) + ")");
  }
  auto auts = automorphisms(s);
  auto p = s.node_count();
  auto vars = std::vector<Var>{};
  auto anchor = std::vector<Var>{};
  search_order(s, p >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p) - 1, vars, anchor);
  auto value = Tuple(p, kUnset);
  auto out = std::vector<Instance>{};
  auto recurse = [&](auto&& self, int depth) -> void {
    if (depth == p) {
      if (canonical_tuple(value, auts) == value) out.push_back({value, -1});
      return;
    }
    auto v = vars[depth];
    auto visit = [&](NodeId x) {
      for (auto i = 0; i < depth; ++i) {
        if (value[vars[i]] == x) return;
      }
      for (auto i = 0; i < depth; ++i) {
        auto w = vars[i];
        if (s.has_edge(v, w) && w != anchor[depth] && !g.edge_exists(x, value[w])) return;
      }
      value[v] = x;
      self(self, depth + 1);
      value[v] = kUnset;
    };
    if (anchor[depth] >= 0) {
      for (auto x : g.neighbors(value[anchor[depth]])) visit(x);
    } else {
      for (auto x : g.nodes()) visit(x);
    }
  };
  recurse(recurse, 0);
  std::sort(out.begin(), out.end(), [](const Instance& a, const Instance& b) { return a.nodes < b.nodes; });
  return out;
}

std::vector<TwoPath> properly_ordered_2paths(const DataGraph& g, const NodeOrder& order) {
  auto out = std::vector<TwoPath>{};
  auto later = std::vector<NodeId>{};
  for (auto v : g.nodes()) {
    later.clear();
    for (auto u : g.neighbors(v)) {
      if (order.less(v, u)) later.push_back(u);
    }
    std::sort(later.begin(), later.end(), order);
    for (auto i = std::size_t{0}; i < later.size(); ++i) {
      for (auto j = i + 1; j < later.size(); ++j) out.push_back({later[i], v, later[j]});
    }
  }
  return out;
}

int Decomposition::isolated_count() const {
  return static_cast<int>(std::count_if(parts.begin(), parts.end(), [](const Part& p) { return p.kind == PartKind::isolated; }));
}

namespace {

// Hamilton cycle through the nodes of `mask`, starting at its lowest node.
std::optional<std::vector<Var>> hamilton_cycle(const SampleGraph& s, std::uint64_t mask) {
  auto start = std::countr_zero(mask);
  auto size = std::popcount(mask);
  auto path = std::vector<Var>{start};
  auto recurse = [&](auto&& self, std::uint64_t used) -> bool {
    if (static_cast<int>(path.size()) == size) return s.has_edge(path.back(), start);
    for (auto m = s.neighbor_mask(path.back()) & mask & ~used; m; m &= m - 1) {
      auto w = std::countr_zero(m);
      path.push_back(w);
      if (self(self, used | (std::uint64_t{1} << w))) return true;
      path.pop_back();
    }
    return false;
  };
  if (recurse(recurse, std::uint64_t{1} << start)) return path;
  return std::nullopt;
}

}  // namespace

Decomposition decompose_sample(const SampleGraph& s) {
  auto p = s.node_count();
  if (p > kMaxPermutationNodes) throw SizeLimitError("decomposition search limited to p <= 10");
  // Validity and cycle per block, memoized by mask.
  auto memo = std::vector<std::optional<std::optional<Part>>>(std::size_t{1} << p);
  auto classify = [&](std::uint64_t mask) -> const std::optional<Part>& {
    auto& slot = memo[mask];
    if (slot) return *slot;
    auto size = std::popcount(mask);
    auto part = std::optional<Part>{};
    if (size == 1) {
      part = Part{mask, PartKind::isolated, {std::countr_zero(mask)}};
    } else if (size == 2) {
      auto a = std::countr_zero(mask);
      auto b = std::countr_zero(mask & (mask - 1));
      if (s.has_edge(a, b)) part = Part{mask, PartKind::edge, {a, b}};
    } else if (size % 2 == 1) {
      if (auto cycle = hamilton_cycle(s, mask)) part = Part{mask, PartKind::odd_hamiltonian, *cycle};
    }
    slot = part;
    return *slot;
  };

  auto best = std::optional<std::vector<Part>>{};
  auto best_score = std::pair<int, std::vector<int>>{};
  auto score = [](const std::vector<Part>& parts) {
    auto q = 0;
    auto odd = std::vector<int>{};
    for (const auto& part : parts) {
      if (part.kind == PartKind::isolated) ++q;
      if (part.kind == PartKind::odd_hamiltonian) odd.push_back(std::popcount(part.nodes));
    }
    std::sort(odd.rbegin(), odd.rend());
    return std::pair<int, std::vector<int>>{q, odd};
  };
  auto better = [](const std::pair<int, std::vector<int>>& a, const std::pair<int, std::vector<int>>& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  };
  auto current = std::vector<Part>{};
  auto all = (std::uint64_t{1} << p) - 1;
  // Blocks are generated containing the lowest remaining node, so each set
  // partition is visited once.
  auto recurse = [&](auto&& self, std::uint64_t remaining) -> void {
    if (remaining == 0) {
      auto sc = score(current);
      if (!best || better(sc, best_score)) {
        best = current;
        best_score = sc;
      }
      return;
    }
    auto low = std::uint64_t{1} << std::countr_zero(remaining);
    auto rest = remaining & ~low;
    // Submasks of rest, in increasing order.
    auto sub = std::uint64_t{0};
    while (true) {
      const auto& part = classify(low | sub);
      if (part) {
        current.push_back(*part);
        self(self, remaining & ~(low | sub));
        current.pop_back();
      }
      if (sub == rest) break;
      sub = (sub - rest) & rest;
    }
  };
  recurse(recurse, all);

  auto d = Decomposition{};
  d.parts = std::move(*best);
  auto owner = std::vector<int>(p, -1);
  for (auto i = std::size_t{0}; i < d.parts.size(); ++i) {
    for (auto m = d.parts[i].nodes; m; m &= m - 1) owner[std::countr_zero(m)] = static_cast<int>(i);
  }
  for (auto [a, b] : s.edges()) {
    if (owner[a] != owner[b]) d.cross_edges.emplace_back(a, b);
  }
  return d;
}

namespace {

// All mappings (not deduplicated) of s restricted to the connected node set `mask`.
std::vector<Tuple> all_mappings(const DataGraph& g, const SampleGraph& s, std::uint64_t mask) {
  auto p = s.node_count();
  auto size = std::popcount(mask);
  auto out = std::vector<Tuple>{};
  if (size == 1) {
    auto v = std::countr_zero(mask);
    for (auto x : g.nodes()) {
      auto t = Tuple(p, kUnset);
      t[v] = x;
      out.push_back(std::move(t));
    }
    return out;
  }
  if (size == 2) {
    auto a = std::countr_zero(mask);
    auto b = std::countr_zero(mask & (mask - 1));
    for (const auto& e : g.edges()) {
      for (auto [x, y] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
        auto t = Tuple(p, kUnset);
        t[a] = x;
        t[b] = y;
        out.push_back(std::move(t));
      }
    }
    return out;
  }
  // Highest-index node whose removal keeps the rest connected.
  auto peel = -1;
  for (auto v = p - 1; v >= 0 && peel < 0; --v) {
    if (!((mask >> v) & 1U)) continue;
    auto rest = mask & ~(std::uint64_t{1} << v);
    if (s.induced(rest).is_connected()) peel = v;
  }
  auto rest = mask & ~(std::uint64_t{1} << peel);
  auto via = std::countr_zero(s.neighbor_mask(peel) & rest);
  auto others = s.neighbor_mask(peel) & rest & ~(std::uint64_t{1} << via);
  for (auto& t : all_mappings(g, s, rest)) {
    for (auto y : g.neighbors(t[via])) {
      auto ok = true;
      for (auto m = rest; m && ok; m &= m - 1) ok = t[std::countr_zero(m)] != y;
      for (auto m = others; m && ok; m &= m - 1) ok = g.edge_exists(y, t[std::countr_zero(m)]);
      if (!ok) continue;
      auto ext = t;
      ext[peel] = y;
      out.push_back(std::move(ext));
    }
  }
  return out;
}

std::vector<Instance> all_nodes(const DataGraph& g) {
  auto out = std::vector<Instance>{};
  for (auto x : g.nodes()) out.push_back({{x}, -1});
  return out;
}

}  // namespace

std::vector<Instance> bounded_degree_enum(const DataGraph& g, const SampleGraph& s) {
  if (!s.is_connected()) throw StructuralError("bounded_degree_enum needs a connected sample; decompose first");
  if (s.node_count() < 2) throw StructuralError("bounded_degree_enum needs p >= 2");
  auto auts = automorphisms(s);
  auto out = std::vector<Instance>{};
  for (auto& t : all_mappings(g, s, (std::uint64_t{1} << s.node_count()) - 1)) {
    if (canonical_tuple(t, auts) == t) out.push_back({std::move(t), -1});
  }
  return out;
}

std::vector<Instance> part_instances(const DataGraph& g, const SampleGraph& s, const Part& part) {
  switch (part.kind) {
    case PartKind::isolated:
      return all_nodes(g);
    case PartKind::edge: {
      auto out = std::vector<Instance>{};
      for (const auto& e : g.edges()) out.push_back({{e.u, e.v}, -1});
      return out;
    }
    case PartKind::odd_hamiltonian:
      break;
  }
  auto sub = s.induced(part.nodes);
  auto auts = automorphisms(sub);
  // part.cycle in induced numbering
  auto local = std::vector<Var>{};
  for (auto v : part.cycle) local.push_back(std::popcount(part.nodes & ((std::uint64_t{1} << v) - 1)));
  auto len = static_cast<int>(local.size());
  auto k = (len - 1) / 2;
  auto found = std::set<Tuple>{};
  auto t = Tuple(len);
  for (const auto& cyc : odd_cycle_enum(g, k, NodeOrder::by_degree(g))) {
    for (auto sign : {1, -1}) {
      for (auto shift = 0; shift < len; ++shift) {
        for (auto i = 0; i < len; ++i) t[local[i]] = cyc.nodes[((sign * i + shift) % len + len) % len];
        if (is_instance(g, sub, t)) found.insert(canonical_tuple(t, auts));
      }
    }
  }
  auto out = std::vector<Instance>{};
  for (const auto& x : found) out.push_back({x, -1});
  return out;
}

std::vector<Instance> enumerate_general(const DataGraph& g, const SampleGraph& s, std::optional<std::size_t> degree_hint) {
  auto delta = degree_hint ? *degree_hint : g.max_degree();
  auto m = g.edge_count();
  if (static_cast<double>(delta) * static_cast<double>(delta) <= static_cast<double>(m)) {
    auto parts = s.components();
    auto inputs = std::vector<std::vector<Instance>>{};
    for (auto mask : parts) {
      if (std::popcount(mask) == 1) {
        inputs.push_back(all_nodes(g));
      } else {
        inputs.push_back(bounded_degree_enum(g, s.induced(mask)));
      }
    }
    return compose(inputs, s, parts, g);
  }
  auto d = decompose_sample(s);
  auto inputs = std::vector<std::vector<Instance>>{};
  for (const auto& part : d.parts) inputs.push_back(part_instances(g, s, part));
  return compose(inputs, s, d, g);
}

}  // namespace sgmr
