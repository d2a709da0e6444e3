#include "sgmr/generators.hpp"

#include <random>
#include <unordered_set>
#include <vector>

#include "sgmr/errors.hpp"

namespace sgmr::gen {

DataGraph gnp(std::uint32_t n, double p, std::uint64_t seed) {
  auto rng = std::mt19937_64{seed};
  auto coin = std::bernoulli_distribution{p};
  auto edges = std::vector<Edge>{};
  for (auto u = std::uint32_t{0}; u < n; ++u) {
    for (auto v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({u, v});
    }
  }
  auto nodes = std::vector<NodeId>(n);
  for (auto u = std::uint32_t{0}; u < n; ++u) nodes[u] = u;
  return DataGraph::from_edges(edges, nodes);
}

DataGraph gnm(std::uint32_t n, std::uint64_t m, std::uint64_t seed) {
  auto max_edges = std::uint64_t{n} * (n - 1) / 2;
  if (n < 2 || m > max_edges) throw DomainError("gnm: too many edges for n");
  auto rng = std::mt19937_64{seed};
  auto pick = std::uniform_int_distribution<std::uint32_t>{0, n - 1};
  auto seen = std::unordered_set<std::uint64_t>{};
  seen.reserve(m * 2);
  auto edges = std::vector<Edge>{};
  edges.reserve(m);
  while (edges.size() < m) {
    auto u = pick(rng);
    auto v = pick(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (seen.insert((std::uint64_t{u} << 32) | v).second) edges.push_back({u, v});
  }
  return DataGraph::from_edges(edges);
}

DataGraph complete(std::uint32_t n) {
  auto edges = std::vector<Edge>{};
  for (auto u = std::uint32_t{0}; u < n; ++u) {
    for (auto v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return DataGraph::from_edges(edges);
}

DataGraph cycle(std::uint32_t n) {
  auto edges = std::vector<Edge>{};
  for (auto u = std::uint32_t{0}; u < n; ++u) edges.push_back({u, (u + 1) % n});
  return DataGraph::from_edges(edges);
}

DataGraph path(std::uint32_t n) {
  auto edges = std::vector<Edge>{};
  for (auto u = std::uint32_t{0}; u + 1 < n; ++u) edges.push_back({u, u + 1});
  return DataGraph::from_edges(edges);
}

DataGraph star(std::uint32_t leaves) {
  auto edges = std::vector<Edge>{};
  for (auto u = std::uint32_t{1}; u <= leaves; ++u) edges.push_back({0, u});
  return DataGraph::from_edges(edges);
}

DataGraph petersen() {
  auto edges = std::vector<Edge>{};
  for (auto i = 0U; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5});
    edges.push_back({i, i + 5});
    edges.push_back({i + 5, (i + 2) % 5 + 5});
  }
  return DataGraph::from_edges(edges);
}

DataGraph regular_tree(std::uint32_t delta, std::uint32_t depth) {
  auto edges = std::vector<Edge>{};
  auto level = std::vector<NodeId>{0};
  auto next_id = NodeId{1};
  for (auto d = std::uint32_t{0}; d < depth; ++d) {
    auto next = std::vector<NodeId>{};
    for (auto u : level) {
      auto children = d == 0 ? delta : delta - 1;
      for (auto c = std::uint32_t{0}; c < children; ++c) {
        edges.push_back({u, next_id});
        next.push_back(next_id++);
      }
    }
    level = std::move(next);
  }
  return DataGraph::from_edges(edges);
}

DataGraph random_forest(std::uint32_t n, std::uint32_t trees, std::uint64_t seed) {
  auto rng = std::mt19937_64{seed};
  auto edges = std::vector<Edge>{};
  for (auto u = trees; u < n; ++u) {
    auto parent = std::uniform_int_distribution<std::uint32_t>{0, u - 1}(rng);
    edges.push_back({parent, u});
  }
  auto nodes = std::vector<NodeId>(n);
  for (auto u = std::uint32_t{0}; u < n; ++u) nodes[u] = u;
  return DataGraph::from_edges(edges, nodes);
}

}  // namespace sgmr::gen
