#pragma once

#include <cstdint>

#include "sgmr/graph.hpp"

// Small graph builders for tests, benchmarks and the CLI. Nodes are 0..n-1
// unless noted.
namespace sgmr::gen {

DataGraph gnp(std::uint32_t n, double p, std::uint64_t seed);
// Exactly m distinct edges, uniformly chosen.
DataGraph gnm(std::uint32_t n, std::uint64_t m, std::uint64_t seed);
DataGraph complete(std::uint32_t n);
DataGraph cycle(std::uint32_t n);
DataGraph path(std::uint32_t n);
// Center 0, leaves 1..leaves.
DataGraph star(std::uint32_t leaves);
DataGraph petersen();
// Rooted tree where every internal node has `delta` neighbors in total
// (the root has delta children, others delta - 1).
DataGraph regular_tree(std::uint32_t delta, std::uint32_t depth);
DataGraph random_forest(std::uint32_t n, std::uint32_t trees, std::uint64_t seed);

}  // namespace sgmr::gen
