#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sgmr/graph.hpp"
#include "sgmr/instance.hpp"

namespace sgmr {

struct OracleLimits {
  std::size_t max_nodes = 128;
  // Triangles and smaller samples stay cheap on much larger graphs.
  std::size_t max_nodes_small_p = 200000;
};

bool oracle_feasible(const DataGraph& g, const SampleGraph& s, const OracleLimits& limits = {});
// One instance per Aut(S)-orbit: the mapping whose tuple is smallest.
// Throws SizeLimitError past the limits.
std::vector<Instance> brute_force_oracle(const DataGraph& g, const SampleGraph& s, const OracleLimits& limits = {});

// u - mid - w with mid before u and w, u before w.
struct TwoPath {
  NodeId u;
  NodeId mid;
  NodeId w;
};
std::vector<TwoPath> properly_ordered_2paths(const DataGraph& g, const NodeOrder& order);

struct WorkCounter {
  std::uint64_t units = 0;
};

// Cycles of length 2k+1 as tuples (v1, ..., v_{2k+1}) around the cycle, v1
// first in `order` and v2 before v_{2k+1}. k = 1 closes 2-paths.
std::vector<Instance> odd_cycle_enum(const DataGraph& g, int k, const NodeOrder& order, WorkCounter* work = nullptr);

enum class PartKind { isolated, edge, odd_hamiltonian };

struct Part {
  std::uint64_t nodes = 0;
  PartKind kind = PartKind::isolated;
  // Sample variables around the part: the Hamilton cycle, or the edge ends.
  std::vector<Var> cycle;
};

struct Decomposition {
  std::vector<Part> parts;
  std::vector<std::pair<Var, Var>> cross_edges;

  int isolated_count() const;
  double alpha() const { return isolated_count(); }
  double beta(int p) const { return (p - isolated_count()) / 2.0; }
};

Decomposition decompose_sample(const SampleGraph& s);

// parts_instances[i] holds exactly-once instances of s.induced(part_nodes[i]),
// with tuples in the induced numbering (increasing variable index).
std::vector<Instance> compose(const std::vector<std::vector<Instance>>& parts_instances, const SampleGraph& s,
                              const std::vector<std::uint64_t>& part_nodes, const DataGraph& g);
std::vector<Instance> compose(const std::vector<std::vector<Instance>>& parts_instances, const SampleGraph& s,
                              const Decomposition& d, const DataGraph& g);

// Instances of one decomposition part on its own.
std::vector<Instance> part_instances(const DataGraph& g, const SampleGraph& s, const Part& part);

// Throws StructuralError for a disconnected sample.
std::vector<Instance> bounded_degree_enum(const DataGraph& g, const SampleGraph& s);

std::vector<Instance> enumerate_general(const DataGraph& g, const SampleGraph& s,
                                        std::optional<std::size_t> degree_hint = std::nullopt);

}  // namespace sgmr
