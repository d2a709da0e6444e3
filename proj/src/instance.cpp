#include "sgmr/instance.hpp"

#include <algorithm>

namespace sgmr {

Tuple canonical_tuple(const Tuple& t, const std::vector<Permutation>& auts) {
  auto best = t;
  auto moved = Tuple(t.size());
  for (const auto& mu : auts) {
    for (auto v = std::size_t{0}; v < t.size(); ++v) moved[v] = t[mu[v]];
    if (moved < best) best = moved;
  }
  return best;
}

std::set<Tuple> canonical_set(const std::vector<Instance>& instances, const std::vector<Permutation>& auts) {
  auto out = std::set<Tuple>{};
  for (const auto& inst : instances) out.insert(canonical_tuple(inst.nodes, auts));
  return out;
}

std::size_t duplicate_count(const std::vector<Instance>& instances, const std::vector<Permutation>& auts) {
  return instances.size() - canonical_set(instances, auts).size();
}

bool is_instance(const DataGraph& g, const SampleGraph& s, const Tuple& t) {
  if (static_cast<int>(t.size()) != s.node_count()) return false;
  auto sorted = t;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (auto [a, b] : s.edges()) {
    if (!g.edge_exists(t[a], t[b])) return false;
  }
  return true;
}

std::string format_instance(const Instance& inst, const SampleGraph& s) {
  auto out = std::to_string(inst.source) + ":";
  for (auto v = std::size_t{0}; v < inst.nodes.size(); ++v) {
    out += " v(" + s.name(static_cast<Var>(v)) + ")=" + std::to_string(inst.nodes[v]);
  }
  return out;
}

}  // namespace sgmr
