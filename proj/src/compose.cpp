#include <algorithm>
#include <bit>
#include <limits>

#include "sgmr/errors.hpp"
#include "sgmr/sample_cq.hpp"
#include "sgmr/serial_enum.hpp"

namespace sgmr {

std::vector<Instance> compose(const std::vector<std::vector<Instance>>& parts_instances, const SampleGraph& s,
                              const Decomposition& d, const DataGraph& g) {
  auto masks = std::vector<std::uint64_t>{};
  for (const auto& part : d.parts) masks.push_back(part.nodes);
  return compose(parts_instances, s, masks, g);
}

std::vector<Instance> compose(const std::vector<std::vector<Instance>>& parts_instances, const SampleGraph& s,
                              const std::vector<std::uint64_t>& part_nodes, const DataGraph& g) {
  if (parts_instances.size() != part_nodes.size()) throw ContractViolation("one instance list per part expected");
  auto p = s.node_count();
  auto covered = std::uint64_t{0};
  for (auto mask : part_nodes) {
    if (covered & mask) throw ContractViolation("parts overlap");
    covered |= mask;
  }
  if (covered != (std::uint64_t{1} << p) - 1) throw ContractViolation("parts do not cover the sample");
  auto owner = std::vector<int>(p, -1);
  for (auto i = std::size_t{0}; i < part_nodes.size(); ++i) {
    for (auto m = part_nodes[i]; m; m &= m - 1) owner[std::countr_zero(m)] = static_cast<int>(i);
  }

  // Every mapping of each part: instances expanded by the part's automorphisms,
  // written in the sample's numbering.
  auto expanded = std::vector<std::vector<std::vector<std::pair<Var, NodeId>>>>{};
  for (auto i = std::size_t{0}; i < part_nodes.size(); ++i) {
    auto vars = std::vector<Var>{};
    for (auto m = part_nodes[i]; m; m &= m - 1) vars.push_back(std::countr_zero(m));
    auto auts = automorphisms(s.induced(part_nodes[i]));
    auto list = std::vector<std::vector<std::pair<Var, NodeId>>>{};
    for (const auto& inst : parts_instances[i]) {
      for (const auto& mu : auts) {
        auto mapping = std::vector<std::pair<Var, NodeId>>{};
        for (auto j = std::size_t{0}; j < vars.size(); ++j) mapping.emplace_back(vars[j], inst.nodes[mu[j]]);
        list.push_back(std::move(mapping));
      }
    }
    if (list.empty()) return {};
    expanded.push_back(std::move(list));
  }

  auto auts = automorphisms(s);
  constexpr auto unset = std::numeric_limits<NodeId>::max();
  auto value = Tuple(p, unset);
  auto out = std::vector<Instance>{};
  auto origin_string = [&](const Tuple& t) {
    // Part index of each data node, data nodes taken in increasing id.
    auto order = std::vector<Var>(p);
    for (auto v = 0; v < p; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](Var a, Var b) { return t[a] < t[b]; });
    auto str = std::vector<int>{};
    for (auto v : order) str.push_back(owner[v]);
    return str;
  };
  auto emit_if_first = [&]() {
    auto mine = std::pair{origin_string(value), value};
    auto moved = Tuple(p);
    for (const auto& mu : auts) {
      for (auto v = 0; v < p; ++v) moved[v] = value[mu[v]];
      if (moved == value) continue;
      if (std::pair{origin_string(moved), moved} < mine) return;
    }
    out.push_back({value, -1});
  };

  auto recurse = [&](auto&& self, std::size_t part) -> void {
    if (part == expanded.size()) {
      emit_if_first();
      return;
    }
    for (const auto& mapping : expanded[part]) {
      auto ok = true;
      for (auto [v, x] : mapping) {
        for (auto w = 0; w < p && ok; ++w) ok = value[w] != x;
        if (!ok) break;
      }
      if (!ok) continue;
      for (auto [v, x] : mapping) {
        for (auto m = s.neighbor_mask(v); m && ok; m &= m - 1) {
          auto w = std::countr_zero(m);
          if (owner[w] < static_cast<int>(part)) ok = g.edge_exists(x, value[w]);
        }
        if (!ok) break;
      }
      if (!ok) continue;
      for (auto [v, x] : mapping) value[v] = x;
      self(self, part + 1);
      for (auto [v, x] : mapping) value[v] = unset;
    }
  };
  recurse(recurse, 0);
  return out;
}

}  // namespace sgmr
