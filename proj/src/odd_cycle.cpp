#include <algorithm>
#include <numeric>

#include "sgmr/errors.hpp"
#include "sgmr/serial_enum.hpp"

namespace sgmr {

std::vector<Instance> odd_cycle_enum(const DataGraph& g, int k, const NodeOrder& order, WorkCounter* work) {
  if (k < 1) throw DomainError("odd_cycle_enum needs k >= 1");
  auto out = std::vector<Instance>{};
  auto count = [&](std::uint64_t units) {
    if (work) work->units += units;
  };
  auto paths = properly_ordered_2paths(g, order);
  count(paths.size());
  if (k == 1) {
    for (const auto& path : paths) {
      count(1);
      if (g.edge_exists(path.u, path.w)) out.push_back({{path.mid, path.u, path.w}, -1});
    }
    return out;
  }

  const auto& edges = g.edges();
  auto chosen = std::vector<std::size_t>(k - 1);
  auto perm = std::vector<int>(k - 1);
  auto candidates = std::vector<std::size_t>{};
  auto cycle = Tuple(2 * k + 1);
  for (const auto& path : paths) {
    // v_{2k+1} - v1 - v2 with v1 < v2 < v_{2k+1}
    auto v1 = path.mid;
    auto v2 = path.u;
    auto vlast = path.w;
    // Edges avoiding v1, v2, v_{2k+1}; the guard (v1 before every other
    // cycle node) is applied here instead of per subset.
    candidates.clear();
    for (auto i = std::size_t{0}; i < edges.size(); ++i) {
      const auto& e = edges[i];
      if (e.u == v1 || e.v == v1 || e.u == v2 || e.v == v2 || e.u == vlast || e.v == vlast) continue;
      if (!order.less(v1, e.u) || !order.less(v1, e.v)) continue;
      candidates.push_back(i);
    }
    count(edges.size());
    auto c = candidates.size();
    if (c < static_cast<std::size_t>(k - 1)) continue;
    // (k-1)-subsets of candidate edges by increasing index.
    std::iota(chosen.begin(), chosen.end(), 0);
    while (true) {
      count(1);
      auto disjoint = true;
      for (auto i = 0; i < k - 1 && disjoint; ++i) {
        for (auto j = i + 1; j < k - 1 && disjoint; ++j) {
          const auto& a = edges[candidates[chosen[i]]];
          const auto& b = edges[candidates[chosen[j]]];
          disjoint = a.u != b.u && a.u != b.v && a.v != b.u && a.v != b.v;
        }
      }
      if (disjoint) {
        std::iota(perm.begin(), perm.end(), 0);
        do {
          for (auto bits = 0U; bits < (1U << (k - 1)); ++bits) {
            count(1);
            cycle[0] = v1;
            cycle[1] = v2;
            for (auto i = 0; i < k - 1; ++i) {
              const auto& e = edges[candidates[chosen[perm[i]]]];
              auto flip = (bits >> i) & 1U;
              cycle[2 + 2 * i] = flip ? e.v : e.u;
              cycle[3 + 2 * i] = flip ? e.u : e.v;
            }
            cycle[2 * k] = vlast;
            auto ok = true;
            for (auto i = 1; i < 2 * k && ok; i += 2) ok = g.edge_exists(cycle[i], cycle[i + 1]);
            if (ok) out.push_back({cycle, -1});
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
      // next combination
      auto i = k - 2;
      while (i >= 0 && chosen[i] == c - static_cast<std::size_t>(k - 1) + static_cast<std::size_t>(i)) --i;
      if (i < 0) break;
      ++chosen[i];
      for (auto j = i + 1; j < k - 1; ++j) chosen[j] = chosen[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace sgmr
