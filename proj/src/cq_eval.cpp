#include "sgmr/cq_eval.hpp"

#include <algorithm>
#include <bit>

namespace sgmr {

CQEvaluator::CQEvaluator(const ConjunctiveQuery& q, int p)
    : p_(p), disjuncts_(static_cast<int>(q.condition.disjuncts.size())) {
  auto adjacent = std::vector<std::uint64_t>(p, 0);
  for (auto sg : q.subgoals) {
    adjacent[sg.from] |= std::uint64_t{1} << sg.to;
    adjacent[sg.to] |= std::uint64_t{1} << sg.from;
  }
  auto bound = std::uint64_t{0};
  auto bound_at = std::vector<int>(p, -1);
  for (auto s = 0; s < p; ++s) {
    // Most links into the bound set first, then highest degree, then lowest index.
    auto best = -1;
    auto best_key = std::pair<int, int>{-1, -1};
    for (auto v = 0; v < p; ++v) {
      if ((bound >> v) & 1U) continue;
      auto key = std::pair<int, int>{std::popcount(adjacent[v] & bound), std::popcount(adjacent[v])};
      if (key > best_key) {
        best_key = key;
        best = v;
      }
    }
    auto step = Step{};
    step.var = best;
    for (auto sg : q.subgoals) {
      if (sg.from == best && ((bound >> sg.to) & 1U)) step.checks.push_back({sg.to, true});
      if (sg.to == best && ((bound >> sg.from) & 1U)) step.checks.push_back({sg.from, false});
    }
    if (!step.checks.empty()) {
      step.anchor = step.checks.front().other;
      step.anchor_forward = step.checks.front().forward;
    }
    bound |= std::uint64_t{1} << best;
    bound_at[best] = s;
    steps_.push_back(std::move(step));
  }
  for (auto d = 0; d < disjuncts_; ++d) {
    for (const auto& atom : q.condition.disjuncts[d]) {
      auto when = std::max(bound_at[atom.lhs], bound_at[atom.rhs]);
      steps_[when].atoms.emplace_back(d, atom);
    }
  }
}

void CQEvaluator::run(const DataGraph& g, const NodeOrder& order, const Emit& emit) const {
  if (disjuncts_ == 0 || g.node_count() == 0) return;
  auto value = std::vector<NodeId>(p_, 0);
  auto alive = std::vector<std::uint64_t>(p_ + 1, 0);
  alive[0] = disjuncts_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << disjuncts_) - 1;
  auto used = std::vector<NodeId>{};
  used.reserve(p_);

  auto try_candidate = [&](int depth, NodeId x) -> bool {
    const auto& step = steps_[depth];
    if (std::find(used.begin(), used.end(), x) != used.end()) return false;
    for (const auto& c : step.checks) {
      auto y = value[c.other];
      auto oriented = c.forward ? order.less(x, y) : order.less(y, x);
      if (!oriented) return false;
      if (c.other != step.anchor && !g.edge_exists(x, y)) return false;
    }
    value[step.var] = x;
    auto mask = alive[depth];
    for (const auto& [d, atom] : step.atoms) {
      if (!((mask >> d) & 1U)) continue;
      auto a = value[atom.lhs];
      auto b = value[atom.rhs];
      auto ok = atom.rel == Rel::less ? order.less(a, b) : a != b;
      if (!ok) mask &= ~(std::uint64_t{1} << d);
    }
    if (mask == 0) return false;
    alive[depth + 1] = mask;
    return true;
  };

  auto recurse = [&](auto&& self, int depth) -> void {
    if (depth == p_) {
      emit(value);
      return;
    }
    const auto& step = steps_[depth];
    auto visit = [&](NodeId x) {
      if (try_candidate(depth, x)) {
        used.push_back(x);
        self(self, depth + 1);
        used.pop_back();
      }
    };
    if (step.anchor >= 0) {
      for (auto x : g.neighbors(value[step.anchor])) visit(x);
    } else {
      for (auto x : g.nodes()) visit(x);
    }
  };
  recurse(recurse, 0);
}

std::vector<Instance> evaluate_cqs(const DataGraph& g, const CQSet& cqs, const NodeOrder& order) {
  auto out = std::vector<Instance>{};
  auto p = cqs.sample.node_count();
  for (auto i = std::size_t{0}; i < cqs.queries.size(); ++i) {
    auto eval = CQEvaluator{cqs.queries[i], p};
    eval.run(g, order, [&](std::span<const NodeId> x) {
      out.push_back({Tuple(x.begin(), x.end()), static_cast<int>(i)});
    });
  }
  return out;
}

}  // namespace sgmr
