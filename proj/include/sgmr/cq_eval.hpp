#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sgmr/cq.hpp"
#include "sgmr/graph.hpp"
#include "sgmr/instance.hpp"

namespace sgmr {

// Backtracking join of one CQ over a data graph. A subgoal E(A,B) matches a
// data edge {a,b} with a before b in `order`.
class CQEvaluator {
 public:
  CQEvaluator(const ConjunctiveQuery& q, int p);

  using Emit = std::function<void(std::span<const NodeId>)>;
  void run(const DataGraph& g, const NodeOrder& order, const Emit& emit) const;

 private:
  struct Check {
    Var other;
    bool forward;  // E(step var, other) when true, E(other, step var) otherwise
  };
  struct Step {
    Var var;
    Var anchor = -1;
    bool anchor_forward = false;
    std::vector<Check> checks;
    // (disjunct, atom) pairs whose variables are all bound after this step
    std::vector<std::pair<int, Atom>> atoms;
  };

  int p_;
  int disjuncts_;
  std::vector<Step> steps_;
};

// Every CQ of the set; Instance::source is the query index.
std::vector<Instance> evaluate_cqs(const DataGraph& g, const CQSet& cqs, const NodeOrder& order);

}  // namespace sgmr
