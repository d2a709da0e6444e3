#pragma once

#include <set>
#include <string>
#include <vector>

#include "sgmr/graph.hpp"
#include "sgmr/sample_cq.hpp"

namespace sgmr {

// Data nodes in sample-variable order.
using Tuple = std::vector<NodeId>;

struct Instance {
  Tuple nodes;
  int source = -1;  // originating CQ, -1 when not from a CQ
};

// Smallest tuple in the Aut(S)-orbit of t, i.e. min over μ of (t[μ(v)])_v.
Tuple canonical_tuple(const Tuple& t, const std::vector<Permutation>& auts);
std::set<Tuple> canonical_set(const std::vector<Instance>& instances, const std::vector<Permutation>& auts);
// Number of instances whose canonical tuple was already seen.
std::size_t duplicate_count(const std::vector<Instance>& instances, const std::vector<Permutation>& auts);
// True when t maps every sample edge to a data edge and is injective.
bool is_instance(const DataGraph& g, const SampleGraph& s, const Tuple& t);

// "cq_id: v(X1)=a1 v(X2)=a2 ..."
std::string format_instance(const Instance& inst, const SampleGraph& s);

}  // namespace sgmr
