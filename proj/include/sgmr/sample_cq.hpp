#pragma once

#include <vector>

#include "sgmr/cq.hpp"
#include "sgmr/graph.hpp"

namespace sgmr {

// perm[v] is the image of variable v.
using Permutation = std::vector<Var>;

constexpr int kMaxPermutationNodes = 10;

// Full automorphism group, identity first. Throws SizeLimitError for p > 10.
std::vector<Permutation> automorphisms(const SampleGraph& s);

ConjunctiveQuery cq_from_ordering(const SampleGraph& s, const Ordering& o);

// One ordering per class o ~ o∘μ. The representative is the ordering whose
// rank vector (position of each variable) is lexicographically smallest;
// results come in increasing rank-vector order.
std::vector<Ordering> coset_representatives(const SampleGraph& s);
std::vector<Ordering> coset_representatives(const SampleGraph& s, const std::vector<Permutation>& auts);

// Merge queries with identical subgoal lists. provenance[i] holds the
// orderings behind cqs[i]; the merged provenance is returned through it.
std::vector<ConjunctiveQuery> group_by_orientation(const SampleGraph& s, const std::vector<ConjunctiveQuery>& cqs,
                                                   std::vector<std::vector<Ordering>>& provenance);

// OR of the chains of `members`, simplified and checked against the union.
Condition merged_condition(const SampleGraph& s, const std::vector<Subgoal>& subgoals,
                           const std::vector<Ordering>& members);

CQSet generate_cqs(const SampleGraph& s);

}  // namespace sgmr
