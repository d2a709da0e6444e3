#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgmr/graph.hpp"

namespace sgmr {

// Atom E(from, to): the data edge is stored as (smaller, larger) under the
// active node order, so the subgoal implies from < to.
struct Subgoal {
  Var from;
  Var to;
  friend bool operator==(const Subgoal&, const Subgoal&) = default;
  friend auto operator<=>(const Subgoal&, const Subgoal&) = default;
};

enum class Rel { less, not_equal };

struct Atom {
  Rel rel;
  Var lhs;
  Var rhs;
  friend bool operator==(const Atom&, const Atom&) = default;
};

using Conjunct = std::vector<Atom>;

// Disjunctive normal form. An empty disjunct list is "false"; a single empty
// conjunct is "true".
struct Condition {
  std::vector<Conjunct> disjuncts;

  static Condition always() { return Condition{{Conjunct{}}}; }

  // less(a, b) answers "value of a < value of b" for two variables.
  template <typename Less>
  bool holds(Less&& less) const {
    for (const auto& conj : disjuncts) {
      auto ok = true;
      for (const auto& atom : conj) {
        auto sat = atom.rel == Rel::less ? less(atom.lhs, atom.rhs)
                                         : (less(atom.lhs, atom.rhs) || less(atom.rhs, atom.lhs));
        if (!sat) {
          ok = false;
          break;
        }
      }
      if (ok) return true;
    }
    return false;
  }

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct ConjunctiveQuery {
  std::vector<Subgoal> subgoals;
  Condition condition;
};

// Sequence of variables, smallest first.
using Ordering = std::vector<Var>;

struct CQSet {
  SampleGraph sample;
  std::vector<ConjunctiveQuery> queries;
  // Source orderings per query; empty lists for queries built another way.
  std::vector<std::vector<Ordering>> provenance;
  // Optional human label per query (run sequence digits for cycle CQs).
  std::vector<std::string> labels;
};

// True when every disjunct's strict part is acyclic.
bool satisfiable(const Conjunct& conj, int p);
bool satisfiable(const Condition& cond, int p);

// rank[v] = position of v in a total order of the variables.
bool accepts(const ConjunctiveQuery& q, std::span<const int> rank);

std::string render_atom(const Atom& atom, const SampleGraph& s);
std::string render_condition(const Condition& cond, const SampleGraph& s);
// Paper style: E(W,X) & E(X,Y) & ... & W<X & X<Y
std::string render(const ConjunctiveQuery& q, const SampleGraph& s);
std::string render_ordering(const Ordering& o, const SampleGraph& s);

nlohmann::json to_json(const ConjunctiveQuery& q, const SampleGraph& s);
nlohmann::json to_json(const CQSet& set);

}  // namespace sgmr
