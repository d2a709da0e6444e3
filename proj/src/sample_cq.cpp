#include "sgmr/sample_cq.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "sgmr/errors.hpp"

namespace sgmr {

namespace {

std::vector<int> rank_of(const Ordering& o) {
  auto rank = std::vector<int>(o.size());
  for (auto i = std::size_t{0}; i < o.size(); ++i) rank[o[i]] = static_cast<int>(i);
  return rank;
}

Ordering ordering_of(const std::vector<int>& rank) {
  auto o = Ordering(rank.size());
  for (auto v = std::size_t{0}; v < rank.size(); ++v) o[rank[v]] = static_cast<Var>(v);
  return o;
}

Conjunct chain(const Ordering& o) {
  auto conj = Conjunct{};
  for (auto i = std::size_t{0}; i + 1 < o.size(); ++i) conj.push_back({Rel::less, o[i], o[i + 1]});
  return conj;
}

// Does (cond & orientation) accept exactly the orders in `members`?
bool matches_union(int p, const std::vector<Subgoal>& subgoals, const Condition& cond,
                   const std::vector<Ordering>& members) {
  auto wanted = std::vector<std::vector<int>>{};
  for (const auto& m : members) wanted.push_back(rank_of(m));
  std::sort(wanted.begin(), wanted.end());
  auto q = ConjunctiveQuery{subgoals, cond};
  auto rank = std::vector<int>(p);
  std::iota(rank.begin(), rank.end(), 0);
  do {
    auto accepted = accepts(q, rank);
    auto expected = std::binary_search(wanted.begin(), wanted.end(), rank);
    if (accepted != expected) return false;
  } while (std::next_permutation(rank.begin(), rank.end()));
  return true;
}

// Two chains that differ by swapping one adjacent pair.
std::optional<Condition> adjacent_swap_rule(const std::vector<Ordering>& members) {
  if (members.size() != 2) return std::nullopt;
  const auto& a = members[0];
  const auto& b = members[1];
  auto diff = std::vector<std::size_t>{};
  for (auto i = std::size_t{0}; i < a.size(); ++i) {
    if (a[i] != b[i]) diff.push_back(i);
  }
  if (diff.size() != 2 || diff[1] != diff[0] + 1) return std::nullopt;
  if (a[diff[0]] != b[diff[1]] || a[diff[1]] != b[diff[0]]) return std::nullopt;
  auto conj = chain(a);
  conj[diff[0]].rel = Rel::not_equal;
  return Condition{{conj}};
}

// Transitive reduction of the relations shared by every member, plus a
// disequality for each pair the members disagree on.
Condition common_relations_rule(int p, const std::vector<Ordering>& members) {
  auto ranks = std::vector<std::vector<int>>{};
  for (const auto& m : members) ranks.push_back(rank_of(m));
  auto common = std::vector<std::vector<bool>>(p, std::vector<bool>(p, false));
  auto disagree = std::vector<std::pair<Var, Var>>{};
  for (auto a = 0; a < p; ++a) {
    for (auto b = 0; b < p; ++b) {
      if (a == b) continue;
      common[a][b] = std::all_of(ranks.begin(), ranks.end(), [&](const auto& r) { return r[a] < r[b]; });
    }
  }
  for (auto a = 0; a < p; ++a) {
    for (auto b = a + 1; b < p; ++b) {
      if (!common[a][b] && !common[b][a]) disagree.emplace_back(a, b);
    }
  }
  auto conj = Conjunct{};
  for (auto a = 0; a < p; ++a) {
    for (auto b = 0; b < p; ++b) {
      if (!common[a][b]) continue;
      auto implied = false;
      for (auto c = 0; c < p && !implied; ++c) implied = common[a][c] && common[c][b];
      if (!implied) conj.push_back({Rel::less, a, b});
    }
  }
  for (auto [a, b] : disagree) conj.push_back({Rel::not_equal, a, b});
  return Condition{{conj}};
}

}  // namespace

std::vector<Permutation> automorphisms(const SampleGraph& s) {
  auto p = s.node_count();
  if (p > kMaxPermutationNodes) {
    throw SizeLimitError("automorphism search limited to p <= " + std::to_string(kMaxPermutationNodes) +
                         " (got " + std::to_string(p) + ")");
  }
  auto out = std::vector<Permutation>{};
  auto perm = Permutation(p);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    auto ok = true;
    for (auto [a, b] : s.edges()) {
      if (!s.has_edge(perm[a], perm[b])) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

ConjunctiveQuery cq_from_ordering(const SampleGraph& s, const Ordering& o) {
  auto p = s.node_count();
  if (static_cast<int>(o.size()) != p) throw DomainError("ordering size differs from sample size");
  auto check = o;
  std::sort(check.begin(), check.end());
  for (auto i = 0; i < p; ++i) {
    if (check[i] != i) throw DomainError("ordering is not a permutation of the sample variables");
  }
  auto rank = rank_of(o);
  auto q = ConjunctiveQuery{};
  for (auto [a, b] : s.edges()) {
    q.subgoals.push_back(rank[a] < rank[b] ? Subgoal{a, b} : Subgoal{b, a});
  }
  q.condition = Condition{{chain(o)}};
  return q;
}

std::vector<Ordering> coset_representatives(const SampleGraph& s) {
  return coset_representatives(s, automorphisms(s));
}

std::vector<Ordering> coset_representatives(const SampleGraph& s, const std::vector<Permutation>& auts) {
  auto p = s.node_count();
  auto out = std::vector<Ordering>{};
  auto rank = std::vector<int>(p);
  std::iota(rank.begin(), rank.end(), 0);
  auto moved = std::vector<int>(p);
  do {
    auto smallest = true;
    for (const auto& mu : auts) {
      for (auto v = 0; v < p; ++v) moved[v] = rank[mu[v]];
      if (moved < rank) {
        smallest = false;
        break;
      }
    }
    if (smallest) out.push_back(ordering_of(rank));
  } while (std::next_permutation(rank.begin(), rank.end()));
  return out;
}

Condition merged_condition(const SampleGraph& s, const std::vector<Subgoal>& subgoals,
                           const std::vector<Ordering>& members) {
  auto p = s.node_count();
  if (members.size() == 1) return Condition{{chain(members.front())}};
  auto candidates = std::vector<Condition>{};
  if (auto swap = adjacent_swap_rule(members)) candidates.push_back(*swap);
  candidates.push_back(common_relations_rule(p, members));
  for (const auto& cond : candidates) {
    if (matches_union(p, subgoals, cond, members)) return cond;
  }
  auto dnf = Condition{};
  for (const auto& m : members) dnf.disjuncts.push_back(chain(m));
  return dnf;
}

std::vector<ConjunctiveQuery> group_by_orientation(const SampleGraph& s, const std::vector<ConjunctiveQuery>& cqs,
                                                   std::vector<std::vector<Ordering>>& provenance) {
  if (provenance.size() != cqs.size()) throw ContractViolation("provenance size differs from query count");
  auto groups = std::vector<std::size_t>{};  // index of first member per group
  auto members = std::vector<std::vector<Ordering>>{};
  for (auto i = std::size_t{0}; i < cqs.size(); ++i) {
    auto found = false;
    for (auto g = std::size_t{0}; g < groups.size(); ++g) {
      if (cqs[groups[g]].subgoals == cqs[i].subgoals) {
        members[g].insert(members[g].end(), provenance[i].begin(), provenance[i].end());
        found = true;
        break;
      }
    }
    if (!found) {
      groups.push_back(i);
      members.push_back(provenance[i]);
    }
  }
  auto out = std::vector<ConjunctiveQuery>{};
  for (auto g = std::size_t{0}; g < groups.size(); ++g) {
    const auto& subgoals = cqs[groups[g]].subgoals;
    out.push_back({subgoals, merged_condition(s, subgoals, members[g])});
  }
  provenance = std::move(members);
  return out;
}

CQSet generate_cqs(const SampleGraph& s) {
  auto reps = coset_representatives(s);
  auto cqs = std::vector<ConjunctiveQuery>{};
  auto provenance = std::vector<std::vector<Ordering>>{};
  for (const auto& o : reps) {
    cqs.push_back(cq_from_ordering(s, o));
    provenance.push_back({o});
  }
  auto set = CQSet{};
  set.sample = s;
  set.queries = group_by_orientation(s, cqs, provenance);
  set.provenance = std::move(provenance);
  set.labels.assign(set.queries.size(), "");
  return set;
}

}  // namespace sgmr
