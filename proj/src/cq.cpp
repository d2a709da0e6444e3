#include "sgmr/cq.hpp"

#include <bit>

namespace sgmr {

bool satisfiable(const Conjunct& conj, int p) {
  // Kahn's algorithm on the strict part.
  auto out = std::vector<std::uint64_t>(p, 0);
  auto indegree = std::vector<int>(p, 0);
  for (const auto& atom : conj) {
    if (atom.rel != Rel::less) continue;
    if (atom.lhs == atom.rhs) return false;
    auto bit = std::uint64_t{1} << atom.rhs;
    if (!(out[atom.lhs] & bit)) {
      out[atom.lhs] |= bit;
      ++indegree[atom.rhs];
    }
  }
  auto ready = std::vector<Var>{};
  for (auto v = 0; v < p; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  auto seen = 0;
  while (!ready.empty()) {
    auto v = ready.back();
    ready.pop_back();
    ++seen;
    for (auto m = out[v]; m; m &= m - 1) {
      auto w = std::countr_zero(m);
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  return seen == p;
}

bool satisfiable(const Condition& cond, int p) {
  for (const auto& conj : cond.disjuncts) {
    if (!satisfiable(conj, p)) return false;
  }
  return !cond.disjuncts.empty();
}

bool accepts(const ConjunctiveQuery& q, std::span<const int> rank) {
  for (auto [a, b] : q.subgoals) {
    if (rank[a] > rank[b]) return false;
  }
  return q.condition.holds([&](Var a, Var b) { return rank[a] < rank[b]; });
}

std::string render_atom(const Atom& atom, const SampleGraph& s) {
  return s.name(atom.lhs) + (atom.rel == Rel::less ? "<" : "≠") + s.name(atom.rhs);
}

namespace {

std::string render_conjunct(const Conjunct& conj, const SampleGraph& s) {
  auto out = std::string{};
  for (const auto& atom : conj) {
    if (!out.empty()) out += " & ";
    out += render_atom(atom, s);
  }
  return out;
}

}  // namespace

std::string render_condition(const Condition& cond, const SampleGraph& s) {
  if (cond.disjuncts.empty()) return "false";
  if (cond.disjuncts.size() == 1) return render_conjunct(cond.disjuncts.front(), s);
  auto out = std::string{};
  for (const auto& conj : cond.disjuncts) {
    if (!out.empty()) out += " | ";
    out += "(" + (conj.empty() ? std::string{"true"} : render_conjunct(conj, s)) + ")";
  }
  return out;
}

std::string render(const ConjunctiveQuery& q, const SampleGraph& s) {
  auto out = std::string{};
  for (auto [a, b] : q.subgoals) {
    if (!out.empty()) out += " & ";
    out += "E(" + s.name(a) + "," + s.name(b) + ")";
  }
  auto cond = render_condition(q.condition, s);
  if (!cond.empty()) out += (out.empty() ? "" : " & ") + cond;
  return out;
}

std::string render_ordering(const Ordering& o, const SampleGraph& s) {
  auto out = std::string{};
  for (auto v : o) {
    if (!out.empty()) out += "<";
    out += s.name(v);
  }
  return out;
}

nlohmann::json to_json(const ConjunctiveQuery& q, const SampleGraph& s) {
  auto subgoals = nlohmann::json::array();
  for (auto [a, b] : q.subgoals) subgoals.push_back({s.name(a), s.name(b)});
  auto condition = nlohmann::json::array();
  for (const auto& conj : q.condition.disjuncts) {
    auto c = nlohmann::json::array();
    for (const auto& atom : conj) c.push_back({atom.rel == Rel::less ? "<" : "!=", s.name(atom.lhs), s.name(atom.rhs)});
    condition.push_back(std::move(c));
  }
  return {{"subgoals", std::move(subgoals)}, {"condition", std::move(condition)}, {"text", render(q, s)}};
}

nlohmann::json to_json(const CQSet& set) {
  auto queries = nlohmann::json::array();
  for (auto i = std::size_t{0}; i < set.queries.size(); ++i) {
    auto j = to_json(set.queries[i], set.sample);
    if (i < set.provenance.size() && !set.provenance[i].empty()) {
      auto sources = nlohmann::json::array();
      for (const auto& o : set.provenance[i]) sources.push_back(render_ordering(o, set.sample));
      j["orderings"] = std::move(sources);
    }
    if (i < set.labels.size() && !set.labels[i].empty()) j["label"] = set.labels[i];
    queries.push_back(std::move(j));
  }
  return {{"sample", set.sample.describe()}, {"count", set.queries.size()}, {"queries", std::move(queries)}};
}

}  // namespace sgmr
