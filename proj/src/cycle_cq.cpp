#include "sgmr/cycle_cq.hpp"

#include <algorithm>
#include <numeric>

#include "sgmr/errors.hpp"

namespace sgmr {

int RunSequence::length() const { return std::accumulate(runs.begin(), runs.end(), 0); }

std::string RunSequence::pattern() const {
  auto out = std::string{};
  for (auto i = std::size_t{0}; i < runs.size(); ++i) out.append(runs[i], i % 2 == 0 ? 'u' : 'd');
  return out;
}

std::string RunSequence::digits() const {
  auto wide = std::any_of(runs.begin(), runs.end(), [](int r) { return r >= 10; });
  auto out = std::string{};
  for (auto r : runs) {
    if (wide && !out.empty()) out += ",";
    out += std::to_string(r);
  }
  return out;
}

namespace {

void compositions(int remaining, std::vector<int>& prefix, std::vector<RunSequence>& out) {
  if (remaining == 0) {
    if (!prefix.empty() && prefix.size() % 2 == 0) out.push_back({prefix});
    return;
  }
  for (auto part = 1; part <= remaining; ++part) {
    prefix.push_back(part);
    compositions(remaining - part, prefix, out);
    prefix.pop_back();
  }
}

std::vector<std::vector<int>> class_members(const std::vector<int>& runs) {
  auto out = std::vector<std::vector<int>>{};
  auto reversed = std::vector<int>(runs.rbegin(), runs.rend());
  for (const auto* base : {&runs, static_cast<const std::vector<int>*>(&reversed)}) {
    for (auto shift = std::size_t{0}; shift < base->size(); shift += 2) {
      auto r = *base;
      std::rotate(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(shift), r.end());
      out.push_back(std::move(r));
    }
  }
  return out;
}

// Symmetry of the p-cycle acting on positions: position i -> (sign*i + offset) mod p.
struct CycleMap {
  int sign;
  int offset;
  int apply(int i, int p) const { return ((sign * i + offset) % p + p) % p; }
};

// Is x_a < x_b implied by the pattern, for adjacent positions a, b?
bool up_between(const std::string& pat, int a, int b) {
  auto p = static_cast<int>(pat.size());
  if ((a + 1) % p == b) return pat[a] == 'u';
  return pat[b] == 'd';
}

}  // namespace

std::vector<RunSequence> run_sequences(int p) {
  if (p < 3) throw DomainError("run sequences need p >= 3");
  auto out = std::vector<RunSequence>{};
  auto prefix = std::vector<int>{};
  compositions(p, prefix, out);
  std::stable_sort(out.begin(), out.end(), [](const RunSequence& a, const RunSequence& b) {
    if (a.runs.size() != b.runs.size()) return a.runs.size() < b.runs.size();
    return a.runs < b.runs;
  });
  return out;
}

bool equivalent(const RunSequence& a, const RunSequence& b) {
  auto members = class_members(a.runs);
  return std::find(members.begin(), members.end(), b.runs) != members.end();
}

std::vector<RunSequence> canonical_run_sequences(int p) {
  auto out = std::vector<RunSequence>{};
  for (const auto& seq : run_sequences(p)) {
    auto members = class_members(seq.runs);
    if (*std::min_element(members.begin(), members.end()) == seq.runs) out.push_back(seq);
  }
  std::stable_sort(out.begin(), out.end(), [](const RunSequence& a, const RunSequence& b) {
    if (a.runs.size() != b.runs.size()) return a.runs.size() > b.runs.size();
    return a.runs < b.runs;
  });
  return out;
}

ConjunctiveQuery cq_from_run_sequence(const RunSequence& seq) {
  auto pat = seq.pattern();
  auto p = static_cast<int>(pat.size());
  if (p < 3 || seq.runs.size() % 2 != 0) throw DomainError("run sequence must have even length and sum >= 3");
  auto q = ConjunctiveQuery{};
  auto base = Conjunct{};
  for (auto i = 0; i < p; ++i) {
    auto j = (i + 1) % p;
    auto sg = pat[i] == 'u' ? Subgoal{i, j} : Subgoal{j, i};
    q.subgoals.push_back(sg);
    base.push_back({Rel::less, sg.from, sg.to});
  }
  // Symmetries of the cycle that carry a solution of this CQ to another one.
  auto stabilizer = std::vector<CycleMap>{};
  for (auto sign : {1, -1}) {
    for (auto offset = 0; offset < p; ++offset) {
      auto m = CycleMap{sign, offset};
      if (sign == 1 && offset == 0) continue;
      auto keeps = true;
      for (auto i = 0; i < p && keeps; ++i) {
        auto a = m.apply(i, p);
        auto b = m.apply((i + 1) % p, p);
        keeps = up_between(pat, a, b) == (pat[i] == 'u');
      }
      if (keeps) stabilizer.push_back(m);
    }
  }
  auto orbit = std::vector<int>{};
  auto fixes_first = false;
  for (const auto& m : stabilizer) {
    auto image = m.apply(0, p);
    if (image == 0) {
      fixes_first = true;
    } else {
      orbit.push_back(image);
    }
  }
  std::sort(orbit.begin(), orbit.end());
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  for (auto j : orbit) base.push_back({Rel::less, 0, j});
  if (fixes_first) base.push_back({Rel::less, 1, p - 1});
  q.condition = Condition{{base}};
  return q;
}

CQSet cycle_cqs(int p) {
  auto set = CQSet{};
  set.sample = builtin_sample("cycle:" + std::to_string(p));
  for (const auto& seq : canonical_run_sequences(p)) {
    set.queries.push_back(cq_from_run_sequence(seq));
    set.provenance.emplace_back();
    set.labels.push_back(seq.digits());
  }
  return set;
}

}  // namespace sgmr
