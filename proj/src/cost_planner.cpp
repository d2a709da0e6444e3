#include "sgmr/cost_planner.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>

#include "sgmr/errors.hpp"

namespace sgmr {

namespace {

std::string share_name(const std::string& name) {
  auto out = name;
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

// Subgoals as undirected masks; variables compared by the subgoals they occur in.
std::uint64_t dominated_from_masks(const std::vector<std::uint64_t>& edge_masks, int p) {
  auto occurs = std::vector<std::uint64_t>(p, 0);  // bit i: variable occurs in subgoal i
  for (auto i = std::size_t{0}; i < edge_masks.size(); ++i) {
    for (auto m = edge_masks[i]; m; m &= m - 1) occurs[std::countr_zero(m)] |= std::uint64_t{1} << i;
  }
  auto dominated = std::uint64_t{0};
  for (auto a = 0; a < p; ++a) {
    for (auto b = 0; b < p; ++b) {
      if (a == b) continue;
      auto subset = (occurs[a] & ~occurs[b]) == 0;
      if (subset && (occurs[a] != occurs[b] || b < a)) {
        dominated |= std::uint64_t{1} << a;
        break;
      }
    }
  }
  return dominated;
}

std::uint64_t full_mask(int p) { return p >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p) - 1; }

CostExpression build(const SampleGraph& s, const std::vector<Subgoal>& subgoals, const std::vector<int>& coefficients) {
  auto p = s.node_count();
  auto masks = std::vector<std::uint64_t>{};
  for (auto sg : subgoals) masks.push_back((std::uint64_t{1} << sg.from) | (std::uint64_t{1} << sg.to));
  auto expr = CostExpression{};
  for (auto v = 0; v < p; ++v) expr.names.push_back(s.name(v));
  expr.dominated = dominated_from_masks(masks, p);
  auto live = full_mask(p) & ~expr.dominated;
  for (auto i = std::size_t{0}; i < subgoals.size(); ++i) {
    expr.terms.push_back({coefficients[i], live & ~masks[i], subgoals[i]});
  }
  return expr;
}

}  // namespace

double CostExpression::evaluate(const std::vector<double>& shares) const {
  auto total = 0.0;
  for (const auto& t : terms) {
    auto prod = static_cast<double>(t.coefficient);
    for (auto m = t.vars; m; m &= m - 1) prod *= shares[std::countr_zero(m)];
    total += prod;
  }
  return total;
}

std::string CostExpression::render() const {
  auto out = std::string{};
  for (const auto& t : terms) {
    if (!out.empty()) out += " + ";
    auto body = std::string{};
    for (auto m = t.vars; m; m &= m - 1) body += share_name(names[std::countr_zero(m)]);
    if (body.empty()) {
      out += std::to_string(t.coefficient);
    } else {
      out += (t.coefficient == 1 ? std::string{} : std::to_string(t.coefficient)) + body;
    }
  }
  return out;
}

std::uint64_t dominated_variables(const std::vector<Subgoal>& subgoals, int p) {
  auto masks = std::vector<std::uint64_t>{};
  for (auto sg : subgoals) masks.push_back((std::uint64_t{1} << sg.from) | (std::uint64_t{1} << sg.to));
  return dominated_from_masks(masks, p);
}

std::uint64_t dominated_variables(const ConjunctiveQuery& q, int p) { return dominated_variables(q.subgoals, p); }

CostExpression cost_expression(const ConjunctiveQuery& q, const SampleGraph& s) {
  return build(s, q.subgoals, std::vector<int>(q.subgoals.size(), 1));
}

std::vector<std::pair<Var, Var>> bidirectional_edges(const CQSet& cqs) {
  auto out = std::vector<std::pair<Var, Var>>{};
  for (auto [a, b] : cqs.sample.edges()) {
    auto forward = false;
    auto backward = false;
    for (const auto& q : cqs.queries) {
      for (auto sg : q.subgoals) {
        forward = forward || (sg.from == a && sg.to == b);
        backward = backward || (sg.from == b && sg.to == a);
      }
    }
    if (forward && backward) out.emplace_back(a, b);
  }
  return out;
}

CostExpression cost_expression(const CQSet& cqs, CostMode mode) {
  if (cqs.queries.empty()) throw StructuralError("empty CQ set");
  if (mode == CostMode::single) {
    if (cqs.queries.size() != 1) throw StructuralError("single mode needs exactly one CQ");
    return cost_expression(cqs.queries.front(), cqs.sample);
  }
  auto undirected = [](const ConjunctiveQuery& q) {
    auto pairs = std::multiset<std::pair<Var, Var>>{};
    for (auto sg : q.subgoals) pairs.insert({std::min(sg.from, sg.to), std::max(sg.from, sg.to)});
    return pairs;
  };
  auto reference = undirected(cqs.queries.front());
  for (const auto& q : cqs.queries) {
    if (undirected(q) != reference) throw StructuralError("variable-oriented mode needs one subgoal multiset");
  }
  return cost_expression(cqs.sample, bidirectional_edges(cqs));
}

CostExpression cost_expression(const SampleGraph& s, const std::vector<std::pair<Var, Var>>& bidirectional) {
  auto subgoals = std::vector<Subgoal>{};
  auto coefficients = std::vector<int>{};
  for (auto [a, b] : s.edges()) {
    subgoals.push_back({a, b});
    auto both = std::any_of(bidirectional.begin(), bidirectional.end(), [&](auto e) {
      return (e.first == a && e.second == b) || (e.first == b && e.second == a);
    });
    coefficients.push_back(both ? 2 : 1);
  }
  return build(s, subgoals, coefficients);
}

ShareAssignment regular_shares(int p, double k) {
  if (p < 1 || !(k >= 1)) throw DomainError("regular_shares needs p >= 1 and k >= 1");
  auto a = ShareAssignment{};
  a.k = k;
  a.shares.assign(p, std::pow(k, 1.0 / p));
  return a;
}

namespace {

bool listed(const std::vector<std::pair<Var, Var>>& edges, Var a, Var b) {
  return std::any_of(edges.begin(), edges.end(), [&](auto e) {
    return (e.first == a && e.second == b) || (e.first == b && e.second == a);
  });
}

// Snap values within 1e-9 relative of an integer.
double snap(double x) {
  auto r = std::round(x);
  return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : x;
}

}  // namespace

MixedShares regular_mixed_shares(const SampleGraph& s, const std::vector<std::pair<Var, Var>>& bidirectional,
                                 double k) {
  if (!s.is_regular()) throw StructuralError("regular_mixed_shares needs a regular sample graph; use optimize_shares");
  if (!(k >= 1)) throw DomainError("reducer budget k must be at least 1");
  auto p = s.node_count();
  for (auto [a, b] : bidirectional) {
    if (!s.has_edge(a, b)) throw StructuralError("bidirectional edge is not a sample edge");
  }
  auto in_s1 = std::vector<bool>(p, false);
  // Layout (a): bidirectional edges inside S1, unidirectional ones between S1 and S2.
  for (auto [a, b] : bidirectional) in_s1[a] = in_s1[b] = true;
  auto case_a = true;
  for (auto [a, b] : s.edges()) {
    if (!listed(bidirectional, a, b) && !bidirectional.empty() && in_s1[a] == in_s1[b]) case_a = false;
  }
  if (!case_a) {
    // Layout (b): bidirectional edges between S1 and S2, unidirectional ones inside S2.
    std::fill(in_s1.begin(), in_s1.end(), true);
    for (auto [a, b] : s.edges()) {
      if (!listed(bidirectional, a, b)) in_s1[a] = in_s1[b] = false;
    }
    for (auto [a, b] : bidirectional) {
      if (in_s1[a] == in_s1[b]) {
        throw StructuralError("bidirectional edges do not match either mixed layout; use optimize_shares");
      }
    }
  }
  auto out = MixedShares{};
  for (auto v = 0; v < p; ++v) (in_s1[v] ? out.s1 : out.s2).push_back(v);
  auto s1 = static_cast<double>(out.s1.size());
  auto t = snap(std::pow(k / std::pow(2.0, s1), 1.0 / p));
  out.assignment.k = k;
  out.assignment.shares.assign(p, t);
  for (auto v : out.s1) out.assignment.shares[v] = 2 * t;
  auto expr = cost_expression(s, bidirectional);
  out.assignment.cost_per_edge = expr.evaluate(out.assignment.shares);
  if (t == std::round(t)) {
    auto ints = std::vector<std::uint64_t>{};
    auto product = static_cast<unsigned __int128>(1);
    for (auto x : out.assignment.shares) {
      ints.push_back(static_cast<std::uint64_t>(x));
      product *= static_cast<std::uint64_t>(x);
    }
    if (product == static_cast<unsigned __int128>(k)) out.exact_replication = exact_replication(expr, ints);
  }
  return out;
}

VariableOrientedPlan plan_variable_oriented(const CQSet& cqs, double k) {
  auto plan = VariableOrientedPlan{};
  plan.expr = cost_expression(cqs, CostMode::variable_oriented);
  plan.assignment = optimize_shares(plan.expr, k);
  if (cqs.sample.is_regular() && plan.expr.dominated == 0) {
    try {
      auto mixed = regular_mixed_shares(cqs.sample, bidirectional_edges(cqs), k);
      mixed.assignment.cost_per_edge = plan.expr.evaluate(mixed.assignment.shares);
      if (mixed.assignment.cost_per_edge <= plan.assignment.cost_per_edge * (1 + 1e-9)) {
        mixed.assignment.kkt_residual = plan.assignment.kkt_residual;
        plan.assignment = mixed.assignment;
        plan.closed_form = true;
      }
    } catch (const StructuralError&) {
      // layout does not fit; keep the numeric plan
    }
  }
  plan.integer_shares = round_shares(plan.assignment);
  plan.integer_replication = exact_replication(plan.expr, plan.integer_shares);
  return plan;
}

std::uint64_t exact_replication(const CostExpression& expr, const std::vector<std::uint64_t>& shares) {
  auto total = static_cast<unsigned __int128>(0);
  for (const auto& t : expr.terms) {
    auto prod = static_cast<unsigned __int128>(t.coefficient);
    for (auto m = t.vars; m; m &= m - 1) prod *= shares[std::countr_zero(m)];
    total += prod;
  }
  if (total > std::numeric_limits<std::uint64_t>::max()) throw OverflowError("replication exceeds 64 bits");
  return static_cast<std::uint64_t>(total);
}

double replication_special_cases(SpecialCase which, int p, int d, int s1, int s2, int s3, double k) {
  if (p < 1 || d < 1 || s1 < 0 || s2 < 0 || s3 < 0 || s1 + s2 + s3 != p || !(k >= 1)) {
    throw StructuralError("special case needs s1 + s2 + s3 = p, d >= 1, k >= 1");
  }
  auto kp = std::pow(k, 1.0 - 2.0 / p);
  if (which == SpecialCase::eq3) {
    // S2 independent and covering: every S1 and S3 edge ends in S2.
    if (s2 != s1 + s3) throw StructuralError("eq3 needs s2 = s1 + s3 (S2 independent and covering)");
    return p * d * kp / std::pow(2.0, 2.0 * s3 / p);
  }
  // Half of each S1 node's edges stay in S1, half go to S2; S2 splits evenly
  // between S1 and S3. Edge counting then forces s1 = s2 = s3.
  if (d % 2 != 0 || s1 != s2 || s2 != s3) throw StructuralError("eq2 needs even d and s1 = s2 = s3");
  return p * d / 4.0 * (std::cbrt(4.0) + std::cbrt(2.0)) * kp;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  auto result = static_cast<unsigned __int128>(1);
  for (auto i = std::uint64_t{1}; i <= r; ++i) {
    result = result * (n - r + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max() / 2) throw OverflowError(binomial_symbol(n, r) + " overflows");
  }
  return static_cast<std::uint64_t>(result);
}

std::string binomial_symbol(std::uint64_t n, std::uint64_t r) {
  return "C(" + std::to_string(n) + "," + std::to_string(r) + ")";
}

std::uint64_t useful_reducer_count(std::uint64_t b, std::uint64_t p) {
  if (b < 1 || p < 1) throw DomainError("useful_reducer_count needs b >= 1 and p >= 1");
  return binomial(b + p - 1, p);
}

std::uint64_t bucket_oriented_replication(std::uint64_t b, std::uint64_t p) {
  if (b < 1 || p < 2) throw DomainError("bucket_oriented_replication needs b >= 1 and p >= 2");
  return binomial(b + p - 3, p - 2);
}

double generalized_partition_replication(std::uint64_t b, std::uint64_t p) {
  if (p < 2 || b < p) throw DomainError("generalized_partition_replication needs b >= p >= 2");
  auto bb = static_cast<double>(b);
  return (bb - 1) / bb * static_cast<double>(binomial(b - 2, p - 2)) +
         static_cast<double>(binomial(b - 1, p - 1)) / bb;
}

Convertibility convertibility_check(double alpha, double beta, int p) {
  if (alpha < 0 || beta < 0) throw DomainError("alpha and beta must be non-negative");
  auto c = Convertibility{};
  c.excess = p - alpha - 2 * beta;
  if (std::abs(c.excess) < 1e-12) c.excess = 0;
  c.convertible = c.excess <= 0;
  return c;
}

double c5_join_bound(const std::array<std::uint64_t, 5>& n) {
  for (auto x : n) {
    if (x < 1) throw DomainError("relation sizes must be at least 1");
  }
  auto best = std::optional<unsigned __int128>{};
  for (auto r = 0; r < 5; ++r) {
    auto t = [&](int i) { return static_cast<unsigned __int128>(n[(i - 1 + r) % 5]); };
    auto lhs = t(1) * t(5) * t(3);
    auto rhs = t(2) * t(4);
    if (lhs < rhs && (!best || lhs < *best)) best = lhs;
  }
  if (best) return static_cast<double>(*best);
  auto log_sum = 0.0;
  for (auto x : n) log_sum += std::log(static_cast<double>(x));
  return std::exp(log_sum / 2);
}

SplitReport combined_vs_split_check(const CQSet& cqs, const std::vector<std::vector<std::size_t>>& splits, double k) {
  auto seen = std::vector<int>(cqs.queries.size(), 0);
  for (const auto& part : splits) {
    for (auto i : part) {
      if (i >= seen.size()) throw DomainError("split refers to unknown query");
      ++seen[i];
    }
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
    throw DomainError("splits must partition the CQ set");
  }
  auto report = SplitReport{};
  report.combined = optimize_shares(cost_expression(cqs, CostMode::variable_oriented), k).cost_per_edge;
  for (const auto& part : splits) {
    auto sub = CQSet{};
    sub.sample = cqs.sample;
    for (auto i : part) sub.queries.push_back(cqs.queries[i]);
    auto cost = optimize_shares(cost_expression(sub, CostMode::variable_oriented), k).cost_per_edge;
    report.parts.push_back(cost);
    report.split_total += cost;
  }
  report.holds = report.combined <= report.split_total * (1 + 1e-9);
  return report;
}

std::vector<std::uint64_t> round_shares(const ShareAssignment& a) {
  auto out = std::vector<std::uint64_t>{};
  for (auto x : a.shares) out.push_back(static_cast<std::uint64_t>(std::max(1.0, std::round(x))));
  return out;
}

nlohmann::json to_json(const ShareAssignment& a, const std::vector<std::string>& names) {
  auto shares = nlohmann::json::object();
  for (auto i = std::size_t{0}; i < a.shares.size() && i < names.size(); ++i) shares[names[i]] = a.shares[i];
  return {{"k", a.k}, {"shares", shares}, {"cost_per_edge", a.cost_per_edge}, {"kkt_residual", a.kkt_residual}};
}

}  // namespace sgmr
