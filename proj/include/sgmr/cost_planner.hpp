#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sgmr/cq.hpp"

namespace sgmr {

// coefficient * product of the shares in `vars` (a variable bit mask).
struct CostTerm {
  int coefficient = 1;
  std::uint64_t vars = 0;
  Subgoal subgoal{0, 0};
};

// cost = e * sum(terms). Dominated variables have share 1 and appear in no term.
struct CostExpression {
  std::vector<std::string> names;
  std::uint64_t dominated = 0;
  std::vector<CostTerm> terms;

  int variable_count() const { return static_cast<int>(names.size()); }
  double evaluate(const std::vector<double>& shares) const;
  // "yz + 2wz + 2wx + xy"
  std::string render() const;
};

struct ShareAssignment {
  std::vector<double> shares;
  double k = 1;
  double cost_per_edge = 0;
  double kkt_residual = 0;
};

enum class CostMode { single, variable_oriented };

std::uint64_t dominated_variables(const std::vector<Subgoal>& subgoals, int p);
std::uint64_t dominated_variables(const ConjunctiveQuery& q, int p);

CostExpression cost_expression(const ConjunctiveQuery& q, const SampleGraph& s);
// single mode needs exactly one query.
CostExpression cost_expression(const CQSet& cqs, CostMode mode);
// Variable-oriented expression from an explicit set of bidirectional edges.
CostExpression cost_expression(const SampleGraph& s, const std::vector<std::pair<Var, Var>>& bidirectional);

ShareAssignment optimize_shares(const CostExpression& expr, double k);
ShareAssignment regular_shares(int p, double k);

// Undirected sample edges whose atom appears in both argument orders.
std::vector<std::pair<Var, Var>> bidirectional_edges(const CQSet& cqs);

// Closed form for a regular sample whose bidirectional edges follow one of
// the two layouts where S1 shares are twice the S2 shares. Throws
// StructuralError otherwise.
struct MixedShares {
  ShareAssignment assignment;
  std::vector<Var> s1;
  std::vector<Var> s2;
  // Set when all shares are integers: exact integer replication per edge.
  std::optional<std::uint64_t> exact_replication;
};
MixedShares regular_mixed_shares(const SampleGraph& s, const std::vector<std::pair<Var, Var>>& bidirectional,
                                 double k);

// Variable-oriented plan for a whole CQ set. Regular samples take the mixed
// closed form when it reaches the numeric optimum (it picks integer shares on
// flat optima); everything else uses optimize_shares.
struct VariableOrientedPlan {
  CostExpression expr;
  ShareAssignment assignment;
  bool closed_form = false;
  std::vector<std::uint64_t> integer_shares;
  std::uint64_t integer_replication = 0;
};
VariableOrientedPlan plan_variable_oriented(const CQSet& cqs, double k);

// Per-edge replication of the variable-oriented plan for integer shares.
std::uint64_t exact_replication(const CostExpression& expr, const std::vector<std::uint64_t>& shares);

// Closed forms for degree-d regular samples split into S1 (bidirectional
// edges), S2 and S3. eq2: d' = d'' = d11 = d/2. eq3: S2 independent and
// covering, S1-S2 edges bidirectional, S3-S2 unidirectional.
enum class SpecialCase { eq2, eq3 };
double replication_special_cases(SpecialCase which, int p, int d, int s1, int s2, int s3, double k);

std::uint64_t binomial(std::uint64_t n, std::uint64_t r);  // throws OverflowError
std::uint64_t useful_reducer_count(std::uint64_t b, std::uint64_t p);
std::uint64_t bucket_oriented_replication(std::uint64_t b, std::uint64_t p);
double generalized_partition_replication(std::uint64_t b, std::uint64_t p);
// "C(n,r)" for reports when the value overflows.
std::string binomial_symbol(std::uint64_t n, std::uint64_t r);

struct Convertibility {
  double excess = 0;  // p - alpha - 2 beta
  bool convertible = false;
};
Convertibility convertibility_check(double alpha, double beta, int p);

double c5_join_bound(const std::array<std::uint64_t, 5>& n);

struct SplitReport {
  double combined = 0;
  std::vector<double> parts;
  double split_total = 0;
  bool holds = false;
};
// splits: lists of query indices partitioning cqs.queries.
SplitReport combined_vs_split_check(const CQSet& cqs, const std::vector<std::vector<std::size_t>>& splits, double k);

// Nearest integer >= 1 per share.
std::vector<std::uint64_t> round_shares(const ShareAssignment& a);

nlohmann::json to_json(const ShareAssignment& a, const std::vector<std::string>& names);

}  // namespace sgmr
