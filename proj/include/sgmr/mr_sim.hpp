#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgmr/cost_planner.hpp"
#include "sgmr/cq.hpp"
#include "sgmr/graph.hpp"
#include "sgmr/instance.hpp"

namespace sgmr {

enum class Scheme { partition, multiway, bucket_ordered, variable_oriented };

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);

// Reducer keys are packed into one integer per scheme; KeySpace converts
// between the packed code and the bucket list.
class KeySpace {
 public:
  KeySpace() = default;
  static KeySpace partition(std::uint64_t b);
  static KeySpace multiway(std::uint64_t b);
  static KeySpace bucket_ordered(std::uint64_t b, int p);
  static KeySpace variable_oriented(std::vector<std::uint64_t> shares);

  Scheme scheme() const { return scheme_; }
  // Buckets are 1-based for partition, multiway and bucket-ordered, slots
  // 0-based for variable-oriented.
  std::uint64_t encode(const std::vector<std::uint64_t>& buckets) const;
  std::vector<std::uint64_t> decode(std::uint64_t code) const;
  std::string render(std::uint64_t code) const;

 private:
  Scheme scheme_ = Scheme::bucket_ordered;
  std::vector<std::uint64_t> radix_;
};

struct KeyedEdge {
  std::uint64_t key;
  NodeId u;
  NodeId v;
};

struct MapOutput {
  KeySpace keys;
  std::vector<KeyedEdge> pairs;
  // Multiway: pairs before collapsing the two coinciding keys.
  std::uint64_t raw_pairs = 0;
};

MapOutput map_partition(const DataGraph& g, std::uint64_t b, std::uint64_t seed);
MapOutput map_multiway_triangle(const DataGraph& g, std::uint64_t b, std::uint64_t seed);
MapOutput map_bucket_ordered(const DataGraph& g, std::uint64_t b, int p, std::uint64_t seed);
MapOutput map_variable_oriented(const DataGraph& g, const CQSet& cqs, const std::vector<std::uint64_t>& shares,
                                std::uint64_t seed);

struct RoundParams {
  Scheme scheme = Scheme::bucket_ordered;
  std::uint64_t b = 1;
  // Variable-oriented: integer shares per variable. Empty means plan them for k.
  std::vector<std::uint64_t> shares;
  double k = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct CostReport {
  std::string scheme;
  std::uint64_t seed = 0;
  std::uint64_t b = 0;
  std::vector<std::uint64_t> shares;
  std::uint64_t edges = 0;
  std::uint64_t key_value_pairs_emitted = 0;
  std::uint64_t raw_pairs = 0;
  std::uint64_t planned_reducers = 0;
  std::uint64_t distinct_reducers_used = 0;
  double per_edge_replication = 0;
  double planned_replication = 0;  // variable-oriented: continuous plan
  // local edge count -> number of reducers with that load
  std::map<std::uint64_t, std::uint64_t> reducer_edge_histogram;
  std::uint64_t max_reducer_edges = 0;
  std::uint64_t instances_found = 0;
  double work_alpha = 0;
  double work_beta = 1.5;
  // sum over reducers of n_local^alpha * m_local^beta
  double reducer_work_proxy = 0;
};

nlohmann::json to_json(const CostReport& r);

// Node order used inside reducers for a scheme.
NodeOrder reducer_order(Scheme scheme, std::uint64_t b, std::uint64_t seed);

// Evaluates every CQ on the local graph and keeps the instances whose home
// key is `key`.
struct ReduceContext {
  const CQSet* cqs = nullptr;
  const KeySpace* keys = nullptr;
  NodeOrder order;
  std::uint64_t b = 1;
  std::vector<std::uint64_t> shares;
  std::uint64_t seed = 0;
};
std::vector<Instance> reduce_evaluate(std::uint64_t key, const std::vector<Edge>& edges, const ReduceContext& ctx);

struct RoundResult {
  std::vector<Instance> instances;
  CostReport report;
};

RoundResult run_round(const DataGraph& g, const RoundParams& params, const CQSet& cqs);

}  // namespace sgmr
