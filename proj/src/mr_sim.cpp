#include "sgmr/mr_sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <tuple>
#include <thread>

#include "sgmr/cq_eval.hpp"
#include "sgmr/errors.hpp"
#include "sgmr/serial_enum.hpp"

namespace sgmr {

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::partition:
      return "partition";
    case Scheme::multiway:
      return "multiway";
    case Scheme::bucket_ordered:
      return "bucket-ordered";
    case Scheme::variable_oriented:
      return "variable-oriented";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  for (auto s : {Scheme::partition, Scheme::multiway, Scheme::bucket_ordered, Scheme::variable_oriented}) {
    if (to_string(s) == name) return s;
  }
  throw DomainError("unknown scheme '" + name + "'");
}

namespace {

void check_capacity(const std::vector<std::uint64_t>& radix) {
  auto total = static_cast<unsigned __int128>(1);
  for (auto r : radix) {
    total *= r;
    if (total > std::numeric_limits<std::uint64_t>::max()) throw OverflowError("reducer key space exceeds 64 bits");
  }
}

std::uint64_t offset_of(Scheme s) { return s == Scheme::multiway || s == Scheme::bucket_ordered ? 1 : 0; }

}  // namespace

KeySpace KeySpace::partition(std::uint64_t b) {
  auto k = KeySpace{};
  k.scheme_ = Scheme::partition;
  k.radix_.assign(3, b + 1);
  check_capacity(k.radix_);
  return k;
}

KeySpace KeySpace::multiway(std::uint64_t b) {
  auto k = KeySpace{};
  k.scheme_ = Scheme::multiway;
  k.radix_.assign(3, b);
  check_capacity(k.radix_);
  return k;
}

KeySpace KeySpace::bucket_ordered(std::uint64_t b, int p) {
  auto k = KeySpace{};
  k.scheme_ = Scheme::bucket_ordered;
  k.radix_.assign(p, b);
  check_capacity(k.radix_);
  return k;
}

KeySpace KeySpace::variable_oriented(std::vector<std::uint64_t> shares) {
  auto k = KeySpace{};
  k.scheme_ = Scheme::variable_oriented;
  k.radix_ = std::move(shares);
  check_capacity(k.radix_);
  return k;
}

std::uint64_t KeySpace::encode(const std::vector<std::uint64_t>& buckets) const {
  auto code = std::uint64_t{0};
  auto off = offset_of(scheme_);
  for (auto i = std::size_t{0}; i < radix_.size(); ++i) code = code * radix_[i] + (buckets[i] - off);
  return code;
}

std::vector<std::uint64_t> KeySpace::decode(std::uint64_t code) const {
  auto out = std::vector<std::uint64_t>(radix_.size());
  auto off = offset_of(scheme_);
  for (auto i = radix_.size(); i-- > 0;) {
    out[i] = code % radix_[i] + off;
    code /= radix_[i];
  }
  return out;
}

std::string KeySpace::render(std::uint64_t code) const {
  auto parts = decode(code);
  auto open = scheme_ == Scheme::partition ? "{" : "[";
  auto close = scheme_ == Scheme::partition ? "}" : "]";
  auto out = std::string{open};
  for (auto i = std::size_t{0}; i < parts.size(); ++i) out += (i ? "," : "") + std::to_string(parts[i]);
  return out + close;
}

MapOutput map_partition(const DataGraph& g, std::uint64_t b, std::uint64_t seed) {
  if (b < 3) throw DomainError("partition scheme needs b >= 3");
  auto out = MapOutput{KeySpace::partition(b), {}, 0};
  for (const auto& e : g.edges()) {
    auto i = bucket_hash(e.u, b, seed);
    auto j = bucket_hash(e.v, b, seed);
    if (i != j) {
      for (auto k = std::uint64_t{1}; k <= b; ++k) {
        if (k == i || k == j) continue;
        auto set = std::vector<std::uint64_t>{i, j, k};
        std::sort(set.begin(), set.end());
        out.pairs.push_back({out.keys.encode(set), e.u, e.v});
      }
    } else {
      for (auto k = std::uint64_t{1}; k <= b; ++k) {
        for (auto l = k + 1; l <= b; ++l) {
          if (k == i || l == i) continue;
          auto set = std::vector<std::uint64_t>{i, k, l};
          std::sort(set.begin(), set.end());
          out.pairs.push_back({out.keys.encode(set), e.u, e.v});
        }
      }
    }
  }
  out.raw_pairs = out.pairs.size();
  return out;
}

MapOutput map_multiway_triangle(const DataGraph& g, std::uint64_t b, std::uint64_t seed) {
  if (b < 1) throw DomainError("multiway scheme needs b >= 1");
  auto out = MapOutput{KeySpace::multiway(b), {}, 0};
  auto codes = std::vector<std::uint64_t>{};
  for (const auto& e : g.edges()) {
    auto hu = bucket_hash(e.u, b, seed);
    auto hv = bucket_hash(e.v, b, seed);
    codes.clear();
    for (auto z = std::uint64_t{1}; z <= b; ++z) {
      codes.push_back(out.keys.encode({hu, hv, z}));
      codes.push_back(out.keys.encode({z, hu, hv}));
      codes.push_back(out.keys.encode({hu, z, hv}));
    }
    out.raw_pairs += codes.size();
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    for (auto c : codes) out.pairs.push_back({c, e.u, e.v});
  }
  return out;
}

MapOutput map_bucket_ordered(const DataGraph& g, std::uint64_t b, int p, std::uint64_t seed) {
  if (b < 1 || p < 2) throw DomainError("bucket-ordered scheme needs b >= 1 and p >= 2");
  auto out = MapOutput{KeySpace::bucket_ordered(b, p), {}, 0};
  // Nondecreasing (p-2)-lists over [1,b].
  auto fillers = std::vector<std::vector<std::uint64_t>>{};
  auto current = std::vector<std::uint64_t>{};
  auto gen = [&](auto&& self, std::uint64_t from) -> void {
    if (static_cast<int>(current.size()) == p - 2) {
      fillers.push_back(current);
      return;
    }
    for (auto x = from; x <= b; ++x) {
      current.push_back(x);
      self(self, x);
      current.pop_back();
    }
  };
  gen(gen, 1);
  auto key = std::vector<std::uint64_t>(p);
  for (const auto& e : g.edges()) {
    auto hu = bucket_hash(e.u, b, seed);
    auto hv = bucket_hash(e.v, b, seed);
    for (const auto& f : fillers) {
      std::copy(f.begin(), f.end(), key.begin());
      key[p - 2] = hu;
      key[p - 1] = hv;
      std::sort(key.begin(), key.end());
      out.pairs.push_back({out.keys.encode(key), e.u, e.v});
    }
  }
  out.raw_pairs = out.pairs.size();
  return out;
}

MapOutput map_variable_oriented(const DataGraph& g, const CQSet& cqs, const std::vector<std::uint64_t>& shares,
                                std::uint64_t seed) {
  const auto& s = cqs.sample;
  auto p = s.node_count();
  if (static_cast<int>(shares.size()) != p) throw DomainError("one share per sample variable expected");
  for (auto x : shares) {
    if (x < 1) throw DomainError("shares must be integers >= 1");
  }
  auto out = MapOutput{KeySpace::variable_oriented(shares), {}, 0};
  // Atoms present in the CQ set, by sample edge.
  auto atoms = std::vector<Subgoal>{};
  for (auto [a, b] : s.edges()) {
    auto forward = false;
    auto backward = false;
    for (const auto& q : cqs.queries) {
      for (auto sg : q.subgoals) {
        forward = forward || (sg.from == a && sg.to == b);
        backward = backward || (sg.from == b && sg.to == a);
      }
    }
    if (forward) atoms.push_back({a, b});
    if (backward) atoms.push_back({b, a});
  }
  auto slots = std::vector<std::uint64_t>(p, 0);
  for (const auto& e : g.edges()) {
    for (auto atom : atoms) {
      // E(A,B) holds the edge as (smaller, larger) in id order.
      auto fixed_a = bucket_hash(e.u, shares[atom.from], seed) - 1;
      auto fixed_b = bucket_hash(e.v, shares[atom.to], seed) - 1;
      auto free_vars = std::vector<Var>{};
      for (auto v = 0; v < p; ++v) {
        if (v != atom.from && v != atom.to) free_vars.push_back(v);
      }
      std::fill(slots.begin(), slots.end(), 0);
      slots[atom.from] = fixed_a;
      slots[atom.to] = fixed_b;
      while (true) {
        out.pairs.push_back({out.keys.encode(slots), e.u, e.v});
        auto i = free_vars.size();
        while (i > 0) {
          auto v = free_vars[i - 1];
          if (++slots[v] < shares[v]) break;
          slots[v] = 0;
          --i;
        }
        if (i == 0) break;
      }
    }
  }
  out.raw_pairs = out.pairs.size();
  return out;
}

nlohmann::json to_json(const CostReport& r) {
  auto hist = nlohmann::json::object();
  for (auto [load, count] : r.reducer_edge_histogram) hist[std::to_string(load)] = count;
  return {{"scheme", r.scheme},
          {"seed", r.seed},
          {"b", r.b},
          {"shares", r.shares},
          {"edges", r.edges},
          {"key_value_pairs_emitted", r.key_value_pairs_emitted},
          {"raw_pairs", r.raw_pairs},
          {"planned_reducers", r.planned_reducers},
          {"distinct_reducers_used", r.distinct_reducers_used},
          {"per_edge_replication", r.per_edge_replication},
          {"planned_replication", r.planned_replication},
          {"max_reducer_edges", r.max_reducer_edges},
          {"reducer_edge_histogram", hist},
          {"instances_found", r.instances_found},
          {"work_alpha", r.work_alpha},
          {"work_beta", r.work_beta},
          {"reducer_work_proxy", r.reducer_work_proxy}};
}

NodeOrder reducer_order(Scheme scheme, std::uint64_t b, std::uint64_t seed) {
  return scheme == Scheme::bucket_ordered ? NodeOrder::by_bucket(b, seed) : NodeOrder::by_id();
}

namespace {

std::uint64_t home_key(const Tuple& x, const ReduceContext& ctx) {
  const auto& keys = *ctx.keys;
  auto buckets = std::vector<std::uint64_t>{};
  switch (keys.scheme()) {
    case Scheme::bucket_ordered:
      for (auto u : x) buckets.push_back(bucket_hash(u, ctx.b, ctx.seed));
      std::sort(buckets.begin(), buckets.end());
      break;
    case Scheme::multiway:
      for (auto u : x) buckets.push_back(bucket_hash(u, ctx.b, ctx.seed));
      break;
    case Scheme::variable_oriented:
      for (auto v = std::size_t{0}; v < x.size(); ++v) buckets.push_back(bucket_hash(x[v], ctx.shares[v], ctx.seed) - 1);
      break;
    case Scheme::partition: {
      for (auto u : x) buckets.push_back(bucket_hash(u, ctx.b, ctx.seed));
      std::sort(buckets.begin(), buckets.end());
      buckets.erase(std::unique(buckets.begin(), buckets.end()), buckets.end());
      for (auto k = std::uint64_t{1}; buckets.size() < 3 && k <= ctx.b; ++k) {
        if (std::find(buckets.begin(), buckets.end(), k) == buckets.end()) buckets.push_back(k);
      }
      std::sort(buckets.begin(), buckets.end());
      break;
    }
  }
  return keys.encode(buckets);
}

std::vector<Instance> reduce_with(std::uint64_t key, const DataGraph& local, const ReduceContext& ctx,
                                  const std::vector<CQEvaluator>& evaluators) {
  auto out = std::vector<Instance>{};
  for (auto i = std::size_t{0}; i < evaluators.size(); ++i) {
    evaluators[i].run(local, ctx.order, [&](std::span<const NodeId> x) {
      auto t = Tuple(x.begin(), x.end());
      if (home_key(t, ctx) == key) out.push_back({std::move(t), static_cast<int>(i)});
    });
  }
  return out;
}

std::vector<CQEvaluator> evaluators_for(const CQSet& cqs) {
  auto out = std::vector<CQEvaluator>{};
  for (const auto& q : cqs.queries) out.emplace_back(q, cqs.sample.node_count());
  return out;
}

}  // namespace

std::vector<Instance> reduce_evaluate(std::uint64_t key, const std::vector<Edge>& edges, const ReduceContext& ctx) {
  auto local = DataGraph::from_edges(edges);
  return reduce_with(key, local, ctx, evaluators_for(*ctx.cqs));
}

RoundResult run_round(const DataGraph& g, const RoundParams& params, const CQSet& cqs) {
  const auto& s = cqs.sample;
  auto p = s.node_count();
  auto triangle_only = params.scheme == Scheme::partition || params.scheme == Scheme::multiway;
  if (triangle_only && (p != 3 || s.edge_count() != 3)) {
    throw DomainError(to_string(params.scheme) + " scheme only handles the triangle sample");
  }
  auto result = RoundResult{};
  auto& report = result.report;
  report.scheme = to_string(params.scheme);
  report.seed = params.seed;
  report.edges = g.edge_count();

  auto ctx = ReduceContext{};
  ctx.cqs = &cqs;
  ctx.b = params.b;
  ctx.seed = params.seed;
  ctx.order = reducer_order(params.scheme, params.b, params.seed);

  auto mapped = MapOutput{};
  switch (params.scheme) {
    case Scheme::partition:
      mapped = map_partition(g, params.b, params.seed);
      report.planned_reducers = binomial(params.b, 3);
      report.b = params.b;
      break;
    case Scheme::multiway:
      mapped = map_multiway_triangle(g, params.b, params.seed);
      report.planned_reducers = params.b * params.b * params.b;
      report.b = params.b;
      break;
    case Scheme::bucket_ordered:
      mapped = map_bucket_ordered(g, params.b, p, params.seed);
      report.planned_reducers = useful_reducer_count(params.b, p);
      report.b = params.b;
      break;
    case Scheme::variable_oriented: {
      auto expr = cost_expression(cqs, CostMode::variable_oriented);
      auto shares = params.shares;
      if (shares.empty()) {
        auto plan = plan_variable_oriented(cqs, params.k);
        report.planned_replication = plan.assignment.cost_per_edge;
        shares = plan.integer_shares;
      } else {
        auto as_double = std::vector<double>(shares.begin(), shares.end());
        report.planned_replication = expr.evaluate(as_double);
      }
      for (auto v = 0; v < p; ++v) {
        if ((expr.dominated >> v) & 1U) shares[v] = 1;
      }
      ctx.shares = shares;
      report.shares = shares;
      mapped = map_variable_oriented(g, cqs, shares, params.seed);
      auto total = std::uint64_t{1};
      for (auto x : shares) total *= x;
      report.planned_reducers = total;
      break;
    }
  }
  ctx.keys = &mapped.keys;
  report.key_value_pairs_emitted = mapped.pairs.size();
  report.raw_pairs = mapped.raw_pairs;
  report.per_edge_replication =
      g.edge_count() ? static_cast<double>(mapped.pairs.size()) / static_cast<double>(g.edge_count()) : 0.0;

  // Shuffle: group by key, deterministic order.
  auto& pairs = mapped.pairs;
  std::sort(pairs.begin(), pairs.end(), [](const KeyedEdge& a, const KeyedEdge& b) {
    return std::tie(a.key, a.u, a.v) < std::tie(b.key, b.u, b.v);
  });
  auto groups = std::vector<std::pair<std::size_t, std::size_t>>{};
  for (auto i = std::size_t{0}; i < pairs.size();) {
    auto j = i;
    while (j < pairs.size() && pairs[j].key == pairs[i].key) ++j;
    groups.emplace_back(i, j);
    i = j;
  }
  report.distinct_reducers_used = groups.size();

  if (p <= 10) {
    auto d = decompose_sample(s);
    report.work_alpha = d.alpha();
    report.work_beta = d.beta(p);
  } else {
    report.work_alpha = 0;
    report.work_beta = p / 2.0;
  }

  auto evaluators = evaluators_for(cqs);
  auto found = std::vector<std::vector<Instance>>(groups.size());
  auto proxies = std::vector<double>(groups.size(), 0.0);
  auto next = std::atomic<std::size_t>{0};
  auto worker = [&]() {
    auto edges = std::vector<Edge>{};
    for (auto idx = next.fetch_add(1); idx < groups.size(); idx = next.fetch_add(1)) {
      auto [begin, end] = groups[idx];
      edges.clear();
      for (auto i = begin; i < end; ++i) edges.push_back({pairs[i].u, pairs[i].v});
      auto local = DataGraph::from_edges(edges);
      proxies[idx] = std::pow(static_cast<double>(local.node_count()), report.work_alpha) *
                     std::pow(static_cast<double>(local.edge_count()), report.work_beta);
      found[idx] = reduce_with(pairs[begin].key, local, ctx, evaluators);
    }
  };
  auto threads = std::max(1U, params.threads);
  if (threads == 1) {
    worker();
  } else {
    auto pool = std::vector<std::thread>{};
    for (auto t = 0U; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (auto idx = std::size_t{0}; idx < groups.size(); ++idx) {
    auto load = static_cast<std::uint64_t>(groups[idx].second - groups[idx].first);
    ++report.reducer_edge_histogram[load];
    report.max_reducer_edges = std::max(report.max_reducer_edges, load);
    report.reducer_work_proxy += proxies[idx];
    for (auto& inst : found[idx]) result.instances.push_back(std::move(inst));
  }
  report.instances_found = result.instances.size();
  return result;
}

}  // namespace sgmr
