#include "doctest.h"
#include "sgmr/cost_planner.hpp"
#include "sgmr/cycle_cq.hpp"
#include "sgmr/errors.hpp"
#include "sgmr/generators.hpp"
#include "sgmr/mr_sim.hpp"
#include "support.hpp"

using namespace sgmr;

namespace {

RoundResult run(const DataGraph& g, const CQSet& cqs, Scheme scheme, std::uint64_t b, std::uint64_t seed = 1,
                unsigned threads = 1) {
  auto params = RoundParams{};
  params.scheme = scheme;
  params.b = b;
  params.k = static_cast<double>(b);
  params.seed = seed;
  params.threads = threads;
  return run_round(g, params, cqs);
}

}  // namespace

TEST_CASE("scheme names") {
  for (auto s : {Scheme::partition, Scheme::multiway, Scheme::bucket_ordered, Scheme::variable_oriented}) {
    CHECK(parse_scheme(to_string(s)) == s);
  }
  CHECK_THROWS_AS(parse_scheme("hypercube"), DomainError);
}

TEST_CASE("key spaces round trip") {
  auto bo = KeySpace::bucket_ordered(10, 4);
  auto key = std::vector<std::uint64_t>{1, 3, 3, 10};
  CHECK(bo.decode(bo.encode(key)) == key);
  CHECK(bo.render(bo.encode(key)) == "[1,3,3,10]");
  auto part = KeySpace::partition(12);
  auto set = std::vector<std::uint64_t>{2, 5, 12};
  CHECK(part.render(part.encode(set)) == "{2,5,12}");
  auto vo = KeySpace::variable_oriented({1, 4, 3});
  auto slots = std::vector<std::uint64_t>{0, 3, 2};
  CHECK(vo.decode(vo.encode(slots)) == slots);
  CHECK_THROWS_AS(KeySpace::bucket_ordered(1ULL << 20, 4), OverflowError);
}

TEST_CASE("Fig. 2 replication on a random graph") {
  auto g = gen::gnm(3000, 20000, 42);
  auto tri = generate_cqs(builtin_sample("triangle"));

  auto part = run(g, tri, Scheme::partition, 12);
  CHECK(part.report.planned_reducers == 220);
  CHECK(part.report.per_edge_replication == doctest::Approx(13.75).epsilon(0.03));

  auto multi = run(g, tri, Scheme::multiway, 6);
  CHECK(multi.report.planned_reducers == 216);
  CHECK(multi.report.per_edge_replication == 16.0);
  CHECK(multi.report.raw_pairs == 18 * g.edge_count());

  auto bo = run(g, tri, Scheme::bucket_ordered, 10);
  CHECK(bo.report.planned_reducers == 220);
  CHECK(bo.report.per_edge_replication == 10.0);

  auto expected = test_support::oracle_set(g, tri.sample);
  for (const auto* r : {&part, &multi, &bo}) {
    auto cmp = test_support::compare(g, tri.sample, r->instances, expected);
    CHECK(cmp.valid);
    CHECK(cmp.duplicates == 0);
    CHECK(cmp.equal);
  }
}

TEST_CASE("K4 triangles") {
  auto g = gen::complete(4);
  auto tri = generate_cqs(builtin_sample("triangle"));
  for (auto scheme : {Scheme::multiway, Scheme::bucket_ordered, Scheme::variable_oriented}) {
    for (auto b : {1ULL, 2ULL, 3ULL}) CHECK(run(g, tri, scheme, b).instances.size() == 4);
  }
  CHECK(run(g, tri, Scheme::partition, 3).instances.size() == 4);
  CHECK_THROWS_AS(run(g, tri, Scheme::partition, 2), DomainError);
}

TEST_CASE("single bucket means one reducer") {
  auto g = gen::gnp(30, 0.3, 3);
  auto tri = generate_cqs(builtin_sample("triangle"));
  for (auto scheme : {Scheme::multiway, Scheme::bucket_ordered}) {
    auto r = run(g, tri, scheme, 1);
    CHECK(r.report.planned_reducers == 1);
    CHECK(r.report.distinct_reducers_used == 1);
    CHECK(r.report.per_edge_replication == 1.0);
  }
}

TEST_CASE("pentagons on the Petersen graph") {
  auto g = gen::petersen();
  auto c5 = cycle_cqs(5);
  for (auto b : {1ULL, 2ULL, 4ULL}) {
    CHECK(run(g, c5, Scheme::bucket_ordered, b).instances.size() == 12);
    CHECK(run(g, c5, Scheme::variable_oriented, b * 8).instances.size() == 12);
  }
  CHECK_THROWS_AS(run(g, c5, Scheme::partition, 4), DomainError);
}

TEST_CASE("variable-oriented pair count matches the cost expression") {
  auto g = gen::gnp(60, 0.2, 9);
  for (auto spec : {"square", "lollipop", "triangle"}) {
    auto cqs = generate_cqs(builtin_sample(spec));
    auto expr = cost_expression(cqs, CostMode::variable_oriented);
    auto params = RoundParams{};
    params.scheme = Scheme::variable_oriented;
    params.seed = 4;
    params.shares = std::vector<std::uint64_t>(cqs.sample.node_count(), 3);
    for (auto v = 0; v < cqs.sample.node_count(); ++v) {
      if ((expr.dominated >> v) & 1U) params.shares[v] = 1;
    }
    auto r = run_round(g, params, cqs);
    auto per_edge = exact_replication(expr, params.shares);
    CHECK(r.report.key_value_pairs_emitted == per_edge * g.edge_count());
    auto cmp = test_support::compare(g, cqs.sample, r.instances, test_support::oracle_set(g, cqs.sample));
    CHECK(cmp.equal);
    CHECK(cmp.duplicates == 0);
  }
}

TEST_CASE("threads do not change the output") {
  auto g = gen::gnp(40, 0.3, 12);
  auto sq = generate_cqs(builtin_sample("square"));
  auto one = run(g, sq, Scheme::bucket_ordered, 4, 7, 1);
  auto four = run(g, sq, Scheme::bucket_ordered, 4, 7, 4);
  REQUIRE(one.instances.size() == four.instances.size());
  for (auto i = std::size_t{0}; i < one.instances.size(); ++i) {
    CHECK(one.instances[i].nodes == four.instances[i].nodes);
  }
  CHECK(to_json(one.report).dump() == to_json(four.report).dump());
}

TEST_CASE("reducer histogram accounts for every pair") {
  auto g = gen::gnp(50, 0.2, 5);
  auto r = run(g, generate_cqs(builtin_sample("triangle")), Scheme::bucket_ordered, 5);
  auto total = std::uint64_t{0};
  auto reducers = std::uint64_t{0};
  for (auto [load, count] : r.report.reducer_edge_histogram) {
    total += load * count;
    reducers += count;
  }
  CHECK(total == r.report.key_value_pairs_emitted);
  CHECK(reducers == r.report.distinct_reducers_used);
  CHECK(r.report.distinct_reducers_used <= r.report.planned_reducers);
  CHECK(r.report.work_beta == doctest::Approx(1.5));
}

TEST_CASE("empty graph") {
  auto g = DataGraph::from_edges({});
  auto r = run(g, generate_cqs(builtin_sample("triangle")), Scheme::bucket_ordered, 3);
  CHECK(r.instances.empty());
  CHECK(r.report.per_edge_replication == 0.0);
}
