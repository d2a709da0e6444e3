#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "sgmr/errors.hpp"
#include "sgmr/generators.hpp"
#include "sgmr/graph.hpp"

using namespace sgmr;

TEST_CASE("load_edge_list: triangle") {
  auto g = load_edge_list_text("1 2\n2 3\n1 3");
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 3);
}

TEST_CASE("load_edge_list: reversed duplicate collapses and is counted") {
  auto stats = LoadStats{};
  auto g = load_edge_list_text("1 2\n2 1", &stats);
  CHECK(g.edge_count() == 1);
  CHECK(stats.duplicate_edges == 1);
}

TEST_CASE("load_edge_list: 4-cycle degrees") {
  auto g = load_edge_list_text("1 2\n2 3\n3 4\n4 1");
  CHECK(g.edge_count() == 4);
  for (auto u : g.nodes()) CHECK(g.degree(u) == 2);
}

TEST_CASE("load_edge_list: comments, blank lines and large ids") {
  auto g = load_edge_list_text("# header\n\n  18446744073709551615 7\n   # indented comment\n7 9\n");
  CHECK(g.edge_count() == 2);
  CHECK(g.has_node(18446744073709551615ULL));
  CHECK(g.neighbors(7).size() == 2);
}

TEST_CASE("load_edge_list: errors") {
  SUBCASE("malformed line carries its number") {
    try {
      load_edge_list_text("1 2\n# c\n3 x\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("three tokens") { CHECK_THROWS_AS(load_edge_list_text("1 2 3\n"), ParseError); }
  SUBCASE("negative id") { CHECK_THROWS_AS(load_edge_list_text("-1 2\n"), ParseError); }
  SUBCASE("self-loop names the node") {
    try {
      load_edge_list_text("1 2\n5 5\n");
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string{e.what()}.find("5") != std::string::npos);
    }
  }
}

TEST_CASE("edge_exists") {
  auto tri = load_edge_list_text("1 2\n2 3\n1 3");
  CHECK(tri.edge_exists(1, 2));
  CHECK(tri.edge_exists(2, 1));
  auto sq = load_edge_list_text("1 2\n2 3\n3 4\n4 1");
  CHECK_FALSE(sq.edge_exists(1, 3));
  CHECK_FALSE(sq.edge_exists(1, 99));
  CHECK_THROWS_AS(sq.edge_exists(2, 2), ContractViolation);
}

TEST_CASE("edge_exists agrees with a scan of the edge list") {
  auto g = gen::gnp(60, 0.2, 11);
  auto rng = std::mt19937_64{5};
  auto pick = std::uniform_int_distribution<NodeId>{0, 59};
  for (auto i = 0; i < 2000; ++i) {
    auto u = pick(rng);
    auto v = pick(rng);
    if (u == v) continue;
    auto e = Edge{std::min(u, v), std::max(u, v)};
    auto scanned = std::find(g.edges().begin(), g.edges().end(), e) != g.edges().end();
    CHECK(g.edge_exists(u, v) == scanned);
  }
}

TEST_CASE("degree sum is 2m") {
  for (auto seed : {1, 2, 3}) {
    auto g = gen::gnp(80, 0.1, seed);
    auto sum = std::size_t{0};
    for (auto u : g.nodes()) sum += g.degree(u);
    CHECK(sum == 2 * g.edge_count());
  }
}

TEST_CASE("bucket_hash") {
  CHECK(bucket_hash(12345, 1, 99) == 1);
  CHECK(bucket_hash(777, 13, 5) == bucket_hash(777, 13, 5));
  // bit-exact definition
  CHECK(bucket_hash(3, 10, 0) == (3 * 0x9E3779B97F4A7C15ULL) % 10 + 1);
  auto counts = std::vector<int>(11, 0);
  for (NodeId u = 0; u < 10000; ++u) {
    auto h = bucket_hash(u, 10, 42);
    REQUIRE(h >= 1);
    REQUIRE(h <= 10);
    ++counts[h];
  }
  for (auto b = 1; b <= 10; ++b) {
    CHECK(counts[b] >= 900);
    CHECK(counts[b] <= 1100);
  }
}

TEST_CASE("make_order") {
  auto path = load_edge_list_text("1 2\n2 3");
  SUBCASE("degree-then-id on a path") {
    auto order = make_order(path, OrderKind::degree_then_id);
    auto nodes = path.nodes();
    std::sort(nodes.begin(), nodes.end(), order);
    CHECK(nodes == std::vector<NodeId>{1, 3, 2});
  }
  SUBCASE("one bucket is id order") {
    auto order = make_order(path, OrderKind::bucket_then_id, 1, 77);
    CHECK(order.less(1, 2));
    CHECK(order.less(2, 3));
  }
  SUBCASE("bucket 1 precedes bucket 2") {
    auto order = make_order(path, OrderKind::bucket_then_id, 2, 9);
    for (NodeId a = 0; a < 50; ++a) {
      for (NodeId b = 0; b < 50; ++b) {
        if (bucket_hash(a, 2, 9) == 1 && bucket_hash(b, 2, 9) == 2) CHECK(order.less(a, b));
      }
    }
  }
}

TEST_CASE("orders are strict total orders") {
  auto g = gen::gnp(40, 0.2, 3);
  for (auto kind : {OrderKind::id, OrderKind::degree_then_id, OrderKind::bucket_then_id}) {
    auto order = make_order(g, kind, 4, 1);
    auto rng = std::mt19937_64{17};
    auto pick = std::uniform_int_distribution<NodeId>{0, 39};
    for (auto i = 0; i < 500; ++i) {
      auto a = pick(rng), b = pick(rng), c = pick(rng);
      if (a != b) CHECK(order.less(a, b) != order.less(b, a));
      CHECK_FALSE(order.less(a, a));
      if (order.less(a, b) && order.less(b, c)) CHECK(order.less(a, c));
    }
  }
}

TEST_CASE("sample graphs") {
  auto sq = builtin_sample("square");
  CHECK(sq.node_count() == 4);
  CHECK(sq.edge_count() == 4);
  CHECK(sq.is_regular());
  CHECK(builtin_sample("cycle:6").edge_count() == 6);
  CHECK(builtin_sample("star:4").degree(0) == 3);
  CHECK(builtin_sample("clique:5").edge_count() == 10);
  CHECK_THROWS_AS(builtin_sample("cycle:2"), DomainError);
  CHECK_THROWS_AS(builtin_sample("hexagon"), DomainError);

  auto in = std::istringstream{"# lollipop with a spare node\np 5\nW X\nX Y\nX Z\nY Z\n"};
  auto s = load_sample(in);
  CHECK(s.node_count() == 5);
  CHECK(s.edge_count() == 4);
  CHECK_FALSE(s.is_connected());
  CHECK(s.components().size() == 2);
  CHECK(s.induced(0b01110).edge_count() == 3);
}
