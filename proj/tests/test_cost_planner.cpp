#include <cmath>
#include <random>

#include "doctest.h"
#include "sgmr/cost_planner.hpp"
#include "sgmr/cycle_cq.hpp"
#include "sgmr/errors.hpp"
#include "sgmr/sample_cq.hpp"

using namespace sgmr;

namespace {

ConjunctiveQuery ordered(const SampleGraph& s, std::initializer_list<const char*> names) {
  auto o = Ordering{};
  for (auto n : names) o.push_back(s.var(n));
  return cq_from_ordering(s, o);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<std::pair<Var, Var>> pairs(std::initializer_list<std::pair<int, int>> list) {
  auto out = std::vector<std::pair<Var, Var>>{};
  for (auto [a, b] : list) out.emplace_back(a, b);
  return out;
}

}  // namespace

TEST_CASE("lollipop single CQ at k = 750") {
  auto s = builtin_sample("lollipop");
  auto q = ordered(s, {"W", "X", "Y", "Z"});
  CHECK(dominated_variables(q, 4) == 1);  // W
  auto expr = cost_expression(q, s);
  auto a = optimize_shares(expr, 750);
  REQUIRE(a.shares.size() == 4);
  CHECK(a.shares[0] == doctest::Approx(1).epsilon(1e-9));
  CHECK(std::abs(a.shares[1] - 30) < 1e-4);
  CHECK(std::abs(a.shares[2] - 5) < 1e-4);
  CHECK(std::abs(a.shares[3] - 5) < 1e-4);
  CHECK(std::abs(a.cost_per_edge - 65) < 1e-4);
  CHECK(a.kkt_residual < 1e-8);
}

TEST_CASE("square variable-oriented") {
  auto set = generate_cqs(builtin_sample("square"));
  auto expr = cost_expression(set, CostMode::variable_oriented);
  CHECK(expr.dominated == 0);
  CHECK(expr.terms.size() == 4);
  for (auto k : {64.0, 1000.0, 1e6}) {
    auto a = optimize_shares(expr, k);
    auto w = a.shares[0], x = a.shares[1], y = a.shares[2], z = a.shares[3];
    CHECK(std::abs(x - z) < 1e-4);
    CHECK(std::abs(y - 2 * w) < 1e-4);
    CHECK(rel(a.cost_per_edge, 4 * std::sqrt(2 * k)) < 1e-4);
    CHECK(rel(w * x * y * z, k) < 1e-9);
  }
  CHECK_THROWS_AS(cost_expression(set, CostMode::single), StructuralError);
}

TEST_CASE("regular samples take k^(1/p)") {
  for (auto spec : {"triangle", "cycle:5", "clique:4", "cycle:6"}) {
    auto s = builtin_sample(spec);
    auto q = cq_from_ordering(s, coset_representatives(s).front());
    for (auto k : {27.0, 216.0, 5000.0}) {
      auto a = optimize_shares(cost_expression(q, s), k);
      auto r = regular_shares(s.node_count(), k);
      // a single ordered CQ of a regular sample may still have dominated
      // variables; the all-bidirectional plan is the regular one
      auto all = std::vector<std::pair<Var, Var>>(s.edges().begin(), s.edges().end());
      auto b = optimize_shares(cost_expression(s, all), k);
      for (auto i = 0; i < s.node_count(); ++i) {
        CHECK(std::abs(b.shares[i] - std::pow(k, 1.0 / s.node_count())) < 1e-6);
        CHECK(std::abs(r.shares[i] - std::pow(k, 1.0 / s.node_count())) < 1e-12);
      }
      CHECK(a.cost_per_edge <= b.cost_per_edge * (1 + 1e-9));
    }
  }
}

TEST_CASE("triangle at k = 216") {
  auto s = builtin_sample("triangle");
  auto a = optimize_shares(cost_expression(generate_cqs(s).queries[0], s), 216);
  for (auto x : a.shares) CHECK(std::abs(x - 6) < 1e-6);
  CHECK(std::abs(a.cost_per_edge - 18) < 1e-6);
  CHECK(round_shares(a) == std::vector<std::uint64_t>{6, 6, 6});
}

TEST_CASE("render and evaluate") {
  auto s = builtin_sample("lollipop");
  auto expr = cost_expression(ordered(s, {"W", "X", "Y", "Z"}), s);
  CHECK(expr.evaluate({1, 30, 5, 5}) == doctest::Approx(65));
  CHECK_FALSE(expr.render().empty());
  auto sq = cost_expression(generate_cqs(builtin_sample("square")), CostMode::variable_oriented);
  CHECK(sq.render() == "yz + 2wz + 2wx + xy");
}

TEST_CASE("edge sample is trivial") {
  auto s = builtin_sample("edge");
  auto a = optimize_shares(cost_expression(generate_cqs(s), CostMode::single), 1);
  CHECK(a.cost_per_edge == doctest::Approx(1));
}

TEST_CASE("k must be at least one") {
  auto s = builtin_sample("triangle");
  CHECK_THROWS_AS(optimize_shares(cost_expression(generate_cqs(s).queries[0], s), 0.5), DomainError);
}

TEST_CASE("binomials and reducer counts") {
  CHECK(binomial(12, 3) == 220);
  CHECK(binomial(11, 2) == 55);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(3, 5) == 0);
  CHECK_THROWS_AS(binomial(200, 100), OverflowError);
  CHECK(binomial_symbol(200, 100) == "C(200,100)");
  for (auto b = std::uint64_t{1}; b <= 100; ++b) {
    CHECK(useful_reducer_count(b, 3) == b * (b + 1) * (b + 2) / 6);
    CHECK(bucket_oriented_replication(b, 3) == b);
  }
  CHECK(bucket_oriented_replication(10, 4) == 55);
  CHECK(generalized_partition_replication(12, 3) == doctest::Approx(13.75));
  CHECK(generalized_partition_replication(3, 3) == doctest::Approx(1.0));
  CHECK(generalized_partition_replication(5, 5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(generalized_partition_replication(2, 3), DomainError);
}

TEST_CASE("C5 join bound") {
  // R1, R3, R5 with one tuple each pin all five attributes
  for (auto n : {1ULL, 10ULL, 100ULL}) CHECK(c5_join_bound({1, n, 1, n, 1}) == doctest::Approx(1));
  CHECK(c5_join_bound({1, 1, 1, 1, 1}) == doctest::Approx(1));
  // one violated rotation: n1 n5 n3 = 8 < n2 n4 = 100
  CHECK(c5_join_bound({2, 10, 2, 10, 2}) == doctest::Approx(8));
  CHECK(c5_join_bound({100, 100, 100, 100, 100}) == doctest::Approx(1e5));
  auto rng = std::mt19937_64{7};
  for (auto t = 0; t < 50; ++t) {
    auto n = std::array<std::uint64_t, 5>{};
    for (auto& x : n) x = 1 + rng() % 1000;
    auto base = c5_join_bound(n);
    for (auto r = 0; r < 5; ++r) {
      auto rot = std::array<std::uint64_t, 5>{};
      auto rev = std::array<std::uint64_t, 5>{};
      for (auto i = 0; i < 5; ++i) {
        rot[i] = n[(i + r) % 5];
        rev[i] = n[(5 + r - i) % 5];
      }
      CHECK(rel(c5_join_bound(rot), base) < 1e-12);
      CHECK(rel(c5_join_bound(rev), base) < 1e-12);
    }
  }
  CHECK_THROWS_AS(c5_join_bound({0, 1, 1, 1, 1}), DomainError);
}

TEST_CASE("convertibility") {
  CHECK(convertibility_check(0, 1.5, 3).convertible);
  CHECK(convertibility_check(0, 2.5, 5).convertible);
  CHECK(convertibility_check(1, 1.5, 4).convertible);
  auto c = convertibility_check(0, 1, 4);
  CHECK_FALSE(c.convertible);
  CHECK(c.excess == doctest::Approx(2));
}

TEST_CASE("combined never worse than split") {
  auto rng = std::mt19937_64{11};
  for (auto spec : {"square", "lollipop"}) {
    auto set = generate_cqs(builtin_sample(spec));
    for (auto trial = 0; trial < 5; ++trial) {
      auto left = std::vector<std::size_t>{};
      auto right = std::vector<std::size_t>{};
      for (auto i = std::size_t{0}; i < set.queries.size(); ++i) (rng() % 2 ? left : right).push_back(i);
      if (left.empty()) {
        left.push_back(right.back());
        right.pop_back();
      }
      auto splits = std::vector<std::vector<std::size_t>>{left};
      if (!right.empty()) splits.push_back(right);
      auto report = combined_vs_split_check(set, splits, 1000);
      CHECK(report.holds);
      CHECK(report.combined <= report.split_total * (1 + 1e-9));
    }
  }
  CHECK_THROWS_AS(combined_vs_split_check(generate_cqs(builtin_sample("square")), {{0}, {0, 1, 2}}, 1000),
                  DomainError);
}

TEST_CASE("eq3 closed form matches the optimizer") {
  auto k = 4096.0;
  // C4: S1 = {X1}, S2 = {X2, X4}, S3 = {X3}
  auto c4 = builtin_sample("cycle:4");
  auto a = optimize_shares(cost_expression(c4, pairs({{0, 1}, {0, 3}})), k);
  CHECK(rel(a.cost_per_edge, replication_special_cases(SpecialCase::eq3, 4, 2, 1, 2, 1, k)) < 1e-4);
  // C6 with S3 empty: every edge bidirectional
  auto c6 = builtin_sample("cycle:6");
  auto b = optimize_shares(cost_expression(c6, c6.edges()), k);
  CHECK(rel(b.cost_per_edge, replication_special_cases(SpecialCase::eq3, 6, 2, 3, 3, 0, k)) < 1e-4);
  // C6 with S1 = {X1, X3}, S3 = {X5}
  auto c = optimize_shares(cost_expression(c6, pairs({{0, 1}, {1, 2}, {2, 3}, {0, 5}})), k);
  CHECK(rel(c.cost_per_edge, replication_special_cases(SpecialCase::eq3, 6, 2, 2, 3, 1, k)) < 1e-4);
  CHECK_THROWS_AS(replication_special_cases(SpecialCase::eq3, 6, 2, 2, 2, 2, k), StructuralError);
}

TEST_CASE("eq2 closed form matches the optimizer") {
  auto k = 1e6;
  for (auto p : {6, 12}) {
    auto s = builtin_sample("cycle:" + std::to_string(p));
    // labels repeat S1 S1 S2 S3 S3 S2 around the cycle
    auto label = [](int i) { return std::array<int, 6>{1, 1, 2, 3, 3, 2}[i % 6]; };
    auto bidi = std::vector<std::pair<Var, Var>>{};
    for (auto [u, v] : s.edges()) {
      if (label(u) == 1 || label(v) == 1) bidi.emplace_back(u, v);
    }
    auto a = optimize_shares(cost_expression(s, bidi), k);
    CHECK(rel(a.cost_per_edge, replication_special_cases(SpecialCase::eq2, p, 2, p / 3, p / 3, p / 3, k)) < 1e-4);
  }
  CHECK_THROWS_AS(replication_special_cases(SpecialCase::eq2, 5, 3, 2, 2, 1, k), StructuralError);
}

TEST_CASE("mixed shares agree with the optimizer") {
  auto set = cycle_cqs(6);
  auto bidi = bidirectional_edges(set);
  CHECK_FALSE(bidi.empty());
  auto expr = cost_expression(set.sample, bidi);
  auto numeric = optimize_shares(expr, 500000);
  auto mixed = regular_mixed_shares(set.sample, bidi, 500000);
  CHECK(rel(mixed.assignment.cost_per_edge, numeric.cost_per_edge) < 1e-4);
  for (auto v : mixed.s1) {
    for (auto w : mixed.s2) {
      CHECK(mixed.assignment.shares[v] == doctest::Approx(2 * mixed.assignment.shares[w]));
    }
  }
}

TEST_CASE("exact replication on integer shares") {
  auto s = builtin_sample("lollipop");
  auto expr = cost_expression(ordered(s, {"W", "X", "Y", "Z"}), s);
  CHECK(exact_replication(expr, {1, 30, 5, 5}) == 65);
}

TEST_CASE("share JSON") {
  auto a = regular_shares(3, 216);
  auto j = to_json(a, {"X", "Y", "Z"});
  CHECK(j["shares"]["X"].get<double>() == doctest::Approx(6));
}
