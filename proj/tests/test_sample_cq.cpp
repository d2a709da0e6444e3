#include "doctest.h"
#include "sgmr/cq_eval.hpp"
#include "sgmr/errors.hpp"
#include "sgmr/generators.hpp"
#include "sgmr/sample_cq.hpp"
#include "support.hpp"

using namespace sgmr;

namespace {

Ordering parse_order(const SampleGraph& s, std::initializer_list<const char*> names) {
  auto o = Ordering{};
  for (auto n : names) o.push_back(s.var(n));
  return o;
}

}  // namespace

TEST_CASE("automorphisms") {
  CHECK(automorphisms(builtin_sample("square")).size() == 8);
  auto lolli = builtin_sample("lollipop");
  auto auts = automorphisms(lolli);
  REQUIRE(auts.size() == 2);
  CHECK(auts[1] == Permutation{0, 1, 3, 2});  // swap Y and Z
  CHECK(automorphisms(builtin_sample("triangle")).size() == 6);
  CHECK(automorphisms(builtin_sample("cycle:7")).size() == 14);
  CHECK_THROWS_AS(automorphisms(builtin_sample("path:11")), SizeLimitError);
}

TEST_CASE("automorphism groups are closed under composition and inverse") {
  for (auto spec : {"square", "lollipop", "cycle:6", "star:4", "clique:4", "path:5"}) {
    auto auts = automorphisms(builtin_sample(spec));
    auto contains = [&](const Permutation& x) { return std::find(auts.begin(), auts.end(), x) != auts.end(); };
    for (const auto& a : auts) {
      auto inv = Permutation(a.size());
      for (auto v = std::size_t{0}; v < a.size(); ++v) inv[a[v]] = static_cast<Var>(v);
      CHECK(contains(inv));
      for (const auto& b : auts) {
        auto comp = Permutation(a.size());
        for (auto v = std::size_t{0}; v < a.size(); ++v) comp[v] = a[b[v]];
        CHECK(contains(comp));
      }
    }
  }
}

TEST_CASE("cq_from_ordering") {
  auto sq = builtin_sample("square");
  auto q = cq_from_ordering(sq, parse_order(sq, {"W", "X", "Y", "Z"}));
  CHECK(render(q, sq) == "E(W,X) & E(X,Y) & E(Y,Z) & E(W,Z) & W<X & X<Y & Y<Z");

  auto edge = builtin_sample("edge");
  CHECK(render(cq_from_ordering(edge, {0, 1}), edge) == "E(A,B) & A<B");

  auto lolli = builtin_sample("lollipop");
  auto q2 = cq_from_ordering(lolli, parse_order(lolli, {"W", "Y", "X", "Z"}));
  CHECK(render(q2, lolli) == "E(W,X) & E(Y,X) & E(X,Z) & E(Y,Z) & W<Y & Y<X & X<Z");

  CHECK_THROWS_AS(cq_from_ordering(sq, {0, 1, 1, 2}), DomainError);
}

TEST_CASE("coset representatives") {
  auto sq = builtin_sample("square");
  auto reps = coset_representatives(sq);
  REQUIRE(reps.size() == 3);
  CHECK(render_ordering(reps[0], sq) == "W<X<Y<Z");
  CHECK(render_ordering(reps[1], sq) == "W<X<Z<Y");
  CHECK(render_ordering(reps[2], sq) == "W<Y<X<Z");
  CHECK(coset_representatives(builtin_sample("lollipop")).size() == 12);
  CHECK(coset_representatives(builtin_sample("triangle")).size() == 1);
}

TEST_CASE("|reps| * |Aut| = p!") {
  for (auto spec : {"triangle", "square", "lollipop", "cycle:5", "cycle:6", "star:4", "clique:4", "path:4", "edge"}) {
    auto s = builtin_sample(spec);
    auto factorial = 1;
    for (auto i = 2; i <= s.node_count(); ++i) factorial *= i;
    CHECK(coset_representatives(s).size() * automorphisms(s).size() == static_cast<std::size_t>(factorial));
  }
}

TEST_CASE("lollipop grouping") {
  auto lolli = builtin_sample("lollipop");
  auto set = generate_cqs(lolli);
  REQUIRE(set.queries.size() == 6);
  auto texts = std::vector<std::string>{};
  for (const auto& q : set.queries) texts.push_back(render(q, lolli));
  auto has = [&](const std::string& t) { return std::find(texts.begin(), texts.end(), t) != texts.end(); };
  CHECK(has("E(W,X) & E(Y,X) & E(X,Z) & E(Y,Z) & W≠Y & Y<X & X<Z"));
  CHECK(has("E(X,W) & E(Y,X) & E(X,Z) & E(Y,Z) & Y<X & X<W & W≠Z"));
  CHECK(has("E(W,X) & E(X,Y) & E(X,Z) & E(Y,Z) & W<X & X<Y & Y<Z"));
}

TEST_CASE("square and edge CQ sets") {
  auto sq = generate_cqs(builtin_sample("square"));
  CHECK(sq.queries.size() == 3);
  auto edge = generate_cqs(builtin_sample("edge"));
  REQUIRE(edge.queries.size() == 1);
  CHECK(render(edge.queries[0], edge.sample) == "E(A,B) & A<B");
}

TEST_CASE("C5 general method gives 7 CQs") { CHECK(generate_cqs(builtin_sample("cycle:5")).queries.size() == 7); }

TEST_CASE("every disjunct is satisfiable and merges cover exactly their orderings") {
  for (auto spec : {"square", "lollipop", "cycle:5", "cycle:6", "star:4", "clique:4", "path:4"}) {
    auto set = generate_cqs(builtin_sample(spec));
    auto p = set.sample.node_count();
    for (auto i = std::size_t{0}; i < set.queries.size(); ++i) {
      CHECK(satisfiable(set.queries[i].condition, p));
      CHECK(merged_condition(set.sample, set.queries[i].subgoals, set.provenance[i]).disjuncts.size() >= 1);
    }
    for (auto i = std::size_t{0}; i < set.queries.size(); ++i) {
      for (auto j = i + 1; j < set.queries.size(); ++j) CHECK(set.queries[i].subgoals != set.queries[j].subgoals);
    }
  }
}

TEST_CASE("exactly once against the oracle") {
  for (auto spec : {"triangle", "square", "lollipop", "cycle:5", "star:4", "clique:4", "path:4"}) {
    auto s = builtin_sample(spec);
    auto set = generate_cqs(s);
    for (auto seed : {1, 2, 3}) {
      auto g = gen::gnp(14, 0.4, seed);
      auto expected = test_support::oracle_set(g, s);
      for (auto kind : {OrderKind::id, OrderKind::degree_then_id, OrderKind::bucket_then_id}) {
        auto found = evaluate_cqs(g, set, make_order(g, kind, 3, seed));
        auto cmp = test_support::compare(g, s, found, expected);
        CAPTURE(spec);
        CHECK(cmp.valid);
        CHECK(cmp.duplicates == 0);
        CHECK(cmp.equal);
      }
    }
  }
}

TEST_CASE("JSON rendering") {
  auto set = generate_cqs(builtin_sample("square"));
  auto j = to_json(set);
  CHECK(j["count"] == 3);
  CHECK(j["queries"][0]["subgoals"][0] == nlohmann::json::array({"W", "X"}));
  CHECK(j["queries"][0]["condition"][0][0] == nlohmann::json::array({"<", "W", "X"}));
}
