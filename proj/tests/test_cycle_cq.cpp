#include "doctest.h"
#include "sgmr/cycle_cq.hpp"
#include "sgmr/errors.hpp"
#include "sgmr/generators.hpp"
#include "support.hpp"

using namespace sgmr;

TEST_CASE("run sequences of 5") {
  auto all = run_sequences(5);
  CHECK(all.size() == 8);
  CHECK(all.front().runs == std::vector<int>{1, 4});
  CHECK(all.back().runs == std::vector<int>{2, 1, 1, 1});
  auto canon = canonical_run_sequences(5);
  REQUIRE(canon.size() == 3);
  auto digits = std::vector<std::string>{};
  for (const auto& r : canon) digits.push_back(r.digits());
  CHECK(digits == std::vector<std::string>{"1112", "14", "23"});
}

TEST_CASE("class counts") {
  CHECK(canonical_run_sequences(3).size() == 1);
  CHECK(canonical_run_sequences(4).size() == 3);
  CHECK(canonical_run_sequences(5).size() == 3);
  CHECK(canonical_run_sequences(6).size() == 8);
  CHECK(canonical_run_sequences(7).size() == 9);
  CHECK(canonical_run_sequences(8).size() == 21);
  CHECK_THROWS_AS(run_sequences(2), DomainError);
}

TEST_CASE("p = 7 classes") {
  auto got = std::vector<std::string>{};
  for (const auto& r : canonical_run_sequences(7)) got.push_back(r.digits());
  CHECK(got == std::vector<std::string>{"111112", "1114", "1123", "1213", "1222", "1231", "16", "25", "34"});
}

TEST_CASE("equivalence") {
  CHECK(equivalent(RunSequence{{1, 4}}, RunSequence{{4, 1}}));
  CHECK(equivalent(RunSequence{{1, 1, 1, 2}}, RunSequence{{1, 2, 1, 1}}));
  CHECK(equivalent(RunSequence{{1, 1, 1, 2}}, RunSequence{{2, 1, 1, 1}}));
  CHECK_FALSE(equivalent(RunSequence{{1, 4}}, RunSequence{{2, 3}}));
}

TEST_CASE("pattern and digits") {
  auto r = RunSequence{{1, 4}};
  CHECK(r.pattern() == "udddd");
  CHECK(r.length() == 5);
  CHECK(RunSequence{{2, 10}}.digits() == "2,10");
}

TEST_CASE("udddd query") {
  auto s = builtin_sample("cycle:5");
  auto q = cq_from_run_sequence(RunSequence{{1, 4}});
  CHECK(render(q, s) == "E(X1,X2) & E(X3,X2) & E(X4,X3) & E(X5,X4) & E(X1,X5) & X1<X2 & X3<X2 & X4<X3 & X5<X4 & X1<X5");
}

TEST_CASE("symmetric sequences get tie-breaks") {
  auto s4 = builtin_sample("cycle:4");
  auto q = cq_from_run_sequence(RunSequence{{1, 1, 1, 1}});
  auto text = render(q, s4);
  CHECK(text.find("X1<X3") != std::string::npos);

  auto s6 = builtin_sample("cycle:6");
  auto q33 = cq_from_run_sequence(RunSequence{{3, 3}});
  CHECK(render(q33, s6).find("X2<X6") != std::string::npos);

  auto q6 = cq_from_run_sequence(RunSequence{{1, 1, 1, 1, 1, 1}});
  auto t6 = render(q6, s6);
  CHECK(t6.find("X1<X3") != std::string::npos);
  CHECK(t6.find("X1<X5") != std::string::npos);

  auto q1122 = cq_from_run_sequence(RunSequence{{1, 1, 2, 2}});
  CHECK(render(q1122, s6).find("X1<X3") != std::string::npos);
}

TEST_CASE("cycle CQs are exactly once") {
  for (auto p : {3, 4, 5, 6, 7}) {
    auto set = cycle_cqs(p);
    auto s = set.sample;
    for (auto seed : {5, 6}) {
      auto g = gen::gnp(13, 0.45, seed);
      auto expected = test_support::oracle_set(g, s);
      for (auto kind : {OrderKind::id, OrderKind::degree_then_id, OrderKind::bucket_then_id}) {
        auto found = evaluate_cqs(g, set, make_order(g, kind, 4, seed));
        auto cmp = test_support::compare(g, s, found, expected);
        CAPTURE(p);
        CHECK(cmp.valid);
        CHECK(cmp.duplicates == 0);
        CHECK(cmp.equal);
      }
    }
  }
}

TEST_CASE("labels are digit strings") {
  auto set = cycle_cqs(5);
  CHECK(set.labels == std::vector<std::string>{"1112", "14", "23"});
}
