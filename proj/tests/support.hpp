#pragma once

#include <set>
#include <vector>

#include "sgmr/cq_eval.hpp"
#include "sgmr/instance.hpp"
#include "sgmr/sample_cq.hpp"
#include "sgmr/serial_enum.hpp"

namespace test_support {

inline std::set<sgmr::Tuple> oracle_set(const sgmr::DataGraph& g, const sgmr::SampleGraph& s) {
  auto out = std::set<sgmr::Tuple>{};
  for (const auto& inst : sgmr::brute_force_oracle(g, s)) out.insert(inst.nodes);
  return out;
}

struct Comparison {
  std::size_t found = 0;
  std::size_t duplicates = 0;
  bool equal = false;
  bool valid = true;  // every tuple is a real instance
};

inline Comparison compare(const sgmr::DataGraph& g, const sgmr::SampleGraph& s,
                          const std::vector<sgmr::Instance>& found, const std::set<sgmr::Tuple>& expected) {
  auto auts = sgmr::automorphisms(s);
  auto c = Comparison{};
  c.found = found.size();
  for (const auto& inst : found) c.valid = c.valid && sgmr::is_instance(g, s, inst.nodes);
  auto set = sgmr::canonical_set(found, auts);
  c.duplicates = found.size() - set.size();
  c.equal = set == expected;
  return c;
}

}  // namespace test_support
