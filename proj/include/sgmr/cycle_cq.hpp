#pragma once

#include <string>
#include <vector>

#include "sgmr/cq.hpp"

namespace sgmr {

// Alternating run lengths of up and down edges around a cycle, starting with
// an up run at X1.
struct RunSequence {
  std::vector<int> runs;

  int length() const;
  // 'u'/'d' per edge; edge i joins X_i and X_{i+1 mod p}.
  std::string pattern() const;
  // "1122"; runs of 10 or more are comma separated.
  std::string digits() const;
  friend bool operator==(const RunSequence&, const RunSequence&) = default;
};

// All even-length compositions of p, by length then lexicographically.
std::vector<RunSequence> run_sequences(int p);
// Rotating the run list by an even amount, optionally reversed.
bool equivalent(const RunSequence& a, const RunSequence& b);
// One per class, the lexicographically smallest run list; longer lists first.
std::vector<RunSequence> canonical_run_sequences(int p);

ConjunctiveQuery cq_from_run_sequence(const RunSequence& seq);
CQSet cycle_cqs(int p);

}  // namespace sgmr
