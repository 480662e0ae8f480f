#pragma once

#include <string>
#include <vector>

#include "strongsec/esets.hpp"
#include "strongsec/frame.hpp"
#include "strongsec/process.hpp"

namespace strongsec {

// Violations reuse the frame report shape: `handle` holds the offending message or test.
struct ConditionReport {
  std::string definition;  // "def3" or "def4"
  int conditions = 0;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
  bool pass() const { return violations.empty(); }
  bool fails(int condition) const;
  std::vector<int> failed() const;
};

// Condition 0 is the precondition: channels are names other than s, and s is restricted.
ConditionReport check_well_formed_process(const Process& p, const std::string& s);

struct ESetReport {
  MessageSets messages;
  std::vector<std::vector<MarkedCipher>> generations;
  std::vector<TermSet> openers;              // per generation
  std::vector<std::vector<Term>> max_openers;  // one opener per cipher
  std::vector<Term> Do;
  std::vector<Term> Mts;
  std::vector<MarkedCipher> all() const { return flatten(generations); }
};

ESetReport compute_esets(const Process& p, const std::string& s);

ConditionReport check_no_test_over_secret(const Process& p, const std::string& s,
                                          const ESetReport& esets);
ConditionReport check_no_test_over_secret(const Process& p, const std::string& s);

}  // namespace strongsec
