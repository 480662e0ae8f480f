#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strongsec/checker.hpp"
#include "strongsec/explore.hpp"

namespace strongsec {

enum class Verdict { StrongSecrecySupported, TheoremInapplicable, SyntacticAttackFound };

const char* to_string(Verdict v);

struct ProcessReport {
  std::string secret;
  ConditionReport def3;
  std::optional<ConditionReport> def4;  // absent when def3 fails
  std::optional<ESetReport> esets;
  bool applicable = false;
  std::optional<SecrecyEvidence> evidence;  // absent when exploration was skipped
  Verdict verdict = Verdict::TheoremInapplicable;
  std::string witness;

  std::string verdict_line() const;
};

// Process well-formedness, then the test-over-secret condition, then bounded syntactic secrecy
// when bounds are given.
ProcessReport analyze_process(const Process& p, const std::string& s,
                              const std::optional<ExplorationBounds>& bounds);

std::string describe(const Violation& v);

struct CoverageCheck {
  bool instances = true;  // every occurrence of s lies under an instance of some E
  bool extended = true;   // the frame is extended well-formed for every copy of s
  std::string why;        // first failure
  bool pass() const { return instances && extended; }
};

// Runtime check of the E-set over-approximation on one normalized reachable frame in which s
// is not deducible.
CoverageCheck check_reachable_frame(const Frame& nf, const std::string& s,
                               const std::vector<MarkedCipher>& es,
                               const std::map<std::string, std::string>& origin);

// Tests of the trace whose outcome changes when every copy of s is replaced by m.
std::vector<TestRecord> secret_dependent_tests(const StandardFrame& f, const std::string& s,
                                           const Term& m);

}  // namespace strongsec
