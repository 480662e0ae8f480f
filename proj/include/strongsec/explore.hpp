#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strongsec/frame.hpp"
#include "strongsec/process.hpp"

namespace strongsec {

struct ExplorationBounds {
  int replication_unfoldings = 1;
  int recipe_depth = 2;
  int max_trace_length = 12;
  std::size_t max_states = 4'000'000;
};

// How binding y_i came about: y_i = M_i theta_i sigma_{i-1}.
struct BindingProvenance {
  Term message;                                // the output term as written in the process
  std::map<std::string, std::string> names;    // process names -> names of this run
  Substitution theta;                          // input variables -> recipes over earlier handles
  bool public_theta = true;                    // false when a variable came over a private channel
};

struct TestRecord {
  Term left;   // ground, instantiated, not normalized
  Term right;
  bool holds = false;
};

struct StandardFrame {
  Frame frame;  // bindings as built by the recurrence, not normalized
  std::vector<BindingProvenance> provenance;
  std::vector<std::string> trace;
  std::vector<TestRecord> tests;

  Frame normalized() const;
};

struct ExplorationResult {
  std::vector<StandardFrame> frames;
  bool truncated = false;
  std::size_t states = 0;
};

ExplorationResult explore(const Process& p, const std::string& s, const ExplorationBounds& b);

struct ExplorationSummary {
  bool truncated = false;
  std::size_t states = 0;
  std::size_t frames = 0;
  bool stopped = false;  // the visitor asked to stop
};

// Streams one standard frame per distinct normalized frame, in breadth-first order.
// Returning false from visit stops the search.
ExplorationSummary explore_each(const Process& p, const std::string& s,
                                const ExplorationBounds& b,
                                const std::function<bool(const StandardFrame&)>& visit);

// Checks the standard-frame recurrence and publicness of theta from the provenance.
bool check_standard_frame(const StandardFrame& f, std::string* why = nullptr);

struct SecrecyEvidence {
  bool secret = true;
  bool truncated = false;
  std::size_t states = 0;
  std::size_t frames = 0;
  std::optional<StandardFrame> attack;
  std::optional<Term> recipe;
  std::string secret_copy;  // the restricted name that was deduced
};

SecrecyEvidence check_syntactic_secrecy_bounded(const Process& p, const std::string& s,
                                                const ExplorationBounds& b);

// Names created under replication carry #k suffixes; this strips them.
std::string base_name(const std::string& n);

}  // namespace strongsec
