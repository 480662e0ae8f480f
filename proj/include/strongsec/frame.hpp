#pragma once

#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "strongsec/term.hpp"

namespace strongsec {

struct Frame {
  std::set<std::string> restricted;
  // handle -> ground term, in binding order
  std::vector<std::pair<std::string, Term>> bindings;

  std::set<std::string> domain() const;
  Substitution sigma() const;
  std::set<std::string> names() const;
  std::set<std::string> free_names() const;
  bool operator==(const Frame& o) const {
    return restricted == o.restricted && bindings == o.bindings;
  }
};

// `frame { restrict s, k, r; x -> enc(s,k,r); y -> k; }`
Frame parse_frame(std::string_view text);
std::string to_string(const Frame& f, Style style = Style::Ascii);

// Apply the frame's substitution and normalize.
Term evaluate(const Frame& f, const Term& recipe);

// Deducible normal forms with recipes, closed under the opening rules.
class KnowledgeSet {
 public:
  struct Entry {
    Term value;
    Term recipe;
  };

  explicit KnowledgeSet(const Frame& f);

  const Frame& frame() const { return frame_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const Term* recipe_for(const Term& value) const;
  // Recipe for a ground term, or nullopt if not deducible.
  std::optional<Term> deduce(const Term& m) const;

 private:
  bool add(const Term& value, const Term& recipe);
  std::optional<Term> deduce_nf(const Term& m) const;

  Frame frame_;
  std::vector<Entry> entries_;
  std::unordered_map<Term, size_t> index_;
  mutable std::unordered_map<Term, std::optional<Term>> memo_;
};

KnowledgeSet saturate(const Frame& f);
std::optional<Term> deduce(const Frame& f, const Term& m);

bool passes_test(const Frame& f, const Term& u, const Term& v);

struct EquivalenceVerdict {
  bool equivalent = true;
  std::optional<std::pair<Term, Term>> witness;
  size_t candidates = 0;
};

EquivalenceVerdict static_equiv(const Frame& f1, const Frame& f2, int recipe_depth = 1);
// Exhaustive oracle over all public tests whose sides have depth <= depth (a leaf has depth 1).
EquivalenceVerdict brute_equiv(const Frame& f1, const Frame& f2, int depth);

Frame instantiate(const Frame& f, const std::string& s, const Term& m);

struct Violation {
  int condition = 0;
  std::string handle;
  Position position;
  std::string explanation;
};

struct FrameReport {
  std::string definition;  // "def1" or "def2"
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
  bool pass() const { return violations.empty(); }
  bool fails(int condition) const;
};

FrameReport check_well_formed_frame(const Frame& f, const std::string& s);
FrameReport check_extended_well_formed(const Frame& f, const std::string& s);

enum class PassiveStatus { StrongSecrecyHolds, NotStronglySecret, NotWellFormed };

struct SampleEvidence {
  Term m1;
  Term m2;
  EquivalenceVerdict verdict;
};

struct PassiveReport {
  PassiveStatus status = PassiveStatus::NotWellFormed;
  FrameReport frame_report;
  std::optional<Term> secret_recipe;
  // Distinguishing test (T, n1) on the instances with fresh n1, n2.
  std::optional<std::pair<Term, Term>> test;
  std::optional<std::pair<Term, Term>> instances;
  std::vector<SampleEvidence> samples;
  std::vector<std::string> warnings;
};

PassiveReport check_passive_transfer(const Frame& f, const std::string& s,
                                     const std::vector<std::pair<Term, Term>>& samples,
                                     int depth);

const char* to_string(PassiveStatus s);

}  // namespace strongsec
