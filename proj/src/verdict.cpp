#include "strongsec/verdict.hpp"

#include <algorithm>

#include "strongsec/esets.hpp"
#include "strongsec/rewrite.hpp"

namespace strongsec {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::StrongSecrecySupported:
      return "strong-secrecy-supported";
    case Verdict::TheoremInapplicable:
      return "theorem-inapplicable";
    case Verdict::SyntacticAttackFound:
      return "syntactic-attack-found";
  }
  return "?";
}

std::string describe(const Violation& v) {
  std::string out = "condition " + std::to_string(v.condition) + ": " + v.explanation;
  if (!v.handle.empty()) out += " in " + v.handle;
  if (!v.position.empty()) out += " at " + position_string(v.position);
  return out;
}

std::string ProcessReport::verdict_line() const {
  std::string out = to_string(verdict);
  if (verdict == Verdict::StrongSecrecySupported) {
    if (!evidence) {
      out += " (transfer applicable, no exploration)";
    } else {
      out += evidence->truncated ? " (within bounds, truncated)" : " (within bounds)";
    }
  }
  if (!witness.empty()) out += "(" + witness + ")";
  return out;
}

ProcessReport analyze_process(const Process& p, const std::string& s,
                              const std::optional<ExplorationBounds>& bounds) {
  ProcessReport rep;
  rep.secret = s;
  rep.def3 = check_well_formed_process(p, s);
  if (rep.def3.pass()) {
    rep.esets = compute_esets(p, s);
    rep.def4 = check_no_test_over_secret(p, s, *rep.esets);
  }
  rep.applicable = rep.def3.pass() && rep.def4 && rep.def4->pass();
  if (bounds && !rep.def3.fails(0)) {
    rep.evidence = check_syntactic_secrecy_bounded(p, s, *bounds);
  }
  if (rep.evidence && !rep.evidence->secret) {
    rep.verdict = Verdict::SyntacticAttackFound;
    std::string trace;
    for (const std::string& step : rep.evidence->attack->trace) {
      trace += (trace.empty() ? "" : "; ") + step;
    }
    rep.witness = trace + "; deduce " + rep.evidence->secret_copy + " by " +
                  to_string(*rep.evidence->recipe);
  } else if (!rep.applicable) {
    rep.verdict = Verdict::TheoremInapplicable;
    const ConditionReport& failed = rep.def3.pass() ? *rep.def4 : rep.def3;
    rep.witness = failed.definition + " " + describe(failed.violations.front());
  } else {
    rep.verdict = Verdict::StrongSecrecySupported;
  }
  return rep;
}

namespace {

std::vector<std::string> copies(const Frame& f, const std::string& s) {
  std::vector<std::string> out;
  for (const std::string& n : f.restricted) {
    if (base_name(n) == s) out.push_back(n);
  }
  return out;
}

}  // namespace

CoverageCheck check_reachable_frame(const Frame& nf, const std::string& s,
                               const std::vector<MarkedCipher>& es,
                               const std::map<std::string, std::string>& origin) {
  CoverageCheck out;
  auto note = [&](const std::string& m) {
    if (out.why.empty()) out.why = m;
  };
  std::vector<Term> patterns;
  for (const MarkedCipher& e : es) patterns.push_back(rename_names(e.term, origin));
  for (const std::string& c : copies(nf, s)) {
    FrameReport wf = check_extended_well_formed(nf, c);
    if (!wf.pass()) {
      out.extended = false;
      note("not extended well-formed for " + c + ": " + describe(wf.violations.front()));
    }
    for (const auto& [h, u] : nf.bindings) {
      std::map<std::string, std::string> ren;
      for (const std::string& n : free_names(u)) {
        std::string b = base_name(n);
        auto it = origin.find(b);
        ren[n] = it == origin.end() ? b : it->second;
      }
      for (const Position& q : positions(u)) {
        const Term& at = subterm_at(u, q);
        if (!at.is_name() || at.id() != c) continue;
        auto fe = f_ep(replace_at(u, q, marker()), q);
        if (!fe) {
          out.instances = false;
          note(h + " at " + position_string(q) + ": no cipher above the secret");
          continue;
        }
        Term r = rename_names(fe->first, ren);
        bool found = std::any_of(patterns.begin(), patterns.end(), [&](const Term& e) {
          Substitution m;
          return match(e, r, m) && m[kMarker] == marker();
        });
        if (!found) {
          out.instances = false;
          note(h + " at " + position_string(q) + ": " + to_string(r) +
               " instantiates no member of E");
        }
      }
    }
  }
  return out;
}

std::vector<TestRecord> secret_dependent_tests(const StandardFrame& f, const std::string& s,
                                           const Term& m) {
  std::vector<std::string> cs = copies(f.frame, s);
  auto inst = [&](Term t) {
    for (const std::string& c : cs) t = replace_name(t, c, m);
    return normalize(t);
  };
  std::vector<TestRecord> out;
  for (const TestRecord& t : f.tests) {
    if ((inst(t.left) == inst(t.right)) != t.holds) out.push_back(t);
  }
  return out;
}

}  // namespace strongsec
