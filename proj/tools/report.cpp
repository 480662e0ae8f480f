#include "report.hpp"

#include <cstdio>
#include <sstream>

namespace strongsec::cli {

std::string fnv1a(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json terms(const std::vector<Term>& ts) {
  json out = json::array();
  for (const Term& t : ts) out.push_back(to_string(t));
  return out;
}

json terms(const TermSet& ts) {
  json out = json::array();
  for (const Term& t : ts) out.push_back(to_string(t));
  return out;
}

std::string join(const std::vector<Term>& ts, Style style) {
  std::string out = "{";
  for (size_t i = 0; i < ts.size(); ++i) out += (i ? ", " : "") + to_string(ts[i], style);
  return out + "}";
}

std::string join(const TermSet& ts, Style style) {
  return join(std::vector<Term>(ts.begin(), ts.end()), style);
}

std::string violation_line(const Violation& v) {
  std::string out = "  condition " + std::to_string(v.condition) + ": " + v.explanation;
  if (!v.handle.empty()) out += "\n    in " + v.handle;
  if (!v.position.empty()) out += " at " + position_string(v.position);
  return out + "\n";
}

}  // namespace

json to_json(const Violation& v) {
  return {{"condition", v.condition},
          {"where", v.handle},
          {"position", position_string(v.position)},
          {"explanation", v.explanation}};
}

json to_json(const FrameReport& r) {
  json vs = json::array();
  for (const Violation& v : r.violations) vs.push_back(to_json(v));
  return {{"definition", r.definition},
          {"pass", r.pass()},
          {"violations", vs},
          {"warnings", r.warnings}};
}

json to_json(const ConditionReport& r) {
  json vs = json::array();
  for (const Violation& v : r.violations) vs.push_back(to_json(v));
  return {{"definition", r.definition},
          {"conditions", r.conditions},
          {"pass", r.pass()},
          {"failed", r.failed()},
          {"violations", vs},
          {"warnings", r.warnings}};
}

json to_json(const ESetReport& r) {
  json gens = json::array();
  for (size_t i = 0; i < r.generations.size(); ++i) {
    json es = json::array();
    for (const MarkedCipher& e : r.generations[i]) {
      es.push_back({{"term", to_string(e.term)}, {"canonical", to_string(e.canonical)}});
    }
    gens.push_back({{"index", i},
                    {"ciphers", es},
                    {"openers", terms(r.openers[i])},
                    {"max_openers", terms(r.max_openers[i])}});
  }
  return {{"outputs", terms(r.messages.outputs)},
          {"test_operands", terms(r.messages.test_operands)},
          {"generations", gens},
          {"Do", terms(r.Do)},
          {"Mts", terms(r.Mts)}};
}

json to_json(const EquivalenceVerdict& v) {
  json out = {{"equivalent", v.equivalent}, {"candidates", v.candidates}};
  if (v.witness) {
    out["witness"] = {to_string(v.witness->first), to_string(v.witness->second)};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

json to_json(const PassiveReport& r) {
  json samples = json::array();
  for (const SampleEvidence& s : r.samples) {
    samples.push_back(
        {{"m1", to_string(s.m1)}, {"m2", to_string(s.m2)}, {"verdict", to_json(s.verdict)}});
  }
  json out = {{"status", to_string(r.status)},
              {"frame_report", to_json(r.frame_report)},
              {"samples", samples},
              {"warnings", r.warnings}};
  out["secret_recipe"] = r.secret_recipe ? json(to_string(*r.secret_recipe)) : json(nullptr);
  if (r.test) {
    out["test"] = {to_string(r.test->first), to_string(r.test->second)};
  } else {
    out["test"] = nullptr;
  }
  return out;
}

json to_json(const StandardFrame& f) {
  json bindings = json::array();
  Frame nf = f.normalized();
  for (size_t i = 0; i < f.frame.bindings.size(); ++i) {
    const BindingProvenance& p = f.provenance[i];
    json theta = json::object();
    for (const auto& [v, t] : p.theta) theta[v] = to_string(t);
    bindings.push_back({{"handle", f.frame.bindings[i].first},
                        {"term", to_string(f.frame.bindings[i].second)},
                        {"normal_form", to_string(nf.bindings[i].second)},
                        {"output", to_string(p.message)},
                        {"theta", theta}});
  }
  return {{"restricted", f.frame.restricted}, {"bindings", bindings}, {"trace", f.trace}};
}

json to_json(const SecrecyEvidence& e) {
  json out = {{"secret_within_bounds", e.secret},
              {"truncated", e.truncated},
              {"states", e.states},
              {"frames", e.frames}};
  if (e.attack) {
    out["attack"] = to_json(*e.attack);
    out["recipe"] = to_string(*e.recipe);
    out["secret_copy"] = e.secret_copy;
  }
  return out;
}

json to_json(const ProcessReport& r) {
  json out = {{"secret", r.secret},
              {"def3", to_json(r.def3)},
              {"theorem3_applicable", r.applicable},
              {"verdict", to_string(r.verdict)},
              {"verdict_line", r.verdict_line()}};
  out["def4"] = r.def4 ? to_json(*r.def4) : json(nullptr);
  out["esets"] = r.esets ? to_json(*r.esets) : json(nullptr);
  out["exploration"] = r.evidence ? to_json(*r.evidence) : json(nullptr);
  out["witness"] = r.witness;
  return out;
}

std::string render(const FrameReport& r) {
  std::string out = r.definition + ": " + (r.pass() ? "pass" : "fail") + "\n";
  for (const Violation& v : r.violations) out += violation_line(v);
  for (const std::string& w : r.warnings) out += "  warning: " + w + "\n";
  return out;
}

std::string render(const ConditionReport& r) {
  std::string out = r.definition + ": " + (r.pass() ? "pass" : "fail");
  if (!r.pass()) {
    out += " (conditions";
    for (int c : r.failed()) out += " " + std::to_string(c);
    out += ")";
  }
  out += "\n";
  for (const Violation& v : r.violations) out += violation_line(v);
  for (const std::string& w : r.warnings) out += "  warning: " + w + "\n";
  return out;
}

std::string render(const ESetReport& r, Style style) {
  std::ostringstream os;
  os << "M_o = " << join(r.messages.outputs, style) << "\n";
  os << "M_t = " << join(r.messages.test_operands, style) << "\n";
  os << "D_o = " << join(r.Do, style) << "\n";
  for (size_t i = 0; i < r.generations.size(); ++i) {
    os << "E" << i << " =";
    if (r.generations[i].empty()) os << " {}";
    os << "\n";
    for (const MarkedCipher& e : r.generations[i]) {
      os << "  " << to_string(e.term, style) << "\n";
      os << "    renumbered " << to_string(e.canonical, style) << "\n";
    }
    if (!r.generations[i].empty()) {
      os << "  openers " << join(r.openers[i], style) << "\n";
      os << "  max openers " << join(r.max_openers[i], style) << "\n";
    }
  }
  os << "M_t^s = " << join(r.Mts, style) << "\n";
  return os.str();
}

std::string render(const EquivalenceVerdict& v, Style style) {
  if (v.equivalent) {
    return "equivalent (" + std::to_string(v.candidates) + " candidate tests)\n";
  }
  return "distinguished by (" + to_string(v.witness->first, style) + ", " +
         to_string(v.witness->second, style) + ")\n";
}

std::string render(const PassiveReport& r, Style style) {
  std::string out = render(r.frame_report);
  if (r.secret_recipe) out += "secret deducible by " + to_string(*r.secret_recipe, style) + "\n";
  if (r.test) {
    out += "distinguishing test (" + to_string(r.test->first, style) + ", " +
           to_string(r.test->second, style) + ")\n";
  }
  for (const SampleEvidence& s : r.samples) {
    out += "sample " + to_string(s.m1, style) + " / " + to_string(s.m2, style) + ": " +
           render(s.verdict, style);
  }
  for (const std::string& w : r.warnings) out += "warning: " + w + "\n";
  out += std::string("status: ") + to_string(r.status) + "\n";
  return out;
}

std::string render(const SecrecyEvidence& e, Style style) {
  std::string out = "explored " + std::to_string(e.states) + " states, " +
                    std::to_string(e.frames) + " distinct frames" +
                    (e.truncated ? " (truncated)" : "") + "\n";
  if (e.secret) return out + "secret-within-bounds\n";
  out += "attack on " + e.secret_copy + ":\n";
  for (const std::string& step : e.attack->trace) out += "  " + step + "\n";
  out += "  frame " + to_string(e.attack->normalized(), style) + "\n";
  out += "  recipe " + to_string(*e.recipe, style) + "\n";
  return out;
}

std::string render(const ProcessReport& r, Style style) {
  std::string out = render(r.def3);
  if (r.def4) {
    out += render(*r.def4);
  } else {
    out += "def4: skipped\n";
  }
  if (r.esets) out += render(*r.esets, style);
  out += std::string("theorem 3 ") + (r.applicable ? "applicable" : "inapplicable") + "\n";
  if (r.evidence) {
    out += render(*r.evidence, style);
  } else {
    out += "exploration skipped\n";
  }
  out += "verdict: " + r.verdict_line() + "\n";
  return out;
}

}  // namespace strongsec::cli
