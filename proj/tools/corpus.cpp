#include "corpus.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "strongsec/error.hpp"

namespace strongsec::cli {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

std::vector<int> failed(const FrameReport& r) {
  std::vector<int> out;
  for (const Violation& v : r.violations) out.push_back(v.condition);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string list(const std::vector<int>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + "]";
}

Term reserved_term(const std::string& text) {
  ParseOptions o;
  o.allow_reserved = true;
  return parse_term(text, o);
}

TermSet term_set(const json& j) {
  TermSet out;
  for (const auto& t : j) out.insert(reserved_term(t.get<std::string>()));
  return out;
}

void expect_conditions(const json& expect, const char* key, const std::vector<int>& got,
                       std::vector<std::string>& problems) {
  if (!expect.contains(key)) return;
  auto want = expect[key].get<std::vector<int>>();
  if (want != got) {
    problems.push_back(std::string(key) + " failed conditions " + list(got) + ", expected " +
                       list(want));
  }
}

void expect_set(const json& expect, const char* key, const std::vector<Term>& got,
                std::vector<std::string>& problems) {
  if (!expect.contains(key)) return;
  TermSet want = term_set(expect[key]);
  TermSet have(got.begin(), got.end());
  for (const Term& t : want) {
    if (!have.count(t)) problems.push_back(std::string(key) + " lacks " + to_string(t));
  }
  for (const Term& t : have) {
    if (!want.count(t)) problems.push_back(std::string(key) + " has extra " + to_string(t));
  }
}

void expect_generations(const json& expect, const ESetReport& es,
                        std::vector<std::string>& problems) {
  if (!expect.contains("E")) return;
  const json& gens = expect["E"];
  for (size_t i = 0; i < gens.size(); ++i) {
    std::vector<Term> want;
    for (const auto& t : gens[i]) want.push_back(reserved_term(t.get<std::string>()));
    std::vector<MarkedCipher> have =
        i < es.generations.size() ? es.generations[i] : std::vector<MarkedCipher>{};
    if (!same_canonical(have, want)) {
      std::string got;
      for (const MarkedCipher& e : have) got += " " + to_string(e.canonical);
      problems.push_back("E" + std::to_string(i) + " differs; computed" +
                         (got.empty() ? " {}" : got));
    }
  }
  std::vector<MarkedCipher> seen;
  for (size_t i = 0; i < es.generations.size(); ++i) {
    for (const MarkedCipher& e : es.generations[i]) {
      bool old = std::any_of(seen.begin(), seen.end(), [&](const MarkedCipher& o) {
        return o.canonical == e.canonical;
      });
      if (i >= gens.size() && !old) {
        problems.push_back("E" + std::to_string(i) + " has unexpected " + to_string(e.term));
      }
    }
    seen.insert(seen.end(), es.generations[i].begin(), es.generations[i].end());
  }
}

// Handles of the frame are the variables of a recipe.
std::string witness_line(const Frame& f1, const Frame& f2, const json& w, bool& distinguishes,
                         Style style) {
  std::set<std::string> dom = f1.domain();
  ParseOptions o;
  o.vars = &dom;
  Term u = parse_term(w[0].get<std::string>(), o);
  Term v = parse_term(w[1].get<std::string>(), o);
  bool a = passes_test(f1, u, v);
  bool b = passes_test(f2, u, v);
  distinguishes = a != b;
  return "test (" + to_string(u, style) + ", " + to_string(v, style) + "): " +
         (a ? "holds" : "fails") + " / " + (b ? "holds" : "fails") + "\n";
}

EntryResult run_process(const json& e, const std::string& dir, Style style) {
  EntryResult r;
  Process p = parse_process(read_file(dir + "/" + e["file"].get<std::string>()));
  std::string s = e["secret"];
  std::optional<ExplorationBounds> bounds;
  if (e.value("explore", false)) bounds = ExplorationBounds{};
  ProcessReport rep = analyze_process(p, s, bounds);
  r.report = render(rep, style);
  r.data = to_json(rep);
  const json& ex = e.value("expect", json::object());
  expect_conditions(ex, "def3", rep.def3.failed(), r.problems);
  if (ex.contains("def4")) {
    if (!rep.def4) {
      r.problems.push_back("def4 not evaluated");
    } else {
      expect_conditions(ex, "def4", rep.def4->failed(), r.problems);
    }
  }
  if (ex.contains("verdict") && ex["verdict"] != to_string(rep.verdict)) {
    r.problems.push_back(std::string("verdict ") + to_string(rep.verdict) + ", expected " +
                         ex["verdict"].get<std::string>());
  }
  if (rep.esets) {
    expect_generations(ex, *rep.esets, r.problems);
    expect_set(ex, "Do", rep.esets->Do, r.problems);
    expect_set(ex, "Mts", rep.esets->Mts, r.problems);
  } else if (ex.contains("E")) {
    r.problems.push_back("E-sets not computed");
  }
  return r;
}

EntryResult run_frame(const json& e, const std::string& dir, Style style) {
  EntryResult r;
  Frame f = parse_frame(read_file(dir + "/" + e["file"].get<std::string>()));
  std::string out = "frame " + to_string(f, style) + "\n";
  r.data = json::object();
  const json& ex = e.value("expect", json::object());
  if (e.contains("secret")) {
    std::string s = e["secret"];
    FrameReport d1 = check_well_formed_frame(f, s);
    FrameReport d2 = check_extended_well_formed(f, s);
    std::optional<Term> rec = deduce(f, Term::name(s));
    out += render(d1) + render(d2);
    out += rec ? "secret deducible by " + to_string(*rec, style) + "\n" : "secret not deducible\n";
    r.data["def1"] = to_json(d1);
    r.data["def2"] = to_json(d2);
    r.data["secret_recipe"] = rec ? json(to_string(*rec)) : json(nullptr);
    expect_conditions(ex, "def1", failed(d1), r.problems);
    expect_conditions(ex, "def2", failed(d2), r.problems);
    if (ex.contains("deducible") && ex["deducible"].get<bool>() != rec.has_value()) {
      r.problems.push_back(rec ? "secret is deducible" : "secret is not deducible");
    }
    if (e.contains("instances")) {
      Term m1 = parse_term(e["instances"][0].get<std::string>());
      Term m2 = parse_term(e["instances"][1].get<std::string>());
      Frame f1 = instantiate(f, s, m1);
      Frame f2 = instantiate(f, s, m2);
      EquivalenceVerdict v = static_equiv(f1, f2, 1);
      out += "instances " + to_string(m1, style) + " / " + to_string(m2, style) + ": " +
             render(v, style);
      r.data["instances"] = to_json(v);
      if (v.equivalent) {
        r.problems.push_back("instances not distinguished");
      } else {
        out += "not strongly secret\n";
      }
      if (e.contains("witness")) {
        bool dist = false;
        out += witness_line(f1, f2, e["witness"], dist, style);
        if (!dist) r.problems.push_back("the expected witness does not distinguish the instances");
      }
    }
  }
  if (e.contains("deduce")) {
    for (const auto& t : e["deduce"]) {
      Term m = parse_term(t.get<std::string>());
      std::optional<Term> rec = deduce(f, m);
      out += "deduce " + to_string(m, style) + ": " +
             (rec ? to_string(*rec, style) : std::string("not deducible")) + "\n";
      if (!rec) r.problems.push_back(to_string(m) + " not deducible");
    }
  }
  r.report = out;
  return r;
}

EntryResult run_pair(const json& e, const std::string& dir, Style style) {
  EntryResult r;
  Frame f1 = parse_frame(read_file(dir + "/" + e["file"].get<std::string>()));
  Frame f2 = parse_frame(read_file(dir + "/" + e["other"].get<std::string>()));
  EquivalenceVerdict v = static_equiv(f1, f2, 1);
  r.report = "frame " + to_string(f1, style) + "\nframe " + to_string(f2, style) + "\n" +
             render(v, style);
  r.data = {{"equivalence", to_json(v)}};
  if (v.equivalent) r.problems.push_back("frames not distinguished");
  if (e.contains("witness")) {
    bool dist = false;
    r.report += witness_line(f1, f2, e["witness"], dist, style);
    if (!dist) r.problems.push_back("the expected witness does not distinguish the frames");
  }
  return r;
}

std::string first_difference(const std::string& a, const std::string& b) {
  std::istringstream x(a), y(b);
  std::string l1, l2;
  int line = 1;
  while (true) {
    bool m1 = static_cast<bool>(std::getline(x, l1));
    bool m2 = static_cast<bool>(std::getline(y, l2));
    if (!m1 && !m2) return "";
    if (!m1) l1 = "<end>";
    if (!m2) l2 = "<end>";
    if (l1 != l2) {
      return "line " + std::to_string(line) + ": golden '" + l1 + "', now '" + l2 + "'";
    }
    ++line;
  }
}

EntryResult run_entry(const json& e, const CorpusOptions& opts) {
  EntryResult r;
  std::string name = e["name"];
  std::string kind = e["kind"];
  try {
    if (kind == "process") {
      r = run_process(e, opts.dir, opts.style);
    } else if (kind == "frame") {
      r = run_frame(e, opts.dir, opts.style);
    } else if (kind == "frame-pair") {
      r = run_pair(e, opts.dir, opts.style);
    } else {
      throw Error("unknown entry kind " + kind);
    }
  } catch (const std::exception& ex) {
    r.problems.push_back(std::string("error: ") + ex.what());
  }
  r.name = name;
  r.kind = kind;
  fs::path golden = fs::path(opts.dir) / "goldens" / (name + ".txt");
  if (opts.update_goldens) {
    std::string old = fs::exists(golden) ? read_file(golden.string()) : "";
    if (old != r.report) {
      fs::create_directories(golden.parent_path());
      std::ofstream(golden, std::ios::binary) << r.report;
      r.golden_written = true;
    }
  } else if (!fs::exists(golden)) {
    r.problems.push_back("no golden " + golden.string() + " (run with --update-goldens)");
  } else if (std::string d = first_difference(read_file(golden.string()), r.report); !d.empty()) {
    r.problems.push_back("golden mismatch at " + d);
  }
  return r;
}

}  // namespace

std::vector<EntryResult> run_corpus(const CorpusOptions& opts) {
  json manifest = json::parse(read_file(opts.dir + "/corpus.json"));
  std::vector<std::future<EntryResult>> jobs;
  for (const json& e : manifest["entries"]) {
    if (opts.only && e["name"] != *opts.only) continue;
    jobs.push_back(std::async(std::launch::async, [e, &opts] { return run_entry(e, opts); }));
  }
  if (opts.only && jobs.empty()) throw Error("no corpus entry named " + *opts.only);
  std::vector<EntryResult> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace strongsec::cli
