// strongsec: command-line front end.
//
// Exit status depends only on the verdict: 0 for pass-like verdicts, 1 for fail-like ones,
// 2 for usage and parse errors.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "corpus.hpp"
#include "report.hpp"
#include "strongsec/error.hpp"
#include "strongsec/rewrite.hpp"

using namespace strongsec;
using namespace strongsec::cli;

namespace {

const std::map<std::string, int> kExit = {
    {"normalized", 0},
    {"deducible", 0},
    {"not-deducible", 1},
    {"equivalent", 0},
    {"distinguished", 1},
    {"pass", 0},
    {"fail", 1},
    {to_string(PassiveStatus::StrongSecrecyHolds), 0},
    {to_string(PassiveStatus::NotStronglySecret), 1},
    {to_string(PassiveStatus::NotWellFormed), 1},
    {"secret-within-bounds", 0},
    {"attack-found", 1},
    {"computed", 0},
    {to_string(Verdict::StrongSecrecySupported), 0},
    {to_string(Verdict::TheoremInapplicable), 1},
    {to_string(Verdict::SyntacticAttackFound), 1},
    {"corpus-pass", 0},
    {"corpus-fail", 1},
    {"error", 2},
};

struct Outcome {
  std::string verdict;
  std::string text;
  json result;
};

struct Input {
  std::string path;
  std::string text;
};

std::vector<Input> inputs;

const std::string& load(const std::string& path) {
  inputs.push_back({path, read_file(path)});
  return inputs.back().text;
}

// "a,b;c,d" -> {(a,b),(c,d)}, splitting only at commas outside brackets.
std::vector<std::pair<Term, Term>> parse_samples(const std::string& spec) {
  std::vector<std::pair<Term, Term>> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    int depth = 0;
    size_t cut = std::string::npos;
    for (size_t i = 0; i < item.size(); ++i) {
      char c = item[i];
      if (c == '(' || c == '<') ++depth;
      if (c == ')' || c == '>') --depth;
      if (c == ',' && depth == 0) {
        if (cut != std::string::npos) throw Error("sample '" + item + "' has more than two terms");
        cut = i;
      }
    }
    if (cut == std::string::npos) throw Error("sample '" + item + "' needs two terms M,M'");
    out.emplace_back(parse_term(item.substr(0, cut)), parse_term(item.substr(cut + 1)));
  }
  return out;
}

std::vector<int> frame_failed(const FrameReport& r) {
  std::set<int> cs;
  for (const Violation& v : r.violations) cs.insert(v.condition);
  return {cs.begin(), cs.end()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong secrecy transfer analysis for applied-pi protocol models"};
  app.require_subcommand(1);
  bool as_json = false;
  bool unicode = false;
  app.add_flag("--json", as_json, "Emit a JSON report");
  app.add_flag("--unicode", unicode, "Print terms with Unicode symbols");

  std::function<Outcome()> run;
  std::string command;
  auto style = [&] { return unicode ? Style::Unicode : Style::Ascii; };

  // normalize
  std::string term_text;
  bool trace = false;
  auto* normalize_cmd = app.add_subcommand("normalize", "Normal form of a term");
  normalize_cmd->add_option("term", term_text, "Term")->required();
  normalize_cmd->add_flag("--trace", trace, "Print each rewrite step");
  normalize_cmd->callback([&] {
    command = "normalize";
    run = [&] {
      Term t = parse_term(term_text);
      Outcome o{"normalized", "", json::object()};
      json steps = json::array();
      Term cur = t;
      if (trace) {
        while (auto r = reduce_once(cur)) {
          cur = r->first;
          std::string pos = position_string(r->second.redex_position, unicode);
          o.text += std::string(rule_name(r->second.rule)) + " at " + pos + ": " +
                    to_string(cur, style()) + "\n";
          steps.push_back({{"rule", rule_name(r->second.rule)},
                           {"position", position_string(r->second.redex_position)},
                           {"result", to_string(cur)}});
        }
      }
      Term nf = normalize(t);
      o.text += to_string(nf, style()) + "\n";
      o.result = {{"term", to_string(t)}, {"normal_form", to_string(nf)}};
      if (trace) o.result["steps"] = steps;
      return o;
    };
  });

  // deduce
  std::string frame_path;
  auto* deduce_cmd = app.add_subcommand("deduce", "Intruder deduction from a frame");
  deduce_cmd->add_option("frame", frame_path, "Frame file")->required();
  deduce_cmd->add_option("term", term_text, "Target term")->required();
  deduce_cmd->callback([&] {
    command = "deduce";
    run = [&] {
      Frame f = parse_frame(load(frame_path));
      Term m = parse_term(term_text);
      std::optional<Term> rec = deduce(f, m);
      Outcome o{rec ? "deducible" : "not-deducible", "", json::object()};
      o.text = rec ? "deducible by " + to_string(*rec, style()) + "\n" : "not deducible\n";
      o.result = {{"term", to_string(m)},
                  {"recipe", rec ? json(to_string(*rec)) : json(nullptr)}};
      return o;
    };
  });

  // equiv
  std::string other_path;
  int depth = 1;
  bool brute = false;
  auto* equiv_cmd = app.add_subcommand("equiv", "Static equivalence of two frames");
  equiv_cmd->add_option("frame1", frame_path, "First frame")->required();
  equiv_cmd->add_option("frame2", other_path, "Second frame")->required();
  equiv_cmd->add_option("--depth", depth,
                        "Constructor layers over deducible recipes (with --brute: test depth)")
      ->check(CLI::Range(0, 6));
  equiv_cmd->add_flag("--brute", brute, "Enumerate all tests up to --depth instead");
  equiv_cmd->callback([&] {
    command = "equiv";
    run = [&] {
      Frame f1 = parse_frame(load(frame_path));
      Frame f2 = parse_frame(load(other_path));
      EquivalenceVerdict v = brute ? brute_equiv(f1, f2, depth) : static_equiv(f1, f2, depth);
      Outcome o{v.equivalent ? "equivalent" : "distinguished", render(v, style()), to_json(v)};
      o.result["method"] = brute ? "brute" : "saturation";
      o.result["depth"] = depth;
      return o;
    };
  });

  // check-frame
  std::string secret;
  bool extended = false;
  auto* check_cmd = app.add_subcommand("check-frame", "Well-formedness of a frame");
  check_cmd->add_option("frame", frame_path, "Frame file")->required();
  check_cmd->add_option("--secret", secret, "Secret name")->required();
  check_cmd->add_flag("--extended", extended, "Check the extended definition");
  check_cmd->callback([&] {
    command = "check-frame";
    run = [&] {
      Frame f = parse_frame(load(frame_path));
      FrameReport r =
          extended ? check_extended_well_formed(f, secret) : check_well_formed_frame(f, secret);
      Outcome o{r.pass() ? "pass" : "fail", render(r), to_json(r)};
      o.result["failed"] = frame_failed(r);
      return o;
    };
  });

  // passive
  std::string samples;
  int passive_depth = 2;
  auto* passive_cmd = app.add_subcommand("passive", "Strong secrecy of a frame (passive case)");
  passive_cmd->add_option("frame", frame_path, "Frame file")->required();
  passive_cmd->add_option("--secret", secret, "Secret name")->required();
  passive_cmd->add_option("--depth", passive_depth, "Test depth for sample checks")
      ->check(CLI::Range(1, 4));
  passive_cmd->add_option("--samples", samples, "Instance pairs M1,M1';M2,M2'");
  passive_cmd->callback([&] {
    command = "passive";
    run = [&] {
      Frame f = parse_frame(load(frame_path));
      PassiveReport r = check_passive_transfer(f, secret, parse_samples(samples), passive_depth);
      return Outcome{to_string(r.status), render(r, style()), to_json(r)};
    };
  });

  // explore
  ExplorationBounds bounds;
  std::string proc_path;
  auto add_bounds = [&](CLI::App* c) {
    c->add_option("--unfold", bounds.replication_unfoldings, "Replication unfoldings")
        ->check(CLI::Range(0, 4));
    c->add_option("--recipe-depth", bounds.recipe_depth, "Adversary recipe depth")
        ->check(CLI::Range(1, 3));
    c->add_option("--max-trace", bounds.max_trace_length, "Maximal trace length")
        ->check(CLI::Range(1, 64));
    c->add_option("--max-states", bounds.max_states, "State budget");
  };
  auto* explore_cmd = app.add_subcommand("explore", "Bounded syntactic secrecy");
  explore_cmd->add_option("process", proc_path, "Process file")->required();
  explore_cmd->add_option("--secret", secret, "Secret name")->required();
  add_bounds(explore_cmd);
  explore_cmd->callback([&] {
    command = "explore";
    run = [&] {
      Process p = parse_process(load(proc_path));
      SecrecyEvidence e = check_syntactic_secrecy_bounded(p, secret, bounds);
      return Outcome{e.secret ? "secret-within-bounds" : "attack-found", render(e, style()),
                     to_json(e)};
    };
  });

  // esets
  auto* esets_cmd = app.add_subcommand("esets", "E-set fixpoint of a process");
  esets_cmd->add_option("process", proc_path, "Process file")->required();
  esets_cmd->add_option("--secret", secret, "Secret name")->required();
  esets_cmd->callback([&] {
    command = "esets";
    run = [&] {
      Process p = parse_process(load(proc_path));
      ESetReport r = compute_esets(p, secret);
      return Outcome{"computed", render(r, style()), to_json(r)};
    };
  });

  // analyze
  bool no_explore = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Full process report");
  analyze_cmd->add_option("process", proc_path, "Process file")->required();
  analyze_cmd->add_option("--secret", secret, "Secret name")->required();
  analyze_cmd->add_flag("--no-explore", no_explore, "Skip bounded exploration");
  add_bounds(analyze_cmd);
  analyze_cmd->callback([&] {
    command = "analyze";
    run = [&] {
      Process p = parse_process(load(proc_path));
      std::optional<ExplorationBounds> b;
      if (!no_explore) b = bounds;
      ProcessReport r = analyze_process(p, secret, b);
      return Outcome{to_string(r.verdict), render(r, style()), to_json(r)};
    };
  });

  // corpus
  CorpusOptions copts;
  std::string only;
  auto* corpus_cmd = app.add_subcommand("corpus", "Run the corpus against its goldens");
  corpus_cmd->add_option("--dir", copts.dir, "Corpus directory");
  corpus_cmd->add_option("--only", only, "Run a single entry");
  corpus_cmd->add_flag("--update-goldens", copts.update_goldens, "Rewrite changed goldens");
  corpus_cmd->callback([&] {
    command = "corpus";
    run = [&] {
      if (!only.empty()) copts.only = only;
      copts.style = style();
      inputs.push_back({copts.dir + "/corpus.json", read_file(copts.dir + "/corpus.json")});
      std::vector<EntryResult> rs = run_corpus(copts);
      Outcome o{"corpus-pass", "", json::array()};
      for (const EntryResult& r : rs) {
        o.text += (r.pass() ? "PASS " : "FAIL ") + r.name + " (" + r.kind + ")\n";
        for (const std::string& p : r.problems) o.text += "  " + p + "\n";
        if (r.golden_written) o.text += "  golden written: goldens/" + r.name + ".txt\n";
        if (!r.pass()) o.verdict = "corpus-fail";
        o.result.push_back({{"name", r.name},
                            {"kind", r.kind},
                            {"pass", r.pass()},
                            {"problems", r.problems},
                            {"golden_written", r.golden_written},
                            {"report", r.data}});
      }
      return o;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto start = std::chrono::steady_clock::now();
  Outcome out;
  std::string error;
  try {
    out = run();
  } catch (const std::exception& e) {
    error = e.what();
    out = Outcome{"error", "", nullptr};
  }
  int code = kExit.at(out.verdict);
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();

  if (as_json) {
    json in = json::array();
    for (const Input& i : inputs) in.push_back({{"path", i.path}, {"fnv1a", fnv1a(i.text)}});
    json env = {{"schema_version", kSchemaVersion},
                {"command", command},
                {"argv", std::vector<std::string>(argv, argv + argc)},
                {"inputs", in},
                {"result", out.result},
                {"verdict", out.verdict},
                {"exit_code", code},
                {"elapsed_ms", elapsed}};
    if (!error.empty()) env["error"] = error;
    std::cout << env.dump(2) << "\n";
  } else {
    std::cout << out.text;
  }
  if (!error.empty()) std::cerr << "error: " << error << "\n";
  return code;
}
