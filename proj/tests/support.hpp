#pragma once

// Generators and brute-force oracles shared by the test binaries.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "strongsec/frame.hpp"
#include "strongsec/process.hpp"
#include "strongsec/rewrite.hpp"
#include "strongsec/term.hpp"

namespace testsupport {

using namespace strongsec;

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string corpus_path(const std::string& rel) {
  return std::string(STRONGSEC_SOURCE_DIR) + "/corpus/" + rel;
}

inline Process load_process(const std::string& rel) { return parse_process(slurp(corpus_path(rel))); }
inline Frame load_frame(const std::string& rel) { return parse_frame(slurp(corpus_path(rel))); }

inline Term T(const std::string& s) { return parse_term(s); }

// Recipe text: the given handles are variables, everything else a name.
inline Term R(const std::string& s, const Frame& f) {
  std::set<std::string> dom = f.domain();
  ParseOptions o;
  o.vars = &dom;
  return parse_term(s, o);
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }
  int below(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(below(static_cast<int>(v.size())))];
  }

  Term name(const std::vector<std::string>& pool) { return Term::name(pick(pool)); }

  // Any symbol anywhere; redexes are planted by building rule left-hand sides.
  Term any(int depth, const std::vector<std::string>& pool) {
    if (depth <= 1 || coin(0.2)) return name(pool);
    if (coin(0.35)) return redex(depth, pool);
    Sym f = static_cast<Sym>(below(kNumSyms));
    std::vector<Term> args;
    for (int i = 0; i < arity(f); ++i) args.push_back(any(depth - 1, pool));
    return Term::app(f, std::move(args));
  }

  // An instance of a rule's left-hand side with random subterms.
  Term redex(int depth, const std::vector<std::string>& pool) {
    int d = std::max(1, depth - 2);
    auto sub = [&] { return any(d, pool); };
    switch (below(6)) {
      case 0: return Term::app(Sym::Proj1, Term::app(Sym::Pair, sub(), sub()));
      case 1: return Term::app(Sym::Proj2, Term::app(Sym::Pair, sub(), sub()));
      case 2: {
        Term k = sub();
        return Term::app(Sym::Dec, Term::app(Sym::Enc, sub(), k, sub()), k);
      }
      case 3: {
        Term a = sub();
        return Term::app(Sym::Deca, Term::app(Sym::Enca, sub(), Term::app(Sym::Pub, a), sub()),
                         Term::app(Sym::Priv, a));
      }
      case 4: {
        Term m = sub();
        Term a = sub();
        return Term::app(Sym::Check, m, Term::app(Sym::Sign, m, Term::app(Sym::Priv, a)),
                         Term::app(Sym::Pub, a));
      }
      default: return Term::app(Sym::Retrieve, Term::app(Sym::Sign, sub(), sub()));
    }
  }

  Term reducible(int depth, const std::vector<std::string>& pool) {
    while (true) {
      Term t = any(depth, pool);
      if (!t.normal()) return t;
    }
  }

  // Destructor-free ground term.
  Term constructor(int depth, const std::vector<std::string>& pool) {
    if (depth <= 1 || coin(0.3)) return name(pool);
    switch (below(6)) {
      case 0:
      case 1: return Term::app(Sym::Pair, constructor(depth - 1, pool), constructor(depth - 1, pool));
      case 2:
        return Term::app(Sym::Enc, constructor(depth - 1, pool), constructor(depth - 1, pool),
                         name(pool));
      case 3:
        return Term::app(Sym::Enca, constructor(depth - 1, pool),
                         coin(0.7) ? Term::app(Sym::Pub, name(pool)) : name(pool), name(pool));
      case 4:
        return Term::app(Sym::Sign, constructor(depth - 1, pool),
                         coin(0.7) ? Term::app(Sym::Priv, name(pool)) : name(pool));
      default: return Term::app(coin(0.5) ? Sym::Pub : Sym::Priv, name(pool));
    }
  }

  // Up to `bindings` destructor-free bindings over a small name pool; a random part of the
  // pool is restricted.
  Frame frame(int bindings, int depth, const std::vector<std::string>& pool) {
    Frame f;
    for (const std::string& n : pool) {
      if (coin(0.6)) f.restricted.insert(n);
    }
    int n = 1 + below(bindings);
    for (int i = 0; i < n; ++i) {
      f.bindings.emplace_back("x" + std::to_string(i + 1), constructor(depth, pool));
    }
    return f;
  }

  // Frames in the shape of the passive theorem: s only under agent encryptions with distinct
  // restricted randomness, keys never mention s, no destructors.
  Frame wellformed(int bindings) {
    Frame f;
    f.restricted = {"s", "k1", "k2", "n1"};
    int fresh = 0;
    int n = 1 + below(bindings);
    for (int i = 0; i < n; ++i) {
      f.bindings.emplace_back("x" + std::to_string(i + 1), wf_term(3, f, fresh));
    }
    return f;
  }

 private:
  Term wf_key() {
    static const std::vector<std::string> keys = {"k1", "k2", "a"};
    return name(keys);
  }

  Term wf_plain(int depth, Frame& f, int& fresh) {
    static const std::vector<std::string> atoms = {"s", "s", "n1", "a", "b", "k2"};
    if (depth <= 1 || coin(0.3)) return name(atoms);
    if (coin(0.5)) return Term::app(Sym::Pair, wf_plain(depth - 1, f, fresh), wf_plain(depth - 1, f, fresh));
    if (coin(0.5)) return wf_cipher(depth - 1, f, fresh);
    return Term::app(Sym::Sign, wf_plain(depth - 1, f, fresh), Term::app(Sym::Priv, wf_key()));
  }

  Term wf_cipher(int depth, Frame& f, int& fresh) {
    std::string r = "r" + std::to_string(++fresh);
    f.restricted.insert(r);
    if (coin(0.7)) return Term::app(Sym::Enc, wf_plain(depth, f, fresh), wf_key(), Term::name(r));
    return Term::app(Sym::Enca, wf_plain(depth, f, fresh), Term::app(Sym::Pub, wf_key()),
                     Term::name(r));
  }

  Term wf_term(int depth, Frame& f, int& fresh) {
    static const std::vector<std::string> atoms = {"n1", "a", "b", "k2"};
    switch (below(5)) {
      case 0: return name(atoms);
      case 1: return Term::app(Sym::Pub, wf_key());
      case 2: return Term::app(Sym::Pair, wf_term(depth - 1, f, fresh), wf_cipher(depth - 1, f, fresh));
      default: return wf_cipher(depth, f, fresh);
    }
  }

  std::mt19937_64 rng_;
};

// Frame subterms, restricted names, a few pairs of those and one unrelated term.
inline std::vector<Term> deduction_targets(const Frame& f, Gen& g, const std::vector<std::string>& pool) {
  TermSet subs;
  for (const auto& [h, t] : f.bindings) collect_subterms(t, subs);
  std::vector<Term> out(subs.begin(), subs.end());
  for (const std::string& n : f.restricted) out.push_back(Term::name(n));
  for (int i = 0; i < 4 && !out.empty(); ++i) out.push_back(Term::app(Sym::Pair, g.pick(out), g.pick(out)));
  out.push_back(g.constructor(3, pool));
  return out;
}

// ---- deduction oracle ----
//
// Enumerates recipes by size, keeping one recipe per value. For destructor-free frames and
// targets a value can only help if it is a subterm of a frame term or of the target, the
// public key of one, or ok: every rule returns a subterm of its first argument or ok, and its
// other arguments must equal frame subterms. Other values are dropped so that size 7 stays
// cheap.
class BruteDeduce {
 public:
  BruteDeduce(const Frame& f, const Term& target, int max_size) {
    TermSet relevant;
    for (const auto& [h, t] : f.bindings) collect_subterms(normalize(t), relevant);
    collect_subterms(target, relevant);
    TermSet keys;
    for (const Term& t : relevant) keys.insert(Term::app(Sym::Pub, t));
    relevant.insert(keys.begin(), keys.end());
    relevant.insert(Term::name("ok"));

    auto add = [&](const Term& v, const Term& recipe, int size) {
      if (!relevant.count(v) || best_.count(v)) return;
      best_.emplace(v, std::make_pair(recipe, size));
      by_size_[static_cast<size_t>(size)].push_back(v);
    };
    by_size_.resize(static_cast<size_t>(max_size) + 1);
    for (const auto& [h, t] : f.bindings) add(normalize(t), Term::var(h), 1);
    std::set<std::string> names = f.free_names();
    for (const std::string& n : free_names(target)) names.insert(n);
    names.insert("ok");
    for (const std::string& n : names) {
      if (!f.restricted.count(n)) add(Term::name(n), Term::name(n), 1);
    }
    for (int size = 2; size <= max_size; ++size) {
      for (int fi = 0; fi < kNumSyms; ++fi) {
        Sym sym = static_cast<Sym>(fi);
        if (sym == Sym::Priv) continue;
        std::vector<Term> vals;
        std::vector<Term> recs;
        combine(sym, arity(sym), size - 1, vals, recs, [&](const std::vector<Term>& vs,
                                                           const std::vector<Term>& rs) {
          Term r = Term::app(sym, rs);
          add(normalize(Term::app(sym, vs)), r, size);
        });
      }
    }
  }

  std::optional<Term> recipe(const Term& v) const {
    auto it = best_.find(v);
    if (it == best_.end()) return std::nullopt;
    return it->second.first;
  }

 private:
  template <class F>
  void combine(Sym sym, int left, int budget, std::vector<Term>& vals, std::vector<Term>& recs,
               const F& emit) {
    if (left == 0) {
      if (budget == 0) emit(vals, recs);
      return;
    }
    for (int s = 1; s <= budget - (left - 1); ++s) {
      for (const Term& v : by_size_[static_cast<size_t>(s)]) {
        vals.push_back(v);
        recs.push_back(best_.at(v).first);
        combine(sym, left - 1, budget - s, vals, recs, emit);
        vals.pop_back();
        recs.pop_back();
      }
    }
  }

  std::map<Term, std::pair<Term, int>> best_;
  std::vector<std::vector<Term>> by_size_;
};

// ---- equivalence oracle ----
//
// Every recipe of depth <= 2 over the handles, the free names, ok and one fresh name, built
// explicitly. The frames are equivalent on these tests iff the value classes of both frames
// induce the same partition of the recipes.
inline Frame rename_restricted(const Frame& f, const std::string& tag) {
  std::map<std::string, std::string> ren;
  for (const std::string& n : f.restricted) ren[n] = n + tag;
  Frame out;
  for (const auto& [n, m] : ren) out.restricted.insert(m);
  for (const auto& [h, t] : f.bindings) out.bindings.emplace_back(h, rename_names(t, ren));
  return out;
}

inline std::optional<std::pair<Term, Term>> naive_distinguish(const Frame& g1, const Frame& g2,
                                                              int depth) {
  Frame f1 = rename_restricted(g1, "#1");
  Frame f2 = rename_restricted(g2, "#2");
  std::set<std::string> names = f1.free_names();
  for (const std::string& n : f2.free_names()) names.insert(n);
  names.insert("ok");
  names.insert("fresh#");
  std::vector<Term> level;
  for (const auto& [h, t] : f1.bindings) level.push_back(Term::var(h));
  for (const std::string& n : names) {
    level.push_back(Term::name(n));
  }
  std::vector<Term> all = level;
  for (int d = 2; d <= depth; ++d) {
    std::vector<Term> next;
    for (int fi = 0; fi < kNumSyms; ++fi) {
      Sym sym = static_cast<Sym>(fi);
      if (sym == Sym::Priv) continue;
      int n = arity(sym);
      std::vector<size_t> idx(static_cast<size_t>(n), 0);
      while (true) {
        std::vector<Term> args;
        for (size_t k : idx) args.push_back(all[k]);
        next.push_back(Term::app(sym, std::move(args)));
        int k = n - 1;
        while (k >= 0 && ++idx[static_cast<size_t>(k)] == all.size()) idx[static_cast<size_t>(k--)] = 0;
        if (k < 0) break;
      }
    }
    all.insert(all.end(), next.begin(), next.end());
  }
  Substitution s1 = f1.sigma();
  Substitution s2 = f2.sigma();
  std::map<Term, std::pair<Term, Term>> by1;  // value in f1 -> (value in f2, recipe)
  std::map<Term, std::pair<Term, Term>> by2;
  for (const Term& r : all) {
    Term v1 = normalize(substitute(s1, r));
    Term v2 = normalize(substitute(s2, r));
    auto [i1, new1] = by1.emplace(v1, std::make_pair(v2, r));
    if (!new1 && i1->second.first != v2) return std::make_pair(i1->second.second, r);
    auto [i2, new2] = by2.emplace(v2, std::make_pair(v1, r));
    if (!new2 && i2->second.first != v1) return std::make_pair(i2->second.second, r);
  }
  return std::nullopt;
}

// Positions of s with an encryption whose plaintext lies above them.
inline bool encryption_plaintext_above(const Term& t, const Position& p) {
  for (size_t len = 0; len + 1 <= p.size(); ++len) {
    Position q(p.begin(), p.begin() + static_cast<long>(len));
    Term u = subterm_at(t, q);
    if (u.is_app() && is_encryption(u.sym()) && p[len] == 1) return true;
  }
  return false;
}

inline std::vector<Position> name_positions(const Term& t, const std::string& s) {
  std::vector<Position> out;
  for (const Position& p : positions(t)) {
    Term u = subterm_at(t, p);
    if (u.is_name() && u.id() == s) out.push_back(p);
  }
  return out;
}

// Same normalized bindings and restricted names, handles ignored.
inline bool same_frame_up_to_handles(const Frame& a, const Frame& b) {
  if (a.bindings.size() != b.bindings.size() || a.restricted != b.restricted) return false;
  for (size_t i = 0; i < a.bindings.size(); ++i) {
    if (normalize(a.bindings[i].second) != normalize(b.bindings[i].second)) return false;
  }
  return true;
}

}  // namespace testsupport
