#include "strongsec/frame.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "strongsec/error.hpp"
#include "strongsec/rewrite.hpp"

namespace strongsec {

std::set<std::string> Frame::domain() const {
  std::set<std::string> d;
  for (const auto& [h, t] : bindings) d.insert(h);
  return d;
}

Substitution Frame::sigma() const {
  Substitution s;
  for (const auto& [h, t] : bindings) s[h] = t;
  return s;
}

std::set<std::string> Frame::names() const {
  std::set<std::string> n = restricted;
  for (const auto& [h, t] : bindings) {
    auto fn = strongsec::free_names(t);
    n.insert(fn.begin(), fn.end());
  }
  return n;
}

std::set<std::string> Frame::free_names() const {
  std::set<std::string> n;
  for (const auto& [h, t] : bindings) {
    for (const auto& x : strongsec::free_names(t)) {
      if (!restricted.count(x)) n.insert(x);
    }
  }
  return n;
}

// ---- frame files ----

namespace {

std::pair<int, int> line_col(std::string_view text, size_t off) {
  int line = 1;
  int col = 1;
  for (size_t i = 0; i < off && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string strip_comments(std::string_view text) {
  std::string out(text);
  size_t i = 0;
  while ((i = out.find("//", i)) != std::string::npos) {
    size_t e = out.find('\n', i);
    if (e == std::string::npos) e = out.size();
    std::fill(out.begin() + static_cast<long>(i), out.begin() + static_cast<long>(e), ' ');
  }
  return out;
}

bool is_ident(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '#' ||
           c == '{' || c == '}' || c == '.';
  });
}

std::string trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

Frame parse_frame(std::string_view raw) {
  std::string text = strip_comments(raw);
  auto fail = [&](const std::string& msg, size_t off) {
    auto [l, c] = line_col(text, off);
    throw ParseError(msg, l, c);
  };
  size_t i = text.find_first_not_of(" \t\r\n");
  if (i == std::string::npos || text.compare(i, 5, "frame") != 0) fail("expected 'frame'", i);
  i = text.find_first_not_of(" \t\r\n", i + 5);
  if (i == std::string::npos || text[i] != '{') fail("expected '{'", i);
  size_t close = text.rfind('}');
  if (close == std::string::npos || close < i) fail("expected '}'", text.size());
  if (text.find_first_not_of(" \t\r\n", close + 1) != std::string::npos) {
    fail("trailing input after frame", close + 1);
  }
  Frame f;
  std::set<std::string> no_vars;
  size_t pos = i + 1;
  while (pos < close) {
    size_t semi = text.find(';', pos);
    if (semi == std::string::npos || semi > close) semi = close;
    std::string stmt = trim(std::string_view(text).substr(pos, semi - pos));
    size_t stmt_off = text.find_first_not_of(" \t\r\n", pos);
    if (!stmt.empty()) {
      if (stmt.rfind("restrict", 0) == 0 &&
          (stmt.size() == 8 || std::isspace(static_cast<unsigned char>(stmt[8])))) {
        std::string rest = stmt.substr(8);
        size_t a = 0;
        while (a <= rest.size()) {
          size_t b = rest.find(',', a);
          if (b == std::string::npos) b = rest.size();
          std::string n = trim(std::string_view(rest).substr(a, b - a));
          if (!n.empty()) {
            if (!is_ident(n) || sym_from_name(n)) fail("bad restricted name '" + n + "'", stmt_off);
            f.restricted.insert(n);
          }
          a = b + 1;
        }
      } else {
        size_t arrow = stmt.find("->");
        if (arrow == std::string::npos) fail("expected 'handle -> term'", stmt_off);
        std::string h = trim(std::string_view(stmt).substr(0, arrow));
        if (!is_ident(h) || sym_from_name(h)) fail("bad handle '" + h + "'", stmt_off);
        for (const auto& [k, v] : f.bindings) {
          if (k == h) fail("duplicate handle '" + h + "'", stmt_off);
        }
        std::string body = stmt.substr(arrow + 2);
        ParseOptions opts;
        opts.vars = &no_vars;
        try {
          f.bindings.emplace_back(h, parse_term(body, opts));
        } catch (const ParseError& e) {
          auto [l, c] = line_col(text, stmt_off);
          throw ParseError(std::string("in binding of ") + h + ": " + e.what(), l, c);
        }
      }
    }
    pos = semi + 1;
  }
  for (const auto& [h, t] : f.bindings) {
    if (f.restricted.count(h)) fail("handle '" + h + "' is also a restricted name", 0);
  }
  return f;
}

std::string to_string(const Frame& f, Style style) {
  std::string out = style == Style::Unicode ? "ν" : "new ";
  bool first = true;
  for (const auto& n : f.restricted) {
    if (!first) out += ",";
    out += n;
    first = false;
  }
  out += ".{";
  first = true;
  for (const auto& [h, t] : f.bindings) {
    if (!first) out += ", ";
    out += h + (style == Style::Unicode ? "↦" : "->") + to_string(t, style);
    first = false;
  }
  return out + "}";
}

Term evaluate(const Frame& f, const Term& recipe) { return normalize(substitute(f.sigma(), recipe)); }

// ---- saturation ----

KnowledgeSet::KnowledgeSet(const Frame& f) : frame_(f) {
  for (const auto& [h, t] : f.bindings) add(normalize(t), Term::var(h));
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < entries_.size(); ++i) {
      Term v = entries_[i].value;
      Term r = entries_[i].recipe;
      if (!v.is_app()) continue;
      switch (v.sym()) {
        case Sym::Pair:
          changed |= add(v.arg(1), Term::app(Sym::Proj1, r));
          changed |= add(v.arg(2), Term::app(Sym::Proj2, r));
          break;
        case Sym::Sign:
          changed |= add(v.arg(1), Term::app(Sym::Retrieve, r));
          break;
        case Sym::Enc:
          if (!index_.count(v.arg(1))) {
            if (auto k = deduce_nf(v.arg(2))) changed |= add(v.arg(1), Term::app(Sym::Dec, r, *k));
          }
          break;
        case Sym::Enca:
          if (!index_.count(v.arg(1)) && v.arg(2).is_app(Sym::Pub)) {
            Term sk = Term::app(Sym::Priv, v.arg(2).arg(1));
            if (auto k = deduce_nf(sk)) changed |= add(v.arg(1), Term::app(Sym::Deca, r, *k));
          }
          break;
        default:
          break;
      }
    }
  }
}

bool KnowledgeSet::add(const Term& value, const Term& recipe) {
  if (index_.count(value)) return false;
  index_.emplace(value, entries_.size());
  entries_.push_back({value, recipe});
  memo_.clear();
  return true;
}

const Term* KnowledgeSet::recipe_for(const Term& value) const {
  auto it = index_.find(value);
  return it == index_.end() ? nullptr : &entries_[it->second].recipe;
}

std::optional<Term> KnowledgeSet::deduce(const Term& m) const {
  if (!m.ground()) return std::nullopt;
  return deduce_nf(normalize(m));
}

std::optional<Term> KnowledgeSet::deduce_nf(const Term& m) const {
  auto it = memo_.find(m);
  if (it != memo_.end()) return it->second;
  std::optional<Term> res;
  if (m.is_name() && !frame_.restricted.count(m.id())) {
    res = m;
  } else if (const Term* r = recipe_for(m)) {
    res = *r;
  } else if (m.is_app() && m.sym() != Sym::Priv) {
    std::vector<Term> args;
    bool ok = true;
    for (const Term& a : m.args()) {
      auto ra = deduce_nf(a);
      if (!ra) {
        ok = false;
        break;
      }
      args.push_back(*ra);
    }
    if (ok) res = Term::app(m.sym(), std::move(args));
  }
  memo_.emplace(m, res);
  return res;
}

KnowledgeSet saturate(const Frame& f) { return KnowledgeSet(f); }

std::optional<Term> deduce(const Frame& f, const Term& m) { return KnowledgeSet(f).deduce(m); }

// ---- tests and equivalence ----

namespace {

// Rename restricted names of f that collide with `avoid` to #r0, #r1, ...
Frame rename_apart(const Frame& f, const std::set<std::string>& avoid, int* counter) {
  std::map<std::string, std::string> ren;
  std::set<std::string> used = f.names();
  used.insert(avoid.begin(), avoid.end());
  for (const auto& n : f.restricted) {
    if (!avoid.count(n)) continue;
    std::string fresh;
    do {
      fresh = "#r" + std::to_string((*counter)++);
    } while (used.count(fresh));
    used.insert(fresh);
    ren[n] = fresh;
  }
  if (ren.empty()) return f;
  Frame g;
  for (const auto& n : f.restricted) g.restricted.insert(ren.count(n) ? ren[n] : n);
  for (const auto& [h, t] : f.bindings) g.bindings.emplace_back(h, rename_names(t, ren));
  return g;
}

}  // namespace

bool passes_test(const Frame& f, const Term& u, const Term& v) {
  std::set<std::string> fn = free_names(u);
  for (const auto& n : free_names(v)) fn.insert(n);
  int counter = 0;
  Frame g = rename_apart(f, fn, &counter);
  Substitution s = g.sigma();
  return normalize(substitute(s, u)) == normalize(substitute(s, v));
}

namespace {

struct Pair2 {
  Frame f1;
  Frame f2;
  Substitution s1;
  Substitution s2;
  std::vector<Term> atoms;
};

std::string fresh_name(const std::set<std::string>& used, const std::string& stem) {
  for (int i = 0;; ++i) {
    std::string n = stem + std::to_string(i);
    if (!used.count(n)) return n;
  }
}

Pair2 prepare(const Frame& a, const Frame& b) {
  if (a.domain() != b.domain()) throw DomainMismatch("frames have different domains");
  std::set<std::string> fa = a.free_names();
  std::set<std::string> fb = b.free_names();
  std::set<std::string> both = fa;
  both.insert(fb.begin(), fb.end());
  both.insert("ok");
  int counter = 0;
  Pair2 p;
  p.f1 = rename_apart(a, both, &counter);
  p.f2 = rename_apart(b, both, &counter);
  p.s1 = p.f1.sigma();
  p.s2 = p.f2.sigma();
  for (const auto& [h, t] : p.f1.bindings) p.atoms.push_back(Term::var(h));
  for (const auto& n : both) p.atoms.push_back(Term::name(n));
  std::set<std::string> used = p.f1.names();
  for (const auto& n : p.f2.names()) used.insert(n);
  used.insert("ok");
  p.atoms.push_back(Term::name(fresh_name(used, "att")));
  return p;
}

int var_count(const Term& t) { return static_cast<int>(variables(t).size()); }

// Orders a distinguishing pair for display: larger side first.
std::pair<Term, Term> orient(const Term& a, const Term& b) {
  auto key = [](const Term& t) { return std::make_tuple(-t.size(), -var_count(t), to_string(t)); };
  if (key(b) < key(a)) return {b, a};
  return {a, b};
}

struct Cand {
  Term recipe;
  Term v1;
  Term v2;
  std::string text;
};

}  // namespace

EquivalenceVerdict static_equiv(const Frame& a, const Frame& b, int recipe_depth) {
  Pair2 p = prepare(a, b);
  std::vector<Term> base = p.atoms;
  std::set<Term> seen(base.begin(), base.end());
  auto push = [&](const Term& r) {
    if (seen.insert(r).second) base.push_back(r);
  };
  for (const Frame* f : {&p.f1, &p.f2}) {
    KnowledgeSet ks(*f);
    for (const auto& e : ks.entries()) push(e.recipe);
    TermSet subs;
    for (const auto& [h, t] : f->bindings) collect_subterms(normalize(t), subs);
    for (const Term& u : subs) {
      if (auto r = ks.deduce(u)) push(*r);
    }
    // arguments for check and deca tests one layer up
    Term ok = Term::name("ok");
    for (const auto& e : ks.entries()) {
      const Term& v = e.value;
      if (v.is_app(Sym::Sign) && v.arg(2).is_app(Sym::Priv)) {
        if (auto pk = ks.deduce(Term::app(Sym::Pub, v.arg(2).arg(1)))) push(*pk);
      } else if (v.is_app(Sym::Priv)) {
        auto pk = ks.deduce(Term::app(Sym::Pub, v.arg(1)));
        if (!pk) continue;
        push(*pk);
        push(Term::app(Sym::Sign, ok, e.recipe));
        push(Term::app(Sym::Enca, ok, *pk, ok));
      }
    }
  }
  std::vector<Term> cands = base;
  if (recipe_depth >= 1) {
    for (int fi = 0; fi < kNumSyms; ++fi) {
      Sym f = static_cast<Sym>(fi);
      if (f == Sym::Priv) continue;
      int n = arity(f);
      std::vector<size_t> idx(static_cast<size_t>(n), 0);
      while (true) {
        std::vector<Term> args;
        for (size_t k : idx) args.push_back(base[k]);
        Term r = Term::app(f, std::move(args));
        if (seen.insert(r).second) cands.push_back(r);
        int k = n - 1;
        while (k >= 0 && ++idx[static_cast<size_t>(k)] == base.size()) {
          idx[static_cast<size_t>(k)] = 0;
          --k;
        }
        if (k < 0) break;
      }
    }
  }
  std::vector<Cand> cs;
  cs.reserve(cands.size());
  for (const Term& r : cands) {
    cs.push_back({r, normalize(substitute(p.s1, r)), normalize(substitute(p.s2, r)), to_string(r)});
  }
  std::sort(cs.begin(), cs.end(), [](const Cand& x, const Cand& y) {
    if (x.recipe.depth() != y.recipe.depth()) return x.recipe.depth() < y.recipe.depth();
    if (x.recipe.size() != y.recipe.size()) return x.recipe.size() < y.recipe.size();
    return x.text < y.text;
  });

  EquivalenceVerdict verdict;
  verdict.candidates = cs.size();
  using Score = std::tuple<int, int, std::string>;
  std::optional<Score> best;
  auto consider = [&](size_t i, size_t j) {
    auto [u, v] = orient(cs[i].recipe, cs[j].recipe);
    Score sc{std::max(u.depth(), v.depth()), u.size() + v.size(),
             to_string(u) + "|" + to_string(v)};
    if (!best || sc < *best) {
      best = sc;
      verdict.witness = std::make_pair(u, v);
    }
  };
  for (int side = 0; side < 2; ++side) {
    // group by the value in one frame, partition by the value in the other
    std::unordered_map<Term, std::vector<size_t>> groups;
    for (size_t i = 0; i < cs.size(); ++i) groups[side == 0 ? cs[i].v1 : cs[i].v2].push_back(i);
    for (auto& [val, members] : groups) {
      if (members.size() < 2) continue;
      size_t first = members[0];
      const Term& other = side == 0 ? cs[first].v2 : cs[first].v1;
      for (size_t k = 1; k < members.size(); ++k) {
        size_t j = members[k];
        const Term& oj = side == 0 ? cs[j].v2 : cs[j].v1;
        if (oj != other) {
          consider(first, j);
          break;
        }
      }
    }
  }
  verdict.equivalent = !verdict.witness.has_value();
  return verdict;
}

// ---- exhaustive oracle ----
//
// A recipe whose root does not reduce in either frame has the literal value f(v̄) in both,
// so two such recipes agree in one frame iff their arguments do. Only atoms and recipes
// that reduce at the root in some frame ("explicit" classes) need to be stored; the rest
// are found on demand by looking up argument classes.

namespace {

class BruteEquiv {
 public:
  BruteEquiv(const Pair2& p, int depth) : p_(p), depth_(depth) {}

  EquivalenceVerdict run() {
    for (const Term& a : p_.atoms) {
      if (insert(a, 1)) return done();
    }
    for (int k = 2; k <= depth_; ++k) {
      size_t n = classes_.size();
      for (size_t i = 0; i < n; ++i) {
        if (classes_[i].depth > k - 1) continue;
        for (int side = 0; side < 2; ++side) {
          if (expand(i, side, k)) return done();
        }
      }
    }
    // explicit classes against implicit ones of depth <= depth_
    for (size_t i = 0; i < classes_.size(); ++i) {
      for (int side = 0; side < 2; ++side) {
        const Cls& c = classes_[i];
        const Term& w = side == 0 ? c.v1 : c.v2;
        auto s = structural(w, side, depth_);
        if (!s) continue;
        const Term& other = side == 0 ? c.v2 : c.v1;
        const Term& sother = side == 0 ? s->v2 : s->v1;
        if (other != sother) {
          witness_ = orient(c.recipe, s->recipe);
          return done();
        }
      }
    }
    return done();
  }

 private:
  struct Cls {
    Term recipe;
    Term v1;
    Term v2;
    int depth;
  };

  EquivalenceVerdict done() {
    EquivalenceVerdict v;
    v.equivalent = !witness_.has_value();
    v.witness = witness_;
    v.candidates = classes_.size();
    return v;
  }

  // Returns true when a distinguishing pair was found.
  bool insert(const Term& recipe, int depth) {
    Term v1 = normalize(substitute(p_.s1, recipe));
    Term v2 = normalize(substitute(p_.s2, recipe));
    auto i1 = by1_.find(v1);
    auto i2 = by2_.find(v2);
    if (i1 != by1_.end() && classes_[i1->second].v2 != v2) {
      witness_ = orient(classes_[i1->second].recipe, recipe);
      return true;
    }
    if (i2 != by2_.end() && classes_[i2->second].v1 != v1) {
      witness_ = orient(classes_[i2->second].recipe, recipe);
      return true;
    }
    depth = std::min(depth, recipe.depth());
    if (i1 != by1_.end()) {
      Cls& c = classes_[i1->second];
      if (depth < c.depth) {
        c.depth = depth;
        c.recipe = recipe;
      }
      return false;
    }
    by1_.emplace(v1, classes_.size());
    by2_.emplace(v2, classes_.size());
    classes_.push_back({recipe, v1, v2, depth});
    return false;
  }

  // Some recipe of depth <= k with value w in frame `side`.
  std::optional<Cls> lookup(const Term& w, int side, int k) {
    if (k < 1) return std::nullopt;
    auto& m = side == 0 ? by1_ : by2_;
    auto it = m.find(w);
    if (it != m.end() && classes_[it->second].depth <= k) return classes_[it->second];
    return structural(w, side, k);
  }

  std::optional<Cls> structural(const Term& w, int side, int k) {
    if (k < 2 || !w.is_app() || w.sym() == Sym::Priv) return std::nullopt;
    std::vector<Term> rs;
    std::vector<Term> o;
    int d = 0;
    for (const Term& a : w.args()) {
      auto c = lookup(a, side, k - 1);
      if (!c) return std::nullopt;
      rs.push_back(c->recipe);
      o.push_back(side == 0 ? c->v2 : c->v1);
      d = std::max(d, c->depth);
    }
    Term other = normalize(Term::app(w.sym(), std::move(o)));
    Term r = Term::app(w.sym(), std::move(rs));
    if (side == 0) return Cls{r, w, other, d + 1};
    return Cls{r, other, w, d + 1};
  }

  bool try_top(const Term& recipe, int k) {
    if (recipe.depth() > k) return false;
    return insert(recipe, k);
  }

  // Root-reducing applications in frame `side` whose opened argument is class i.
  bool expand(size_t i, int side, int k) {
    Cls c = classes_[i];
    const Term v = side == 0 ? c.v1 : c.v2;
    if (!v.is_app()) return false;
    const Term& r = c.recipe;
    Term ok = Term::name("ok");
    switch (v.sym()) {
      case Sym::Pair:
        return try_top(Term::app(Sym::Proj1, r), k) || try_top(Term::app(Sym::Proj2, r), k);
      case Sym::Sign: {
        if (try_top(Term::app(Sym::Retrieve, r), k)) return true;
        const Term& key = v.arg(2);
        if (!key.is_app(Sym::Priv)) return false;
        auto m = lookup(v.arg(1), side, k - 1);
        auto pk = lookup(Term::app(Sym::Pub, key.arg(1)), side, k - 1);
        if (m && pk) return try_top(Term::app(Sym::Check, m->recipe, r, pk->recipe), k);
        return false;
      }
      case Sym::Enc: {
        auto key = lookup(v.arg(2), side, k - 1);
        if (key) return try_top(Term::app(Sym::Dec, r, key->recipe), k);
        return false;
      }
      case Sym::Enca: {
        if (!v.arg(2).is_app(Sym::Pub)) return false;
        auto sk = lookup(Term::app(Sym::Priv, v.arg(2).arg(1)), side, k - 1);
        if (sk) return try_top(Term::app(Sym::Deca, r, sk->recipe), k);
        return false;
      }
      case Sym::Priv: {
        // A private key from the frame opens attacker-built signatures and ciphers.
        auto pk = lookup(Term::app(Sym::Pub, v.arg(1)), side, k - 1);
        if (!pk) return false;
        Term sig = Term::app(Sym::Sign, ok, r);
        if (try_top(Term::app(Sym::Check, ok, sig, pk->recipe), k)) return true;
        Term cip = Term::app(Sym::Enca, ok, pk->recipe, ok);
        return try_top(Term::app(Sym::Deca, cip, r), k);
      }
      default:
        return false;
    }
  }

  const Pair2& p_;
  int depth_;
  std::vector<Cls> classes_;
  std::unordered_map<Term, size_t> by1_;
  std::unordered_map<Term, size_t> by2_;
  std::optional<std::pair<Term, Term>> witness_;
};

}  // namespace

EquivalenceVerdict brute_equiv(const Frame& a, const Frame& b, int depth) {
  Pair2 p = prepare(a, b);
  BruteEquiv be(p, depth);
  return be.run();
}

Frame instantiate(const Frame& f, const std::string& s, const Term& m) {
  if (occurs_sym(m, Sym::Priv)) throw NotPublic("instance " + to_string(m) + " uses priv");
  if (!m.ground()) throw NotPublic("instance " + to_string(m) + " is not closed");
  for (const auto& n : free_names(m)) {
    if (f.restricted.count(n)) throw NameClash("instance mentions restricted name " + n);
  }
  Frame g;
  g.restricted = f.restricted;
  for (const auto& [h, t] : f.bindings) g.bindings.emplace_back(h, replace_name(t, s, m));
  return g;
}

// ---- well-formedness ----

bool FrameReport::fails(int condition) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.condition == condition; });
}

namespace {

struct Occ {
  std::string handle;
  Position pos;
};

std::map<std::string, std::vector<Occ>> name_occurrences(const Frame& f, bool normal) {
  std::map<std::string, std::vector<Occ>> occ;
  for (const auto& [h, t0] : f.bindings) {
    Term t = normal ? normalize(t0) : t0;
    for (const Position& p : positions(t)) {
      Term u = subterm_at(t, p);
      if (u.is_name()) occ[u.id()].push_back({h, p});
    }
  }
  return occ;
}

// The randomness of the encryption at (h, q) is used nowhere except as the third argument
// of that same encryption.
bool probabilistic(const Frame& f, const std::map<std::string, std::vector<Occ>>& occ,
                   const Term& cipher, bool normal, std::string* why) {
  const Term& r = cipher.arg(3);
  if (!r.is_name()) return true;
  auto it = occ.find(r.id());
  if (it == occ.end()) return true;
  std::map<std::string, Term> terms;
  for (const auto& [h, t] : f.bindings) terms[h] = normal ? normalize(t) : t;
  for (const Occ& o : it->second) {
    if (o.pos.empty() || o.pos.back() != 3) {
      *why = "randomness " + r.id() + " also occurs at " + o.handle + ":" + position_string(o.pos);
      return false;
    }
    Position parent(o.pos.begin(), o.pos.end() - 1);
    Term enc = subterm_at(terms[o.handle], parent);
    if (enc != cipher) {
      *why = "randomness " + r.id() + " is shared with " + o.handle + ":" +
             position_string(parent);
      return false;
    }
  }
  return true;
}

}  // namespace

FrameReport check_well_formed_frame(const Frame& f, const std::string& s) {
  FrameReport rep;
  rep.definition = "def1";
  auto occ = name_occurrences(f, false);
  for (const auto& [h, t] : f.bindings) {
    for (const Position& p : positions(t)) {
      Term u = subterm_at(t, p);
      if (!u.is_app()) continue;
      Sym g = u.sym();
      if (is_encryption(g)) {
        const Term& r = u.arg(3);
        if (!r.is_name() || !f.restricted.count(r.id()) || r.id() == s) {
          rep.violations.push_back(
              {1, h, p, "encryption " + to_string(u) + " is not an agent encryption"});
        } else {
          std::string why;
          if (!probabilistic(f, occ, u, false, &why)) {
            rep.violations.push_back({1, h, p, "encryption is not probabilistic: " + why});
          }
        }
      }
      std::vector<int> keyish;
      if (is_encryption(g)) keyish = {2, 3};
      if (g == Sym::Sign) keyish = {2};
      if (g == Sym::Pub || g == Sym::Priv) keyish = {1};
      for (int k : keyish) {
        if (occurs_name(u.arg(k), s)) {
          rep.violations.push_back({2, h, concat(p, {k}),
                                    s + " occurs in key or randomness position of " + to_string(u)});
        }
      }
      if (is_destructor(g)) {
        rep.violations.push_back({3, h, p, std::string("destructor ") + sym_name(g) + " occurs"});
      }
    }
  }
  if (rep.fails(2)) {
    rep.warnings.push_back(
        "secret in key position: rejected by the definition, although a cipher without a "
        "verifiable part may still keep the secret strong");
  }
  return rep;
}

FrameReport check_extended_well_formed(const Frame& f, const std::string& s) {
  FrameReport rep;
  rep.definition = "def2";
  auto occ = name_occurrences(f, true);
  for (const auto& [h, t0] : f.bindings) {
    if (!t0.normal()) {
      auto st = reduce_once(t0);
      rep.violations.push_back({1, h, st->second.redex_position, "binding is not in normal form"});
    }
    Term t = normalize(t0);
    for (const Position& p : positions(t)) {
      Term u = subterm_at(t, p);
      if (u.is_app() && is_encryption(u.sym()) && u.arg(3).is_name() &&
          f.restricted.count(u.arg(3).id())) {
        std::string why;
        if (!probabilistic(f, occ, u, true, &why)) {
          rep.violations.push_back({2, h, p, "agent encryption is not probabilistic: " + why});
        }
      }
      if (!(u.is_name() && u.id() == s)) continue;
      // lowest agent encryption plaintext-above this occurrence
      std::optional<Position> q0;
      for (size_t len = p.size(); len-- > 0;) {
        Position q(p.begin(), p.begin() + static_cast<long>(len));
        Term e = subterm_at(t, q);
        if (p[len] == 1 && e.is_app() && is_encryption(e.sym()) && e.arg(3).is_name() &&
            f.restricted.count(e.arg(3).id()) && e.arg(3).id() != s) {
          q0 = q;
          break;
        }
      }
      if (!q0) {
        rep.violations.push_back(
            {3, h, p, "no agent encryption plaintext-above this occurrence of " + s});
        continue;
      }
      for (size_t len = q0->size() + 1; len < p.size(); ++len) {
        Position q(p.begin(), p.begin() + static_cast<long>(len));
        Term e = subterm_at(t, q);
        if (!e.is_app(Sym::Pair) && !e.is_app(Sym::Sign)) {
          rep.violations.push_back(
              {4, h, q, "symbol between the protecting encryption and " + s + " is not a pair or sign"});
          break;
        }
      }
    }
  }
  return rep;
}

const char* to_string(PassiveStatus s) {
  switch (s) {
    case PassiveStatus::StrongSecrecyHolds: return "strong secrecy holds";
    case PassiveStatus::NotStronglySecret: return "not strongly secret";
    case PassiveStatus::NotWellFormed: return "not well-formed";
  }
  return "?";
}

PassiveReport check_passive_transfer(const Frame& f, const std::string& s,
                                     const std::vector<std::pair<Term, Term>>& samples,
                                     int depth) {
  PassiveReport rep;
  rep.frame_report = check_well_formed_frame(f, s);
  rep.warnings = rep.frame_report.warnings;
  if (!rep.frame_report.pass()) {
    rep.status = PassiveStatus::NotWellFormed;
    return rep;
  }
  KnowledgeSet ks(f);
  if (auto t = ks.deduce(Term::name(s))) {
    rep.status = PassiveStatus::NotStronglySecret;
    rep.secret_recipe = *t;
    std::set<std::string> used = f.names();
    for (const auto& v : variables(*t)) used.insert(v);
    std::string n1 = fresh_name(used, "n");
    used.insert(n1);
    std::string n2 = fresh_name(used, "n");
    rep.test = std::make_pair(*t, Term::name(n1));
    rep.instances = std::make_pair(Term::name(n1), Term::name(n2));
    return rep;
  }
  rep.status = PassiveStatus::StrongSecrecyHolds;
  for (const auto& [m1, m2] : samples) {
    Frame g1 = instantiate(f, s, m1);
    Frame g2 = instantiate(f, s, m2);
    rep.samples.push_back({m1, m2, static_equiv(g1, g2, depth)});
  }
  return rep;
}

}  // namespace strongsec
