#include "strongsec/esets.hpp"

#include <algorithm>
#include <cassert>

#include "strongsec/error.hpp"
#include "strongsec/rewrite.hpp"

namespace strongsec {

MarkedCipher make_marked(const Term& t, int generation,
                         const std::map<std::string, std::string>& origin) {
  return MarkedCipher{t, renumber_vars(rename_names(t, origin)), generation};
}

namespace {

struct Pruned {
  Term t;
  size_t consumed;
};

Term offpath_var(int index, const Position& r, size_t from, size_t to) {
  Position w{index};
  for (size_t k = from; k < to; ++k) w.push_back(r[k]);
  return Term::var("z_{" + position_string(w) + "}");
}

// The fresh variable for an off-path argument is indexed by that argument's index followed by
// the part of the path that pruning actually walked below the hop.
std::optional<Pruned> prune_from(const Term& n, const Position& r, size_t k) {
  if (k == r.size()) return Pruned{n, k};
  if (!n.is_app()) return std::nullopt;
  if (is_destructor(n.sym())) return Pruned{n, k};
  int i = r[k];
  if (n.sym() == Sym::Pair) {
    auto child = prune_from(n.arg(i), r, k + 1);
    if (!child) return std::nullopt;
    Term off = offpath_var(3 - i, r, k + 1, child->consumed);
    Term t = i == 1 ? Term::app(Sym::Pair, child->t, off) : Term::app(Sym::Pair, off, child->t);
    return Pruned{t, child->consumed};
  }
  if (n.sym() == Sym::Sign && i == 1) {
    auto child = prune_from(n.arg(1), r, k + 1);
    if (!child) return std::nullopt;
    return Pruned{Term::app(Sym::Sign, child->t, offpath_var(2, r, k + 1, child->consumed)),
                  child->consumed};
  }
  return std::nullopt;
}

Position prefix(const Position& p, size_t n) { return Position(p.begin(), p.begin() + n); }

void push_unique(std::vector<Term>& v, const Term& t) {
  if (std::find(v.begin(), v.end(), t) == v.end()) v.push_back(t);
}

bool has_canonical(const std::vector<MarkedCipher>& v, const Term& canonical) {
  return std::any_of(v.begin(), v.end(),
                     [&](const MarkedCipher& e) { return e.canonical == canonical; });
}

}  // namespace

std::optional<Term> prune(const Term& n, const Position& r) {
  auto res = prune_from(n, r, 0);
  if (!res) return std::nullopt;
  return res->t;
}

std::optional<std::pair<Term, Position>> f_ep(const Term& u, const Position& p) {
  if (!has_position(u, p) || subterm_at(u, p).is_app()) return std::nullopt;
  std::optional<size_t> q;
  Term cur = u;
  for (size_t k = 0; k < p.size(); ++k) {
    if (is_encryption(cur.sym())) q = k;
    cur = cur.arg(p[k]);
  }
  if (!q || p[*q] != 1) return std::nullopt;
  Term e = subterm_at(u, prefix(p, *q));
  Position rest(p.begin() + static_cast<long>(*q) + 1, p.end());
  auto m1 = prune(e.arg(1), rest);
  if (!m1) return std::nullopt;
  return std::make_pair(Term::app(e.sym(), *m1, e.arg(2), e.arg(3)), prefix(p, *q));
}

std::optional<std::pair<Term, Position>> f_dp(const Term& u, const Position& p) {
  if (!has_position(u, p)) return std::nullopt;
  std::optional<size_t> q, r;
  Term cur = u;
  for (size_t k = 0; k < p.size(); ++k) {
    if (is_destructor(cur.sym()) && cur.sym() != Sym::Check && !q) q = k;
    if (is_decryption(cur.sym())) r = k;
    cur = cur.arg(p[k]);
  }
  if (!q || !r) return std::nullopt;
  Position rp = prefix(p, *r);
  Term d = subterm_at(u, rp);
  Term v = replace_at(u, rp, Term::app(d.sym(), hole(), d.arg(2)));
  Position qp = prefix(p, *q);
  return std::make_pair(subterm_at(v, qp), qp);
}

std::optional<std::vector<Term>> chain_factors(const Term& d) {
  std::vector<Term> out;
  Term cur = d;
  while (!(cur.is_var() && cur.id() == kHole)) {
    std::vector<Sym> word;
    while (cur.is_app(Sym::Proj1) || cur.is_app(Sym::Proj2)) {
      word.push_back(cur.sym());
      cur = cur.arg(1);
    }
    if (!cur.is_app() || !is_decryption(cur.sym())) return std::nullopt;
    Term f = Term::app(cur.sym(), hole(), cur.arg(2));
    for (auto it = word.rbegin(); it != word.rend(); ++it) f = Term::app(*it, f);
    out.push_back(f);
    cur = cur.arg(1);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

Term plug(const Term& context, const Term& t) { return substitute({{kHole, t}}, context); }

bool meets(const Term& factor, const Term& e) {
  Term cur = factor;
  while (cur.is_app(Sym::Proj1) || cur.is_app(Sym::Proj2)) cur = cur.arg(1);
  if (!cur.is_app() || !is_decryption(cur.sym())) return false;
  return root_rule(Term::app(cur.sym(), e, cur.arg(2))).has_value();
}

bool reaches_marker(const Term& factor, const Term& e) {
  return meets(factor, e) && occurs_var(normalize(plug(factor, e)), kMarker);
}

Term opener(const Term& e) {
  if (!e.is_app() || !is_encryption(e.sym())) throw MalformedCipher("not an encryption");
  Term key = e.arg(2);
  Term o;
  if (e.sym() == Sym::Enc) {
    o = Term::app(Sym::Dec, hole(), key);
  } else {
    if (!key.is_app(Sym::Pub)) throw MalformedCipher("asymmetric key is not pub(_)");
    o = Term::app(Sym::Deca, hole(), Term::app(Sym::Priv, key.arg(1)));
  }
  Term cur = e.arg(1);
  while (!(cur.is_var() && cur.id() == kMarker)) {
    if (cur.is_app(Sym::Pair)) {
      bool left = occurs_var(cur.arg(1), kMarker);
      bool right = occurs_var(cur.arg(2), kMarker);
      if (left == right) throw MalformedCipher("marker must occur exactly once");
      o = Term::app(left ? Sym::Proj1 : Sym::Proj2, o);
      cur = cur.arg(left ? 1 : 2);
    } else if (cur.is_app(Sym::Sign) && occurs_var(cur.arg(1), kMarker)) {
      o = Term::app(Sym::Retrieve, o);
      cur = cur.arg(1);
    } else {
      throw MalformedCipher("corridor to the marker contains " + to_string(cur));
    }
  }
  return o;
}

TermSet opener_subterm_set(const std::vector<MarkedCipher>& es) {
  TermSet out;
  for (const MarkedCipher& e : es) {
    TermSet subs;
    collect_subterms(opener(e.term), subs);
    for (const Term& u : subs) {
      if (occurs_sym(u, Sym::Dec) || occurs_sym(u, Sym::Deca)) out.insert(u);
    }
  }
  return out;
}

std::vector<MarkedCipher> compute_E0(const MessageSets& m, const std::string& s) {
  std::vector<MarkedCipher> out;
  Term sn = Term::name(s);
  for (const Term& M : m.outputs) {
    for (const Position& p : positions(M)) {
      if (subterm_at(M, p) != sn) continue;
      auto r = f_ep(replace_at(M, p, marker()), p);
      if (!r) continue;
      MarkedCipher e = make_marked(r->first, 0, m.origin);
      if (!has_canonical(out, e.canonical)) out.push_back(e);
    }
  }
  return out;
}

std::vector<Term> compute_Do(const MessageSets& m) {
  std::vector<Term> out;
  for (const Term& M : m.outputs) {
    for (const Position& p : var_positions(M)) {
      if (auto r = f_dp(M, p)) push_unique(out, r->first);
    }
  }
  return out;
}

std::vector<std::vector<MarkedCipher>> compute_E_fixpoint(const MessageSets& m,
                                                          const std::string& s) {
  std::vector<std::vector<MarkedCipher>> gens{compute_E0(m, s)};
  size_t bound = 1;
  for (const Term& M : m.outputs) bound += positions(M).size();
  std::vector<MarkedCipher> seen = gens[0];
  while (!gens.back().empty()) {
    int g = static_cast<int>(gens.size());
    assert(static_cast<size_t>(g) <= bound);
    if (static_cast<size_t>(g) > bound) throw Error("E-set iteration did not terminate");
    TermSet openers = opener_subterm_set(gens.back());
    std::vector<MarkedCipher> next;
    for (const Term& M : m.outputs) {
      for (const Position& p : var_positions(M)) {
        auto ep = f_ep(M, p);
        if (!ep) continue;
        Position rest = *minus(p, ep->second);
        auto dp = f_dp(ep->first, rest);
        if (!dp) continue;
        auto fs = chain_factors(dp->first);
        if (!fs || !openers.count((*fs)[0])) continue;
        MarkedCipher e = make_marked(replace_at(ep->first, dp->second, marker()), g, m.origin);
        if (!has_canonical(next, e.canonical)) next.push_back(e);
      }
    }
    bool fresh = std::any_of(next.begin(), next.end(),
                             [&](const MarkedCipher& e) { return !has_canonical(seen, e.canonical); });
    gens.push_back(next);
    if (!fresh) break;
    for (const MarkedCipher& e : next) {
      if (!has_canonical(seen, e.canonical)) seen.push_back(e);
    }
  }
  return gens;
}

std::vector<MarkedCipher> flatten(const std::vector<std::vector<MarkedCipher>>& gens) {
  std::vector<MarkedCipher> out;
  for (const auto& g : gens) {
    for (const MarkedCipher& e : g) {
      if (!has_canonical(out, e.canonical)) out.push_back(e);
    }
  }
  return out;
}

std::vector<Term> compute_Mts(const MessageSets& m, const std::string& s,
                              const std::vector<MarkedCipher>& all) {
  std::vector<Term> out;
  for (const Term& T : m.test_operands) {
    bool in = T.is_name() && T.id() == s;
    for (const Position& p : var_positions(T)) {
      if (in) break;
      auto dp = f_dp(T, p);
      if (!dp) continue;
      auto fs = chain_factors(dp->first);
      if (!fs) continue;
      for (const Term& f : *fs) {
        for (const MarkedCipher& e : all) {
          if (reaches_marker(f, e.term)) in = true;
        }
      }
    }
    if (in) push_unique(out, T);
  }
  return out;
}

bool same_canonical(const std::vector<MarkedCipher>& a, const std::vector<Term>& b) {
  TermSet x, y;
  for (const MarkedCipher& e : a) x.insert(e.canonical);
  for (const Term& t : b) y.insert(renumber_vars(t));
  return x == y;
}

}  // namespace strongsec
