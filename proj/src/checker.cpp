#include "strongsec/checker.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace strongsec {

bool ConditionReport::fails(int condition) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.condition == condition; });
}

std::vector<int> ConditionReport::failed() const {
  std::vector<int> out;
  for (const Violation& v : violations) {
    if (std::find(out.begin(), out.end(), v.condition) == out.end()) out.push_back(v.condition);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool is_cons4(const Term& t) {
  return t.is_app() && (is_encryption(t.sym()) || t.sym() == Sym::Pair || t.sym() == Sym::Sign);
}

bool has_strict(const Term& t, const std::function<bool(const Term&)>& pred) {
  for (const Term& a : t.args()) {
    if (pred(a) || has_strict(a, pred)) return true;
  }
  return false;
}

// pi-word(z), or pi-word(dec_g(shape, K))
bool destructor_shape(const Term& t) {
  Term cur = t;
  while (cur.is_app(Sym::Proj1) || cur.is_app(Sym::Proj2)) cur = cur.arg(1);
  if (cur.is_var()) return true;
  if (cur.is_app() && is_decryption(cur.sym())) return destructor_shape(cur.arg(1));
  return false;
}

bool operand_shape(const Term& t) { return t.is_name() || destructor_shape(t); }

std::string test_string(const Test& t) { return to_string(t.left) + " = " + to_string(t.right); }

}  // namespace

ConditionReport check_well_formed_process(const Process& p, const std::string& s) {
  ConditionReport rep;
  rep.definition = "def3";
  rep.conditions = 5;
  auto add = [&](int c, const Term& where, const Position& pos, std::string why) {
    rep.violations.push_back({c, to_string(where), pos, std::move(why)});
  };

  if (p.channels.count(s)) {
    rep.violations.push_back({0, s, {}, "the secret is used as a channel"});
  }
  if (!p.bound_names.count(s)) {
    rep.violations.push_back({0, s, {}, "the secret is not a restricted name"});
  }

  MessageSets m = extract_messages(p);
  std::vector<Term> msgs = m.all();
  for (const Test& t : m.tests) {
    if (t.kind == TestKind::CheckForm &&
        std::find(msgs.begin(), msgs.end(), t.key) == msgs.end()) {
      msgs.push_back(t.key);
    }
  }

  std::map<std::string, Term> randomness;
  for (const Term& T : msgs) {
    for (const Position& q : positions(T)) {
      Term u = subterm_at(T, q);
      if (!u.is_app()) continue;
      Sym f = u.sym();
      if (f == Sym::Retrieve) add(1, T, q, "retrieve occurs in a message");
      if (f == Sym::Check) add(1, T, q, "check occurs outside a check(M,N,K) = ok test");
      if (is_encryption(f)) {
        const Term& R = u.arg(3);
        if (!R.is_name() || !p.bound_names.count(R.id()) || R.id() == s) {
          add(2, T, q, "randomness " + to_string(R) + " is not a restricted name other than s");
        } else {
          auto [it, fresh] = randomness.emplace(R.id(), u);
          if (!fresh && it->second != u) {
            add(2, T, q, "randomness " + R.id() + " is shared with " + to_string(it->second));
          }
        }
      }
      if (is_encryption(f) || is_decryption(f) || f == Sym::Sign) {
        if (!variables(u.arg(2)).empty()) {
          add(3, T, concat(q, {2}), "key " + to_string(u.arg(2)) + " is not closed");
        }
      }
      if (is_destructor(f) || f == Sym::Pub || f == Sym::Priv) {
        if (has_strict(u, is_cons4)) {
          add(4, T, q, std::string(sym_name(f)) + " above a constructor");
        }
        if (has_strict(u, [&](const Term& a) { return a.is_name() && a.id() == s; })) {
          add(4, T, q, std::string(sym_name(f)) + " above the secret");
        }
      }
    }
  }
  // Randomness must not occur anywhere except as the randomness of its own encryption.
  for (const Term& T : msgs) {
    for (const Position& q : positions(T)) {
      Term u = subterm_at(T, q);
      if (!u.is_name() || !randomness.count(u.id())) continue;
      bool ok = !q.empty() && q.back() == 3;
      if (ok) {
        Term parent = subterm_at(T, Position(q.begin(), q.end() - 1));
        ok = parent.is_app() && is_encryption(parent.sym()) && parent == randomness[u.id()];
      }
      if (!ok) add(2, T, q, "randomness " + u.id() + " is used outside its encryption");
    }
  }

  for (const Test& t : m.tests) {
    std::string shown = test_string(t);
    auto bad = [&](const std::string& why) { rep.violations.push_back({5, shown, {}, why}); };
    if (t.kind == TestKind::CheckForm) {
      if (!variables(t.key).empty()) bad("check key is not closed");
      if (!operand_shape(t.m) || !operand_shape(t.n)) {
        bad("check operands are not names or destructor words over a variable");
      }
    } else if (!operand_shape(t.left) || !operand_shape(t.right)) {
      bad("test operand is not a name or a destructor word over a variable");
    }
  }
  return rep;
}

ESetReport compute_esets(const Process& p, const std::string& s) {
  ESetReport r;
  r.messages = extract_messages(p);
  r.generations = compute_E_fixpoint(r.messages, s);
  for (const auto& g : r.generations) {
    r.openers.push_back(opener_subterm_set(g));
    std::vector<Term> mx;
    for (const MarkedCipher& e : g) {
      Term o = opener(e.term);
      if (std::find(mx.begin(), mx.end(), o) == mx.end()) mx.push_back(o);
    }
    r.max_openers.push_back(mx);
  }
  r.Do = compute_Do(r.messages);
  r.Mts = compute_Mts(r.messages, s, r.all());
  return r;
}

ConditionReport check_no_test_over_secret(const Process& p, const std::string& s,
                                          const ESetReport& es) {
  ConditionReport rep;
  rep.definition = "def4";
  rep.conditions = 2;
  std::vector<MarkedCipher> all = es.all();
  for (const MarkedCipher& e : all) {
    Term op = opener(e.term);
    for (const Term& d : es.Do) {
      auto fs = chain_factors(d);
      if (!fs) continue;
      for (size_t i = 0; i < fs->size(); ++i) {
        if (!reaches_marker((*fs)[i], e.term)) continue;
        if (i != 0) {
          rep.violations.push_back({1, to_string(d), {},
                                    "factor " + std::to_string(i + 1) + " opens " +
                                        to_string(e.canonical) + " to the secret"});
        } else if (is_strict_subterm(op, (*fs)[0])) {
          rep.violations.push_back({1, to_string(d), {},
                                    "opener " + to_string(op) + " is a strict subterm of " +
                                        to_string((*fs)[0])});
        }
      }
    }
  }
  auto in_mts = [&](const Term& t) {
    return std::find(es.Mts.begin(), es.Mts.end(), t) != es.Mts.end();
  };
  auto restricted_other = [&](const Term& t) {
    return t.is_name() && p.bound_names.count(t.id()) && t.id() != s;
  };
  for (const Test& t : es.messages.tests) {
    const Term& a = t.kind == TestKind::CheckForm ? t.m : t.left;
    const Term& b = t.kind == TestKind::CheckForm ? t.n : t.right;
    for (int side = 0; side < 2; ++side) {
      const Term& x = side ? b : a;
      const Term& y = side ? a : b;
      if (in_mts(x) && !restricted_other(y)) {
        rep.violations.push_back({2, test_string(t), {},
                                  to_string(x) + " is in M_t^s but " + to_string(y) +
                                      " is not a restricted name"});
      }
    }
  }
  return rep;
}

ConditionReport check_no_test_over_secret(const Process& p, const std::string& s) {
  return check_no_test_over_secret(p, s, compute_esets(p, s));
}

}  // namespace strongsec
