#include "strongsec/rewrite.hpp"

#include "strongsec/error.hpp"

namespace strongsec {

namespace {

Term z(int i) { return Term::var("z" + std::to_string(i)); }

std::vector<RuleInfo> make_rules() {
  using S = Sym;
  std::vector<RuleInfo> r;
  r.push_back({Rule::Proj1, Term::app(S::Proj1, Term::app(S::Pair, z(1), z(2))), z(1), Position{1, 1}});
  r.push_back({Rule::Proj2, Term::app(S::Proj2, Term::app(S::Pair, z(1), z(2))), z(2), Position{1, 2}});
  r.push_back({Rule::Dec, Term::app(S::Dec, Term::app(S::Enc, z(1), z(2), z(3)), z(2)), z(1),
               Position{1, 1}});
  r.push_back({Rule::Deca,
               Term::app(S::Deca, Term::app(S::Enca, z(1), Term::app(S::Pub, z(2)), z(3)),
                         Term::app(S::Priv, z(2))),
               z(1), Position{1, 1}});
  r.push_back({Rule::Check,
               Term::app(S::Check, z(1), Term::app(S::Sign, z(1), Term::app(S::Priv, z(2))),
                         Term::app(S::Pub, z(2))),
               Term::name("ok"), std::nullopt});
  r.push_back({Rule::Retrieve, Term::app(S::Retrieve, Term::app(S::Sign, z(1), z(2))), z(1),
               Position{1, 1}});
  return r;
}

}  // namespace

const std::vector<RuleInfo>& rules() {
  static const std::vector<RuleInfo> r = make_rules();
  return r;
}

const RuleInfo& rule_info(Rule r) { return rules()[static_cast<size_t>(r)]; }

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Proj1: return "proj1";
    case Rule::Proj2: return "proj2";
    case Rule::Dec: return "dec";
    case Rule::Deca: return "deca";
    case Rule::Check: return "check";
    case Rule::Retrieve: return "retrieve";
  }
  return "?";
}

// Hand-coded matching; the lhs patterns are fixed and shallow.
std::optional<Rule> root_rule(const Term& t) {
  if (!t.is_app()) return std::nullopt;
  switch (t.sym()) {
    case Sym::Proj1:
      if (t.arg(1).is_app(Sym::Pair)) return Rule::Proj1;
      break;
    case Sym::Proj2:
      if (t.arg(1).is_app(Sym::Pair)) return Rule::Proj2;
      break;
    case Sym::Dec:
      if (t.arg(1).is_app(Sym::Enc) && t.arg(1).arg(2) == t.arg(2)) return Rule::Dec;
      break;
    case Sym::Deca: {
      const Term& c = t.arg(1);
      const Term& k = t.arg(2);
      if (c.is_app(Sym::Enca) && c.arg(2).is_app(Sym::Pub) && k.is_app(Sym::Priv) &&
          c.arg(2).arg(1) == k.arg(1)) {
        return Rule::Deca;
      }
      break;
    }
    case Sym::Check: {
      const Term& sg = t.arg(2);
      const Term& pk = t.arg(3);
      if (sg.is_app(Sym::Sign) && sg.arg(1) == t.arg(1) && sg.arg(2).is_app(Sym::Priv) &&
          pk.is_app(Sym::Pub) && sg.arg(2).arg(1) == pk.arg(1)) {
        return Rule::Check;
      }
      break;
    }
    case Sym::Retrieve:
      if (t.arg(1).is_app(Sym::Sign)) return Rule::Retrieve;
      break;
    default:
      break;
  }
  return std::nullopt;
}

Term contract_root(const Term& t, Rule r, Substitution* matcher) {
  auto actual = root_rule(t);
  if (!actual || *actual != r) throw NotARedex("no rule " + std::string(rule_name(r)) + " at root");
  if (matcher) {
    matcher->clear();
    switch (r) {
      case Rule::Proj1:
      case Rule::Proj2:
        (*matcher)["z1"] = t.arg(1).arg(1);
        (*matcher)["z2"] = t.arg(1).arg(2);
        break;
      case Rule::Dec:
        (*matcher)["z1"] = t.arg(1).arg(1);
        (*matcher)["z2"] = t.arg(1).arg(2);
        (*matcher)["z3"] = t.arg(1).arg(3);
        break;
      case Rule::Deca:
        (*matcher)["z1"] = t.arg(1).arg(1);
        (*matcher)["z2"] = t.arg(2).arg(1);
        (*matcher)["z3"] = t.arg(1).arg(3);
        break;
      case Rule::Check:
        (*matcher)["z1"] = t.arg(1);
        (*matcher)["z2"] = t.arg(3).arg(1);
        break;
      case Rule::Retrieve:
        (*matcher)["z1"] = t.arg(1).arg(1);
        (*matcher)["z2"] = t.arg(1).arg(2);
        break;
    }
  }
  const RuleInfo& info = rule_info(r);
  if (!info.rhs_pos) return info.rhs;
  return subterm_at(t, *info.rhs_pos);
}

namespace {

// Post-order search; the first redex met with children visited in order is innermost.
bool find_innermost(const Term& t, bool right_first, Position& cur, Position& out) {
  if (t.normal()) return false;
  if (t.is_app()) {
    int n = static_cast<int>(t.args().size());
    for (int k = 0; k < n; ++k) {
      int i = right_first ? n - k : k + 1;
      cur.push_back(i);
      if (find_innermost(t.arg(i), right_first, cur, out)) return true;
      cur.pop_back();
    }
  }
  if (root_rule(t)) {
    out = cur;
    return true;
  }
  return false;
}

void all_redexes(const Term& t, Position& cur, std::vector<Position>& out) {
  if (t.normal()) return;
  if (root_rule(t)) out.push_back(cur);
  for (int i = 1; i <= static_cast<int>(t.args().size()); ++i) {
    cur.push_back(i);
    all_redexes(t.arg(i), cur, out);
    cur.pop_back();
  }
}

std::pair<Term, ReductionStep> step_at(const Term& t, const Position& p) {
  Term sub = subterm_at(t, p);
  Rule r = *root_rule(sub);
  ReductionStep st{p, r, {}};
  Term c = contract_root(sub, r, &st.matcher);
  return {replace_at(t, p, c), std::move(st)};
}

}  // namespace

std::optional<std::pair<Term, ReductionStep>> reduce_once(const Term& t) {
  return reduce_once(t, Strategy::LeftmostInnermost);
}

std::optional<std::pair<Term, ReductionStep>> reduce_once(const Term& t, Strategy s,
                                                          std::mt19937_64* rng) {
  if (t.normal()) return std::nullopt;
  Position p;
  if (s == Strategy::Random) {
    std::vector<Position> all;
    Position cur;
    all_redexes(t, cur, all);
    if (all.empty()) return std::nullopt;
    std::uniform_int_distribution<size_t> d(0, all.size() - 1);
    p = all[rng ? d(*rng) : 0];
  } else {
    Position cur;
    if (!find_innermost(t, s == Strategy::RightmostInnermost, cur, p)) return std::nullopt;
  }
  return step_at(t, p);
}

// Children first; a root contraction then yields a subterm of normal children (or ok),
// which is already normal.
Term normalize(const Term& t) {
  if (t.normal()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(normalize(a));
  Term u = Term::app(t.sym(), std::move(args));
  if (auto r = root_rule(u)) return contract_root(u, *r);
  return u;
}

Term normalize_by_steps(const Term& t, Strategy s, std::mt19937_64* rng) {
  Term cur = t;
  while (auto st = reduce_once(cur, s, rng)) cur = st->first;
  return cur;
}

std::vector<ReductionStep> normalization_trace(const Term& t) {
  std::vector<ReductionStep> trace;
  Term cur = t;
  while (auto st = reduce_once(cur)) {
    trace.push_back(st->second);
    cur = st->first;
  }
  return trace;
}

bool equal_mod_E(const Term& u, const Term& v) { return normalize(u) == normalize(v); }

std::optional<Position> par1(const Term& u, const Position& p, const Position& q) {
  if (!has_position(u, q)) throw NotARedex("position " + position_string(q) + " not in term");
  auto r = root_rule(subterm_at(u, q));
  if (!r) throw NotARedex("no redex at " + position_string(q));
  if (!is_prefix(q, p)) return p;
  const RuleInfo& info = rule_info(*r);
  if (!info.rhs_pos) return std::nullopt;
  Position qr = concat(q, *info.rhs_pos);
  auto rest = minus(p, qr);
  if (!rest) return std::nullopt;
  return concat(q, *rest);
}

std::optional<Position> par(const Term& u, const Position& p) {
  Term cur = u;
  Position pos = p;
  while (auto st = reduce_once(cur)) {
    auto next = par1(cur, pos, st->second.redex_position);
    if (!next) return std::nullopt;
    pos = *next;
    cur = st->first;
  }
  return pos;
}

std::optional<Position> par_inv(const Term& u, const Position& p) {
  for (const Position& cand : positions(u)) {
    auto img = par(u, cand);
    if (img && *img == p) return cand;
  }
  return std::nullopt;
}

}  // namespace strongsec
