#include "strongsec/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "strongsec/error.hpp"
#include "strongsec/rewrite.hpp"

namespace strongsec {

namespace {

struct SymInfo {
  const char* name;
  int arity;
  int kind;  // 1 constructor, 2 destructor, 0 neither
};

constexpr SymInfo kSyms[kNumSyms] = {
    {"enc", 3, 1},   {"dec", 2, 2},   {"enca", 3, 1},  {"deca", 2, 2},
    {"pub", 1, 0},   {"priv", 1, 0},  {"pair", 2, 1},  {"proj1", 1, 2},
    {"proj2", 1, 2}, {"sign", 2, 1},  {"check", 3, 2}, {"retrieve", 1, 2},
};

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

int arity(Sym f) { return kSyms[static_cast<int>(f)].arity; }
bool is_constructor(Sym f) { return kSyms[static_cast<int>(f)].kind == 1; }
bool is_destructor(Sym f) { return kSyms[static_cast<int>(f)].kind == 2; }
const char* sym_name(Sym f) { return kSyms[static_cast<int>(f)].name; }

std::optional<Sym> sym_from_name(std::string_view s) {
  for (int i = 0; i < kNumSyms; ++i) {
    if (s == kSyms[i].name) return static_cast<Sym>(i);
  }
  if (s == "pi1") return Sym::Proj1;
  if (s == "pi2") return Sym::Proj2;
  return std::nullopt;
}

Term Term::name(std::string id) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Name;
  n->hash = mix(std::hash<std::string>()(id), 1);
  n->id = std::move(id);
  return Term(std::move(n));
}

Term Term::var(std::string id) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->hash = mix(std::hash<std::string>()(id), 2);
  n->id = std::move(id);
  n->ground = false;
  return Term(std::move(n));
}

Term Term::app(Sym f, std::vector<Term> args) {
  if (static_cast<int>(args.size()) != arity(f)) {
    throw Error(std::string("arity mismatch for ") + sym_name(f));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->sym = f;
  std::size_t h = mix(static_cast<std::size_t>(f) + 17, 3);
  int size = 1;
  int depth = 0;
  bool ground = true;
  bool normal = true;
  for (const Term& a : args) {
    h = mix(h, a.hash());
    size += a.size();
    depth = std::max(depth, a.depth());
    ground = ground && a.ground();
    normal = normal && a.normal();
  }
  n->hash = h;
  n->size = size;
  n->depth = depth + 1;
  n->ground = ground;
  n->args = std::move(args);
  Term t(std::move(n));
  if (normal && root_rule(t)) normal = false;
  const_cast<Node*>(t.raw())->normal = normal;
  return t;
}

Term Term::app(Sym f, Term a) { return app(f, std::vector<Term>{std::move(a)}); }
Term Term::app(Sym f, Term a, Term b) {
  return app(f, std::vector<Term>{std::move(a), std::move(b)});
}
Term Term::app(Sym f, Term a, Term b, Term c) {
  return app(f, std::vector<Term>{std::move(a), std::move(b), std::move(c)});
}

Kind Term::kind() const { return node_->kind; }
Sym Term::sym() const { return node_->sym; }
const std::string& Term::id() const { return node_->id; }
const std::vector<Term>& Term::args() const { return node_->args; }
std::size_t Term::hash() const { return node_->hash; }
int Term::size() const { return node_->size; }
int Term::depth() const { return node_->depth; }
bool Term::ground() const { return node_->ground; }
bool Term::normal() const { return node_->normal; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.size != y.size) return false;
  if (x.kind != Kind::App) return x.id == y.id;
  if (x.sym != y.sym) return false;
  for (size_t i = 0; i < x.args.size(); ++i) {
    if (!(x.args[i] == y.args[i])) return false;
  }
  return true;
}

bool operator<(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return false;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.size != y.size) return x.size < y.size;
  if (x.kind != y.kind) return x.kind < y.kind;
  if (x.kind != Kind::App) return x.id < y.id;
  if (x.sym != y.sym) return x.sym < y.sym;
  for (size_t i = 0; i < x.args.size(); ++i) {
    if (x.args[i] < y.args[i]) return true;
    if (y.args[i] < x.args[i]) return false;
  }
  return false;
}

Term marker() {
  static const Term m = Term::var(kMarker);
  return m;
}

Term hole() {
  static const Term h = Term::var(kHole);
  return h;
}

// ---- positions ----

bool is_prefix(const Position& q, const Position& p) {
  return q.size() <= p.size() && std::equal(q.begin(), q.end(), p.begin());
}

std::optional<Position> minus(const Position& p, const Position& q) {
  if (!is_prefix(q, p)) return std::nullopt;
  return Position(p.begin() + static_cast<long>(q.size()), p.end());
}

Position concat(const Position& a, const Position& b) {
  Position r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

std::string position_string(const Position& p, bool unicode) {
  if (p.empty()) return unicode ? "ε" : "eps";
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += unicode ? "·" : ".";
    s += std::to_string(p[i]);
  }
  return s;
}

Position parse_position(std::string_view s) {
  Position p;
  if (s.empty() || s == "eps" || s == "ε") return p;
  int cur = 0;
  bool have = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      cur = cur * 10 + (c - '0');
      have = true;
    } else if (c == '.') {
      if (!have || cur == 0) throw Error("bad position: " + std::string(s));
      p.push_back(cur);
      cur = 0;
      have = false;
    } else {
      throw Error("bad position: " + std::string(s));
    }
  }
  if (!have || cur == 0) throw Error("bad position: " + std::string(s));
  p.push_back(cur);
  return p;
}

bool has_position(const Term& t, const Position& p) {
  const Node* n = t.raw();
  for (int i : p) {
    if (n->kind != Kind::App || i < 1 || i > static_cast<int>(n->args.size())) return false;
    n = n->args[static_cast<size_t>(i - 1)].raw();
  }
  return true;
}

Term subterm_at(const Term& t, const Position& p) {
  Term cur = t;
  for (int i : p) {
    if (!cur.is_app() || i < 1 || i > static_cast<int>(cur.args().size())) {
      throw InvalidPosition("invalid position " + position_string(p));
    }
    cur = cur.arg(i);
  }
  return cur;
}

namespace {

Term replace_rec(const Term& u, const Position& p, size_t k, const Term& v) {
  if (k == p.size()) return v;
  int i = p[k];
  if (!u.is_app() || i < 1 || i > static_cast<int>(u.args().size())) {
    throw InvalidPosition("invalid position " + position_string(p));
  }
  std::vector<Term> args = u.args();
  args[static_cast<size_t>(i - 1)] = replace_rec(args[static_cast<size_t>(i - 1)], p, k + 1, v);
  return Term::app(u.sym(), std::move(args));
}

void positions_rec(const Term& t, Position& cur, std::vector<Position>& out, int mode) {
  bool v = t.is_var();
  if (mode == 0 || (mode == 1 && v) || (mode == 2 && !v)) out.push_back(cur);
  if (!t.is_app()) return;
  for (size_t i = 0; i < t.args().size(); ++i) {
    cur.push_back(static_cast<int>(i + 1));
    positions_rec(t.args()[i], cur, out, mode);
    cur.pop_back();
  }
}

}  // namespace

Term replace_at(const Term& u, const Position& p, const Term& v) { return replace_rec(u, p, 0, v); }

std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  Position cur;
  positions_rec(t, cur, out, 0);
  return out;
}

std::vector<Position> var_positions(const Term& t) {
  std::vector<Position> out;
  Position cur;
  positions_rec(t, cur, out, 1);
  return out;
}

std::vector<Position> nonvar_positions(const Term& t) {
  std::vector<Position> out;
  Position cur;
  positions_rec(t, cur, out, 2);
  return out;
}

// ---- structure ----

namespace {

template <class Leaf>
Term map_leaves(const Term& t, const Leaf& leaf) {
  if (!t.is_app()) return leaf(t);
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(map_leaves(a, leaf));
    changed = changed || args.back().raw() != a.raw();
  }
  if (!changed) return t;
  return Term::app(t.sym(), std::move(args));
}

}  // namespace

Term substitute(const Substitution& sigma, const Term& t) {
  if (sigma.empty() || t.ground()) return t;
  return map_leaves(t, [&](const Term& l) {
    if (l.is_var()) {
      auto it = sigma.find(l.id());
      if (it != sigma.end()) return it->second;
    }
    return l;
  });
}

Term replace_name(const Term& t, const std::string& s, const Term& m) {
  return map_leaves(t, [&](const Term& l) { return l.is_name() && l.id() == s ? m : l; });
}

Term rename_names(const Term& t, const std::map<std::string, std::string>& ren) {
  if (ren.empty()) return t;
  return map_leaves(t, [&](const Term& l) {
    if (l.is_name()) {
      auto it = ren.find(l.id());
      if (it != ren.end()) return Term::name(it->second);
    }
    return l;
  });
}

namespace {

template <class F>
void visit(const Term& t, const F& f) {
  f(t);
  if (t.is_app()) {
    for (const Term& a : t.args()) visit(a, f);
  }
}

}  // namespace

std::set<std::string> free_names(const Term& t) {
  std::set<std::string> out;
  visit(t, [&](const Term& u) {
    if (u.is_name()) out.insert(u.id());
  });
  return out;
}

std::set<std::string> variables(const Term& t) {
  std::set<std::string> out;
  if (t.ground()) return out;
  visit(t, [&](const Term& u) {
    if (u.is_var()) out.insert(u.id());
  });
  return out;
}

bool occurs_name(const Term& t, const std::string& s) {
  if (t.is_name()) return t.id() == s;
  if (!t.is_app()) return false;
  for (const Term& a : t.args()) {
    if (occurs_name(a, s)) return true;
  }
  return false;
}

bool occurs_var(const Term& t, const std::string& v) {
  if (t.ground()) return false;
  if (t.is_var()) return t.id() == v;
  for (const Term& a : t.args()) {
    if (occurs_var(a, v)) return true;
  }
  return false;
}

bool occurs_sym(const Term& t, Sym f) {
  if (!t.is_app()) return false;
  if (t.sym() == f) return true;
  for (const Term& a : t.args()) {
    if (occurs_sym(a, f)) return true;
  }
  return false;
}

bool is_subterm(const Term& v, const Term& u) {
  if (v.size() > u.size()) return false;
  if (v == u) return true;
  if (!u.is_app()) return false;
  for (const Term& a : u.args()) {
    if (is_subterm(v, a)) return true;
  }
  return false;
}

bool is_strict_subterm(const Term& v, const Term& u) { return v != u && is_subterm(v, u); }

void collect_subterms(const Term& t, TermSet& out) {
  if (!out.insert(t).second) return;
  if (t.is_app()) {
    for (const Term& a : t.args()) collect_subterms(a, out);
  }
}

Head head(const Term& t) {
  if (t.is_app()) return {Kind::App, t.sym(), ""};
  return {t.kind(), Sym::Pair, t.id()};
}

bool is_public(const Term& t, const std::set<std::string>& restricted) {
  if (t.is_name()) return restricted.count(t.id()) == 0;
  if (t.is_var()) return true;
  if (t.sym() == Sym::Priv) return false;
  for (const Term& a : t.args()) {
    if (!is_public(a, restricted)) return false;
  }
  return true;
}

// ---- printing ----

namespace {

std::string leaf_text(const Term& t, Style style) {
  const std::string& id = t.id();
  if (t.is_var() && id == kMarker) return style == Style::Unicode ? "𝚡" : "@x";
  if (t.is_var() && id == kHole) return style == Style::Unicode ? "z₀" : "@z0";
  if (style == Style::Ascii) return id;
  std::string out;
  bool in_brace = false;
  for (char c : id) {
    if (c == '{') in_brace = true;
    if (c == '}') in_brace = false;
    if (in_brace && c == '.') {
      out += "·";
    } else {
      out += c;
    }
  }
  return out;
}

void print(const Term& t, Style style, std::string& out) {
  if (!t.is_app()) {
    out += leaf_text(t, style);
    return;
  }
  if (t.sym() == Sym::Pair) {
    out += style == Style::Unicode ? "⟨" : "<";
    print(t.arg(1), style, out);
    out += ",";
    print(t.arg(2), style, out);
    out += style == Style::Unicode ? "⟩" : ">";
    return;
  }
  if (t.sym() == Sym::Proj1 || t.sym() == Sym::Proj2) {
    bool one = t.sym() == Sym::Proj1;
    if (style == Style::Unicode) {
      out += one ? "π₁(" : "π₂(";
    } else {
      out += one ? "pi1(" : "pi2(";
    }
  } else {
    out += sym_name(t.sym());
    out += "(";
  }
  for (size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ",";
    print(t.args()[i], style, out);
  }
  out += ")";
}

}  // namespace

std::string to_string(const Term& t, Style style) {
  std::string out;
  print(t, style, out);
  return out;
}

std::string to_string(const TermSet& ts, Style style) {
  std::vector<std::string> parts;
  for (const Term& t : ts) parts.push_back(to_string(t, style));
  std::sort(parts.begin(), parts.end());
  std::string out = "{";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out + "}";
}

// ---- parsing ----

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, const ParseOptions& opts, size_t start = 0)
      : s_(text), opts_(opts), i_(start) {}

  Term parse_prefix(size_t& end) {
    Term t = parse();
    end = i_;
    return t;
  }

  Term parse_all() {
    Term t = parse();
    skip_ws();
    if (i_ != s_.size()) fail("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1;
    int col = 1;
    for (size_t k = 0; k < i_ && k < s_.size(); ++k) {
      if (s_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (s_.substr(i_, tok.size()) == tok) {
      i_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'' || c == '#';
  }

  std::string ident() {
    skip_ws();
    size_t start = i_;
    if (i_ < s_.size() && s_[i_] == '@' && opts_.allow_reserved) {
      ++i_;
    } else if (i_ >= s_.size() || !ident_start(s_[i_])) {
      fail("expected identifier");
    }
    while (i_ < s_.size()) {
      if (s_.substr(i_, 2) == "_{") {
        size_t close = s_.find('}', i_);
        if (close == std::string_view::npos) fail("unterminated subscript");
        i_ = close + 1;
      } else if (ident_char(s_[i_])) {
        ++i_;
      } else {
        break;
      }
    }
    std::string id(s_.substr(start, i_ - start));
    // normalize the unicode middle dot inside subscripts
    std::string out;
    for (size_t k = 0; k < id.size(); ++k) {
      if (id.compare(k, 2, "·") == 0) {
        out += '.';
        ++k;
      } else {
        out += id[k];
      }
    }
    return out;
  }

  Term leaf(const std::string& id) {
    if (!id.empty() && id[0] == '@') {
      if (id == "@x") return marker();
      if (id == "@z0") return hole();
      fail("unknown reserved identifier " + id);
    }
    bool is_var = opts_.vars ? opts_.vars->count(id) > 0 : id[0] == 'z';
    return is_var ? Term::var(id) : Term::name(id);
  }

  Term parse() {
    if (++depth_ > 2000) fail("term nested too deeply");
    Term t = parse_inner();
    --depth_;
    return t;
  }

  Term parse_inner() {
    skip_ws();
    if (eat("<") || eat("⟨")) {
      Term a = parse();
      expect(",");
      Term b = parse();
      if (!eat(">") && !eat("⟩")) fail("expected '>'");
      return Term::app(Sym::Pair, a, b);
    }
    if (eat("π₁")) return unary(Sym::Proj1);
    if (eat("π₂")) return unary(Sym::Proj2);
    if (eat("𝚡")) {
      if (!opts_.allow_reserved) fail("reserved identifier");
      return marker();
    }
    if (eat("z₀")) {
      if (!opts_.allow_reserved) fail("reserved identifier");
      return hole();
    }
    std::string id = ident();
    skip_ws();
    if (i_ < s_.size() && s_[i_] == '(') {
      auto f = sym_from_name(id);
      if (!f) fail("unknown function symbol '" + id + "'");
      ++i_;
      std::vector<Term> args;
      args.push_back(parse());
      while (eat(",")) args.push_back(parse());
      expect(")");
      if (static_cast<int>(args.size()) != arity(*f)) {
        fail(std::string("wrong number of arguments for ") + sym_name(*f));
      }
      return Term::app(*f, std::move(args));
    }
    if (sym_from_name(id)) fail("function symbol '" + id + "' used without arguments");
    return leaf(id);
  }

  Term unary(Sym f) {
    expect("(");
    Term a = parse();
    expect(")");
    return Term::app(f, a);
  }

  std::string_view s_;
  const ParseOptions& opts_;
  size_t i_ = 0;
  int depth_ = 0;
};

}  // namespace

Term parse_term(std::string_view text, const ParseOptions& opts) {
  TermParser p(text, opts);
  return p.parse_all();
}

Term parse_term_at(std::string_view text, size_t& pos, const ParseOptions& opts) {
  TermParser p(text, opts, pos);
  return p.parse_prefix(pos);
}

Term renumber_vars(const Term& t) {
  std::map<std::string, std::string> ren;
  int next = 1;
  std::function<Term(const Term&)> go = [&](const Term& u) -> Term {
    if (u.is_var()) {
      if (u.id() == kMarker || u.id() == kHole) return u;
      auto it = ren.find(u.id());
      if (it == ren.end()) it = ren.emplace(u.id(), "z" + std::to_string(next++)).first;
      return Term::var(it->second);
    }
    if (!u.is_app()) return u;
    std::vector<Term> args;
    for (const Term& a : u.args()) args.push_back(go(a));
    return Term::app(u.sym(), std::move(args));
  };
  return go(t);
}

bool match(const Term& pattern, const Term& t, Substitution& sigma) {
  if (pattern.is_var()) {
    auto [it, fresh] = sigma.emplace(pattern.id(), t);
    return fresh || it->second == t;
  }
  if (pattern.kind() != t.kind()) return false;
  if (pattern.is_name()) return pattern.id() == t.id();
  if (pattern.sym() != t.sym()) return false;
  for (size_t i = 0; i < pattern.args().size(); ++i) {
    if (!match(pattern.args()[i], t.args()[i], sigma)) return false;
  }
  return true;
}

}  // namespace strongsec
