#include "strongsec/process.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "strongsec/error.hpp"

namespace strongsec {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'' || c == '#';
}

// Blank out // comments so offsets (and therefore error locations) are preserved.
std::string strip_comments(std::string_view in) {
  std::string out(in);
  for (size_t i = 0; i + 1 < out.size(); ++i) {
    if (out[i] == '/' && out[i + 1] == '/') {
      while (i < out.size() && out[i] != '\n') out[i++] = ' ';
    }
  }
  return out;
}

class ProcParser {
 public:
  explicit ProcParser(std::string_view text) : s_(strip_comments(text)) {}

  ProcPtr parse_all() {
    if (keyword("vars")) {
      do {
        declared_.insert(ident());
      } while (eat(","));
      expect(";");
    }
    ProcPtr p = parse_par();
    skip_ws();
    if (i_ != s_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  void location(size_t at, int& line, int& col) const {
    line = 1;
    col = 1;
    for (size_t k = 0; k < at && k < s_.size(); ++k) {
      if (s_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg, size_t at = std::string::npos) const {
    int line, col;
    location(at == std::string::npos ? i_ : at, line, col);
    throw ParseError(msg, line, col);
  }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (std::string_view(s_).substr(i_, tok.size()) == tok) {
      i_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  bool keyword(std::string_view kw) {
    skip_ws();
    if (std::string_view(s_).substr(i_, kw.size()) != kw) return false;
    size_t after = i_ + kw.size();
    if (after < s_.size() && ident_char(s_[after])) return false;
    i_ = after;
    return true;
  }

  // "in" / "out" directly followed by an opening parenthesis
  bool action(std::string_view kw) {
    size_t save = i_;
    if (keyword(kw) && eat("(")) return true;
    i_ = save;
    return false;
  }

  std::string ident() {
    skip_ws();
    size_t start = i_;
    if (i_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[i_]))) {
      fail("expected identifier");
    }
    while (i_ < s_.size()) {
      if (s_.compare(i_, 2, "_{") == 0) {
        size_t close = s_.find('}', i_);
        if (close == std::string::npos) fail("unterminated subscript");
        i_ = close + 1;
      } else if (ident_char(s_[i_])) {
        ++i_;
      } else {
        break;
      }
    }
    return s_.substr(start, i_ - start);
  }

  bool is_variable_ident(const std::string& id) const {
    return id[0] == 'z' || declared_.count(id) > 0 ||
           std::find(scope_.begin(), scope_.end(), id) != scope_.end();
  }

  std::string channel() {
    size_t at = i_;
    skip_ws();
    at = i_;
    std::string c = ident();
    if (is_variable_ident(c)) {
      int line, col;
      location(at, line, col);
      throw VariableChannel("channel '" + c + "' is a variable", line, col);
    }
    return c;
  }

  Term term() {
    skip_ws();
    size_t at = i_;
    Term raw = parse_term_at(s_, i_, ParseOptions{});
    Term t = to_vars(raw);
    for (const std::string& v : variables(t)) {
      if (std::find(scope_.begin(), scope_.end(), v) == scope_.end()) {
        int line, col;
        location(at, line, col);
        throw OpenProcess("variable '" + v + "' is not bound by an input", line, col);
      }
    }
    return t;
  }

  Term to_vars(const Term& t) const {
    if (t.is_name()) return is_variable_ident(t.id()) ? Term::var(t.id()) : t;
    if (!t.is_app()) return t;
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(to_vars(a));
    return Term::app(t.sym(), std::move(args));
  }

  std::shared_ptr<Proc> node(PKind k, size_t at) {
    auto p = std::make_shared<Proc>();
    p->kind = k;
    location(at, p->line, p->col);
    return p;
  }

  ProcPtr nil(size_t at) { return node(PKind::Nil, at); }

  ProcPtr parse_par() {
    skip_ws();
    size_t at = i_;
    std::vector<ProcPtr> parts{parse_seq()};
    while (eat("|")) parts.push_back(parse_seq());
    if (parts.size() == 1) return parts[0];
    auto p = node(PKind::Par, at);
    p->children = std::move(parts);
    return p;
  }

  // Optional ".P" continuation; a missing one means 0.
  ProcPtr continuation() {
    if (eat(".")) return parse_seq();
    return nil(i_);
  }

  ProcPtr parse_seq() {
    if (++depth_ > 2000) fail("process nested too deeply");
    ProcPtr p = parse_seq_inner();
    --depth_;
    return p;
  }

  ProcPtr parse_seq_inner() {
    skip_ws();
    size_t at = i_;
    if (eat("(")) {
      ProcPtr p = parse_par();
      expect(")");
      return p;
    }
    if (i_ < s_.size() && s_[i_] == '0' && (i_ + 1 >= s_.size() || !ident_char(s_[i_ + 1]))) {
      ++i_;
      return nil(at);
    }
    if (eat("!")) {
      auto p = node(PKind::Repl, at);
      p->children.push_back(parse_seq());
      return p;
    }
    if (keyword("new") || eat("ν")) {
      std::vector<std::string> names{ident()};
      while (eat(",")) names.push_back(ident());
      expect(".");
      ProcPtr body = parse_seq();
      for (auto it = names.rbegin(); it != names.rend(); ++it) {
        if (is_variable_ident(*it)) fail("restricted identifier '" + *it + "' is a variable", at);
        auto p = node(PKind::New, at);
        p->name = *it;
        p->children.push_back(body);
        body = p;
      }
      return body;
    }
    if (action("in")) {
      auto p = node(PKind::In, at);
      p->name = channel();
      expect(",");
      p->var = ident();
      expect(")");
      scope_.push_back(p->var);
      p->children.push_back(continuation());
      scope_.pop_back();
      return p;
    }
    if (action("out")) {
      auto p = node(PKind::Out, at);
      p->name = channel();
      expect(",");
      p->t1 = term();
      expect(")");
      p->children.push_back(continuation());
      return p;
    }
    if (keyword("if")) {
      auto p = node(PKind::If, at);
      p->t1 = term();
      expect("=");
      p->t2 = term();
      if (!keyword("then")) fail("expected 'then'");
      p->children.push_back(parse_seq());
      p->children.push_back(keyword("else") ? parse_seq() : nil(i_));
      return p;
    }
    if (eat("[")) {
      auto p = node(PKind::If, at);
      p->t1 = term();
      expect("=");
      p->t2 = term();
      expect("]");
      p->children.push_back(continuation());
      p->children.push_back(nil(i_));
      return p;
    }
    fail("expected a process");
  }

  std::string s_;
  size_t i_ = 0;
  int depth_ = 0;
  std::set<std::string> declared_;
  std::vector<std::string> scope_;
};

void collect_free(const ProcPtr& p, std::set<std::string>& bound, std::set<std::string>& out) {
  auto term_names = [&](const Term& t) {
    for (const std::string& n : free_names(t)) {
      if (!bound.count(n)) out.insert(n);
    }
  };
  switch (p->kind) {
    case PKind::New: {
      bool fresh = bound.insert(p->name).second;
      collect_free(p->children[0], bound, out);
      if (fresh) bound.erase(p->name);
      return;
    }
    case PKind::In:
    case PKind::Out:
      if (!bound.count(p->name)) out.insert(p->name);
      if (p->kind == PKind::Out) term_names(p->t1);
      break;
    case PKind::If:
      term_names(p->t1);
      term_names(p->t2);
      break;
    default:
      break;
  }
  for (const ProcPtr& c : p->children) collect_free(c, bound, out);
}

void collect_binders(const ProcPtr& p, bool replicated,
                     std::vector<std::pair<std::string, bool>>& out) {
  if (p->kind == PKind::New) out.emplace_back(p->name, replicated);
  for (const ProcPtr& c : p->children) {
    collect_binders(c, replicated || p->kind == PKind::Repl, out);
  }
}

// Rebuilds the tree so that every restriction binds a distinct name that is also distinct
// from the free names, and numbers nodes in preorder. When a name is bound several times,
// the first binder outside any replication keeps it.
class Canonicalizer {
 public:
  Canonicalizer(const ProcPtr& root, std::set<std::string> free) : taken_(std::move(free)) {
    std::vector<std::pair<std::string, bool>> binders;
    collect_binders(root, false, binders);
    std::map<std::string, size_t> keeper;
    for (size_t i = 0; i < binders.size(); ++i) {
      const auto& [n, repl] = binders[i];
      if (taken_.count(n)) continue;
      auto it = keeper.find(n);
      if (it == keeper.end()) {
        keeper[n] = i;
      } else if (binders[it->second].second && !repl) {
        it->second = i;
      }
    }
    keep_.assign(binders.size(), false);
    for (const auto& [n, i] : keeper) {
      keep_[i] = true;
      taken_.insert(n);
    }
  }

  ProcPtr run(const ProcPtr& p, std::map<std::string, std::string> ren) {
    auto q = std::make_shared<Proc>(*p);
    q->id = next_id_++;
    auto rn = [&](const std::string& n) {
      auto it = ren.find(n);
      return it == ren.end() ? n : it->second;
    };
    auto rt = [&](const Term& t) { return t.valid() ? rename_names(t, ren) : t; };
    switch (p->kind) {
      case PKind::New: {
        std::string n = p->name;
        if (!keep_[binder_++]) {
          int k = 2;
          while (taken_.count(p->name + "_" + std::to_string(k))) ++k;
          n = p->name + "_" + std::to_string(k);
          taken_.insert(n);
          origin_[n] = p->name;
        }
        bound_.insert(n);
        ren[p->name] = n;
        q->name = n;
        break;
      }
      case PKind::In:
      case PKind::Out:
        q->name = rn(p->name);
        q->t1 = rt(p->t1);
        break;
      case PKind::If:
        q->t1 = rt(p->t1);
        q->t2 = rt(p->t2);
        break;
      default:
        break;
    }
    q->children.clear();
    for (const ProcPtr& c : p->children) q->children.push_back(run(c, ren));
    return q;
  }

  std::set<std::string> bound_;
  std::map<std::string, std::string> origin_;
  int next_id_ = 0;

 private:
  std::set<std::string> taken_;
  std::vector<bool> keep_;
  size_t binder_ = 0;
};

void collect_channels(const ProcPtr& p, std::set<std::string>& out) {
  if (p->kind == PKind::In || p->kind == PKind::Out) out.insert(p->name);
  for (const ProcPtr& c : p->children) collect_channels(c, out);
}

void print(const Proc& p, Style st, std::string& out) {
  auto T = [&](const Term& t) { return to_string(t, st); };
  auto cont = [&](const Proc& c) {
    if (c.kind == PKind::Nil) return;
    out += ".";
    print(c, st, out);
  };
  switch (p.kind) {
    case PKind::Nil:
      out += "0";
      break;
    case PKind::Par:
      out += "(";
      for (size_t i = 0; i < p.children.size(); ++i) {
        if (i) out += " | ";
        print(*p.children[i], st, out);
      }
      out += ")";
      break;
    case PKind::Repl:
      out += "!";
      print(*p.children[0], st, out);
      break;
    case PKind::New:
      out += (st == Style::Unicode ? "ν" : "new ") + p.name + ".";
      print(*p.children[0], st, out);
      break;
    case PKind::In:
      out += "in(" + p.name + ", " + p.var + ")";
      cont(*p.children[0]);
      break;
    case PKind::Out:
      out += "out(" + p.name + ", " + T(p.t1) + ")";
      cont(*p.children[0]);
      break;
    case PKind::If:
      if (p.children[1]->kind == PKind::Nil) {
        out += "[" + T(p.t1) + " = " + T(p.t2) + "]";
        cont(*p.children[0]);
      } else {
        out += "if " + T(p.t1) + " = " + T(p.t2) + " then ";
        print(*p.children[0], st, out);
        out += " else ";
        print(*p.children[1], st, out);
      }
      break;
  }
}

void push_unique(std::vector<Term>& v, const Term& t) {
  if (std::find(v.begin(), v.end(), t) == v.end()) v.push_back(t);
}

void extract(const Proc& p, MessageSets& m) {
  if (p.kind == PKind::Out) push_unique(m.outputs, p.t1);
  if (p.kind == PKind::If) {
    Test t{p.t1, p.t2, TestKind::Plain, {}, {}, {}};
    auto is_ok = [](const Term& u) { return u.is_name() && u.id() == "ok"; };
    const Term* chk = nullptr;
    if (p.t1.is_app(Sym::Check) && is_ok(p.t2)) chk = &p.t1;
    if (p.t2.is_app(Sym::Check) && is_ok(p.t1)) chk = &p.t2;
    if (chk) {
      t.kind = TestKind::CheckForm;
      t.m = chk->arg(1);
      t.n = chk->arg(2);
      t.key = chk->arg(3);
      push_unique(m.test_operands, t.m);
      push_unique(m.test_operands, t.n);
    } else {
      push_unique(m.test_operands, p.t1);
      push_unique(m.test_operands, p.t2);
    }
    bool dup = std::any_of(m.tests.begin(), m.tests.end(),
                           [&](const Test& o) { return o.left == t.left && o.right == t.right; });
    if (!dup) m.tests.push_back(t);
  }
  for (const ProcPtr& c : p.children) extract(*c, m);
}

}  // namespace

Process parse_process(std::string_view text) {
  ProcParser parser(text);
  ProcPtr raw = parser.parse_all();
  std::set<std::string> bound, free;
  collect_free(raw, bound, free);
  Canonicalizer canon(raw, free);
  Process out;
  out.root = canon.run(raw, {});
  out.bound_names = canon.bound_;
  out.origin = canon.origin_;
  out.free_names = free;
  out.node_count = canon.next_id_;
  collect_channels(out.root, out.channels);
  return out;
}

std::string to_string(const Proc& p, Style style) {
  std::string out;
  print(p, style, out);
  return out;
}

std::vector<Term> MessageSets::all() const {
  std::vector<Term> out = outputs;
  for (const Term& t : test_operands) push_unique(out, t);
  return out;
}

MessageSets extract_messages(const ProcPtr& p) {
  MessageSets m;
  if (p) extract(*p, m);
  return m;
}

MessageSets extract_messages(const Process& p) {
  MessageSets m = extract_messages(p.root);
  m.origin = p.origin;
  return m;
}

}  // namespace strongsec
