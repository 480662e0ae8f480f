#include "strongsec/explore.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <memory>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "strongsec/error.hpp"
#include "strongsec/rewrite.hpp"

namespace strongsec {

std::string base_name(const std::string& n) { return n.substr(0, n.find('#')); }

Frame StandardFrame::normalized() const {
  Frame f = frame;
  for (auto& [h, t] : f.bindings) t = normalize(t);
  return f;
}

namespace {

struct Env {
  std::vector<std::pair<std::string, Term>> vars;
  std::map<std::string, std::string> names;
  std::string suffix;
  bool private_input = false;
};

struct Thread {
  const Proc* p = nullptr;
  std::shared_ptr<const Env> env;
  int birth = 0;  // index of the block that created this thread
  std::string key;
};

struct Event {
  std::string text;
  int handle = 0;  // > 0 for outputs
  BindingProvenance prov;
  std::optional<TestRecord> test;
};

struct History {
  std::shared_ptr<const History> prev;
  Event ev;
};

struct State {
  std::vector<Term> raw;
  std::vector<Term> nf;
  std::vector<std::string> nf_text;
  Substitution sig_raw;
  Substitution sig_nf;
  std::set<std::string> restricted;
  std::vector<Thread> threads;  // all blocked on a communication
  int length = 0;
  // Partial-order reduction: blocks run by independent threads are explored in increasing
  // thread order only. `last_key` is the thread that ran the last block, which produced
  // handles numbered from `last_first_handle`.
  int block = 0;
  std::string last_key;
  int last_first_handle = 1;
  std::shared_ptr<const History> hist;
};

std::string handle_name(int i) { return "y" + std::to_string(i); }

// Whether a thread waiting at this input can ever output or communicate again.
bool can_act(const Proc& p) {
  switch (p.kind) {
    case PKind::Nil:
      return false;
    case PKind::In:
    case PKind::Out:
      return true;
    default:
      return std::any_of(p.children.begin(), p.children.end(),
                         [](const ProcPtr& c) { return can_act(*c); });
  }
}

struct Digest {
  std::uint64_t a = 0, b = 0;
  bool operator==(const Digest& o) const { return a == o.a && b == o.b; }
};
struct DigestHash {
  std::size_t operator()(const Digest& d) const { return d.a ^ (d.b * 0x9e3779b97f4a7c15ULL); }
};

Digest digest(const std::string& s) {
  std::uint64_t h1 = 1469598103934665603ULL;
  std::uint64_t h2 = 0x84222325cbf29ce4ULL;
  for (unsigned char c : s) {
    h1 = (h1 ^ c) * 1099511628211ULL;
    h2 = (h2 + c + 1) * 0x100000001b3ULL;
    h2 ^= h2 >> 29;
  }
  return {h1, h2};
}

class Explorer {
 public:
  using Visitor = std::function<bool(const State&, bool new_frame)>;

  Explorer(const Process& p, const std::string& s, const ExplorationBounds& b)
      : p_(p), s_(s), b_(b) {
    if (p.channels.count(s)) throw Error("the secret is used as a channel");
    if (!p.bound_names.count(s)) throw Error("the secret " + s + " is not restricted");
    constants_ = {Term::name("att0"), Term::name("att1")};
    for (const std::string& n : p.free_names) {
      if (!p.channels.count(n)) constants_.push_back(Term::name(n));
    }
  }

  bool truncated = false;
  std::size_t states = 0;

  // BFS so that every state is first met at its shortest trace length.
  void run(const Visitor& visit) {
    State init;
    std::vector<Thread> blocked;
    execute(init, Thread{p_.root.get(), std::make_shared<Env>(), 0, {}}, blocked);
    init.threads = std::move(blocked);
    finish(init);
    std::deque<State> queue;
    std::unordered_set<Digest, DigestHash> seen, frames;
    auto admit = [&](State&& st) -> bool {
      if (!seen.insert(digest(state_key(st))).second) return true;
      ++states;
      bool fresh = frames.insert(digest(frame_key(st))).second;
      if (!visit(st, fresh)) return false;
      if (states >= b_.max_states) {
        truncated = true;
        return false;
      }
      queue.push_back(std::move(st));
      return true;
    };
    if (!admit(std::move(init))) return;
    while (!queue.empty()) {
      State st = std::move(queue.front());
      queue.pop_front();
      bool cont = true;
      successors(st, [&](State&& n) {
        if (!cont) return;
        if (n.length > b_.max_trace_length) {
          truncated = true;
          return;
        }
        cont = admit(std::move(n));
      });
      if (!cont) return;
    }
  }

  StandardFrame standard_frame(const State& st) const {
    StandardFrame f;
    f.frame.restricted = st.restricted;
    for (size_t i = 0; i < st.raw.size(); ++i) {
      f.frame.bindings.emplace_back(handle_name(static_cast<int>(i) + 1), st.raw[i]);
    }
    f.provenance.resize(st.raw.size());
    std::vector<const Event*> events;
    for (const History* h = st.hist.get(); h; h = h->prev.get()) events.push_back(&h->ev);
    std::reverse(events.begin(), events.end());
    for (const Event* e : events) {
      f.trace.push_back(e->text);
      if (e->handle > 0) f.provenance[static_cast<size_t>(e->handle - 1)] = e->prov;
      if (e->test) f.tests.push_back(*e->test);
    }
    return f;
  }

  Frame nf_frame(const State& st) const {
    Frame f;
    f.restricted = st.restricted;
    for (size_t i = 0; i < st.nf.size(); ++i) {
      f.bindings.emplace_back(handle_name(static_cast<int>(i) + 1), st.nf[i]);
    }
    return f;
  }

 private:
  static Substitution env_map(const Env& e) {
    Substitution m;
    for (const auto& [v, t] : e.vars) m[v] = t;
    return m;
  }

  static Term instantiate(const Env& e, const Term& t) {
    return substitute(env_map(e), rename_names(t, e.names));
  }

  static void log(State& st, Event ev) {
    st.hist = std::make_shared<History>(History{st.hist, std::move(ev)});
  }

  static std::string channel(const Env& e, const std::string& c) {
    auto it = e.names.find(c);
    return it == e.names.end() ? c : it->second;
  }

  // Runs the administrative steps of one thread: restriction, parallel, replication,
  // conditionals and outputs on free channels. Stops at inputs and at outputs on restricted
  // channels.
  void execute(State& st, Thread th, std::vector<Thread>& blocked) const {
    while (true) {
      const Proc& p = *th.p;
      switch (p.kind) {
        case PKind::Nil:
          return;
        case PKind::Par:
          for (const ProcPtr& c : p.children) {
            execute(st, Thread{c.get(), th.env, th.birth, {}}, blocked);
          }
          return;
        case PKind::Repl:
          for (int k = 1; k <= b_.replication_unfoldings; ++k) {
            auto e = std::make_shared<Env>(*th.env);
            e->suffix += "#" + std::to_string(k);
            execute(st, Thread{p.children[0].get(), e, th.birth, {}}, blocked);
          }
          return;
        case PKind::New: {
          auto e = std::make_shared<Env>(*th.env);
          std::string actual = p.name + e->suffix;
          e->names[p.name] = actual;
          st.restricted.insert(actual);
          th.env = e;
          th.p = p.children[0].get();
          break;
        }
        case PKind::In:
          blocked.push_back(th);
          return;
        case PKind::Out: {
          if (st.restricted.count(channel(*th.env, p.name))) {
            blocked.push_back(th);
            return;
          }
          Term msg = instantiate(*th.env, p.t1);
          Term raw = substitute(st.sig_raw, msg);
          Term nf = normalize(substitute(st.sig_nf, msg));
          int h = static_cast<int>(st.raw.size()) + 1;
          st.raw.push_back(raw);
          st.nf.push_back(nf);
          st.nf_text.push_back(to_string(nf));
          st.sig_raw[handle_name(h)] = raw;
          st.sig_nf[handle_name(h)] = nf;
          BindingProvenance prov{p.t1, th.env->names, {}, !th.env->private_input};
          std::set<std::string> used = variables(p.t1);
          for (const auto& [v, t] : th.env->vars) {
            if (used.count(v)) prov.theta[v] = t;
          }
          log(st, Event{"out(" + channel(*th.env, p.name) + ", " + to_string(msg) + ") as " +
                            handle_name(h),
                        h, std::move(prov), std::nullopt});
          ++st.length;
          th.p = p.children[0].get();
          break;
        }
        case PKind::If: {
          Term l = instantiate(*th.env, p.t1);
          Term r = instantiate(*th.env, p.t2);
          bool holds = normalize(substitute(st.sig_nf, l)) == normalize(substitute(st.sig_nf, r));
          TestRecord rec{substitute(st.sig_raw, l), substitute(st.sig_raw, r), holds};
          log(st, Event{std::string(holds ? "then " : "else ") + "[" + to_string(l) + " = " +
                            to_string(r) + "]",
                        0, {}, rec});
          th.p = p.children[holds ? 0 : 1].get();
          break;
        }
      }
    }
  }

  // Cheap look-ahead for an input: false when the continuation dies in its conditionals
  // before reaching any communication.
  bool probe(const State& st, const Thread& th, const Term& value) const {
    Substitution m;
    for (const auto& [v, t] : th.env->vars) m[v] = substitute(st.sig_nf, t);
    m[th.p->var] = value;
    std::map<std::string, std::string> names = th.env->names;
    const Proc* q = th.p->children[0].get();
    while (true) {
      switch (q->kind) {
        case PKind::Nil:
          return false;
        case PKind::New:
          names[q->name] = q->name + th.env->suffix;
          q = q->children[0].get();
          break;
        case PKind::If: {
          bool holds = normalize(substitute(m, rename_names(q->t1, names))) ==
                       normalize(substitute(m, rename_names(q->t2, names)));
          q = q->children[holds ? 0 : 1].get();
          break;
        }
        default:
          return true;
      }
    }
  }

  std::string thread_key(const Thread& t) const {
    std::string k = std::to_string(t.p->id) + t.env->suffix + "{";
    for (const auto& [a, b] : t.env->names) k += a + "=" + b + ",";
    k += "}{";
    for (const auto& [v, m] : t.env->vars) k += v + "=" + to_string(m) + ",";
    return k + "}";
  }

  void finish(State& st) const {
    for (Thread& t : st.threads) {
      if (t.key.empty()) t.key = thread_key(t);
    }
    std::sort(st.threads.begin(), st.threads.end(),
              [](const Thread& a, const Thread& b) { return a.key < b.key; });
  }

  static std::string frame_key(const State& st) {
    std::string k;
    for (const std::string& t : st.nf_text) k += t + ";";
    return k;
  }

  static std::string state_key(const State& st) {
    std::string k = frame_key(st) + "|";
    for (const Thread& t : st.threads) {
      k += t.key + (t.birth == st.block ? "*|" : "|");
    }
    for (const std::string& n : st.restricted) k += n + ",";
    k += "|" + st.last_key + "|" + std::to_string(st.last_first_handle);
    return k;
  }

  struct Candidate {
    Term value;
    Term recipe;
    bool fresh = false;  // the recipe uses a handle output by the last block
  };

  // Recipes below the depth bound: handles, constants, and constructor layers over them.
  // One recipe per distinct value. `top` is the index where the last layer starts.
  std::vector<Candidate> lower_levels(const State& st, std::unordered_set<Term>& seen,
                                      size_t& top) const {
    std::vector<Candidate> all;
    auto add = [&](std::vector<Candidate>& out, Candidate c) {
      if (seen.insert(c.value).second) out.push_back(std::move(c));
    };
    for (size_t i = 0; i < st.nf.size(); ++i) {
      int h = static_cast<int>(i) + 1;
      add(all, {st.nf[i], Term::var(handle_name(h)), h >= st.last_first_handle});
    }
    for (const Term& c : constants_) add(all, {c, c, false});
    top = 0;
    for (int d = 2; d < b_.recipe_depth; ++d) {
      std::vector<Candidate> next;
      for_each_layer(all, top, [&](Sym f, const std::vector<size_t>& idx) {
        std::vector<Term> rs, vs;
        bool fresh = false;
        for (size_t j : idx) {
          rs.push_back(all[j].recipe);
          vs.push_back(all[j].value);
          fresh = fresh || all[j].fresh;
        }
        add(next, {Term::app(f, std::move(vs)), Term::app(f, std::move(rs)), fresh});
      });
      top = all.size();
      all.insert(all.end(), next.begin(), next.end());
    }
    return all;
  }

  // Calls visit(f, idx) for every constructor application over `all` that uses at least one
  // element at or after `top`. Constructor applications of normal forms are normal.
  template <class Visit>
  static void for_each_layer(const std::vector<Candidate>& all, size_t top, Visit visit) {
    static const Sym kCons[] = {Sym::Pair, Sym::Enc, Sym::Enca, Sym::Sign, Sym::Pub};
    if (all.empty()) return;
    for (Sym f : kCons) {
      size_t n = static_cast<size_t>(arity(f));
      std::vector<size_t> idx(n, 0);
      while (true) {
        bool uses_top = false;
        for (size_t j : idx) uses_top = uses_top || j >= top;
        if (uses_top) visit(f, idx);
        size_t k = n;
        while (k > 0 && ++idx[k - 1] == all.size()) idx[--k] = 0;
        if (k == 0) break;
      }
    }
  }

  // A candidate input value, possibly not built yet: either `whole`, or f applied to args.
  struct Shape {
    const Term* whole = nullptr;
    Sym f = Sym::Pair;
    const Term* args[3] = {nullptr, nullptr, nullptr};

    bool is_app(Sym g) const { return whole ? whole->is_app(g) : f == g; }
    const Term& arg(int i) const { return whole ? whole->arg(i) : *args[i - 1]; }
    bool equals(const Term& t) const {
      if (whole) return *whole == t;
      if (!t.is_app(f)) return false;
      for (int i = 1; i <= arity(f); ++i) {
        if (!(t.arg(i) == *args[i - 1])) return false;
      }
      return true;
    }
  };

  // g(args) with the input variable at args[slot] and every other argument ground.
  struct Site {
    Sym g;
    std::vector<Term> args;
    int slot;
  };

  // What the input's continuation does before its next communication.
  struct Plan {
    enum Mode { Live, Dead, Guard, Full } mode = Live;
    // Guard: a conditional with an empty else branch whose sides, while every site stays
    // stuck, are equal for every value (Any), for exactly `only` (One), or never (None).
    std::vector<Site> sites;
    enum Eq { None, Any, One } eq = None;
    Term only;
  };

  // Records the sites of x in a normalized term; false when a value could create a redex
  // anywhere other than at a site.
  static bool collect_sites(const Term& t, const std::string& x, std::vector<Site>& sites) {
    if (!occurs_var(t, x)) return true;
    if (!t.is_app()) return true;
    if (!is_destructor(t.sym())) {
      for (const Term& a : t.args()) {
        if (!collect_sites(a, x, sites)) return false;
      }
      return true;
    }
    if (t.sym() == Sym::Check) return false;
    int direct = -1;
    int holding = 0;
    for (size_t i = 0; i < t.args().size(); ++i) {
      const Term& a = t.args()[i];
      if (!occurs_var(a, x)) continue;
      ++holding;
      if (a.is_var()) {
        direct = static_cast<int>(i);
      } else if (i == 0 && a.is_app() && is_destructor(a.sym())) {
        if (!collect_sites(a, x, sites)) return false;
      } else {
        return false;
      }
    }
    if (direct >= 0) {
      if (holding > 1) return false;
      sites.push_back({t.sym(), t.args(), direct});
    }
    return true;
  }

  static bool unify_one(const Term& a, const Term& b, const std::string& x,
                        std::optional<Term>& binding) {
    if (a == b) return true;
    auto bind = [&](const Term& t) {
      if (occurs_var(t, x)) return false;
      if (binding && *binding != t) return false;
      binding = t;
      return true;
    };
    if (a.is_var() && a.id() == x) return bind(b);
    if (b.is_var() && b.id() == x) return bind(a);
    if (!a.is_app() || !b.is_app(a.sym())) return false;
    for (size_t i = 0; i < a.args().size(); ++i) {
      if (!unify_one(a.args()[i], b.args()[i], x, binding)) return false;
    }
    return true;
  }

  Plan plan(const State& st, const Thread& th) const {
    Plan pl;
    Substitution m;
    for (const auto& [v, t] : th.env->vars) m[v] = substitute(st.sig_nf, t);
    std::map<std::string, std::string> names = th.env->names;
    const Proc* q = th.p->children[0].get();
    while (q->kind == PKind::New) {
      names[q->name] = q->name + th.env->suffix;
      q = q->children[0].get();
    }
    if (q->kind == PKind::Nil) {
      pl.mode = Plan::Dead;
      return pl;
    }
    if (q->kind != PKind::If) return pl;
    pl.mode = Plan::Full;
    if (q->children[1]->kind != PKind::Nil) return pl;
    const std::string& x = th.p->var;
    Term l = normalize(substitute(m, rename_names(q->t1, names)));
    Term r = normalize(substitute(m, rename_names(q->t2, names)));
    if (!collect_sites(l, x, pl.sites) || !collect_sites(r, x, pl.sites)) return pl;
    std::optional<Term> binding;
    if (l == r) {
      pl.eq = Plan::Any;
    } else if (unify_one(l, r, x, binding)) {
      pl.eq = Plan::One;
      pl.only = *binding;
    }
    pl.mode = Plan::Guard;
    return pl;
  }

  static bool site_reduces(const Site& s, const Shape& v) {
    switch (s.g) {
      case Sym::Proj1:
      case Sym::Proj2:
        return v.is_app(Sym::Pair);
      case Sym::Retrieve:
        return v.is_app(Sym::Sign);
      case Sym::Dec:
        if (s.slot == 0) return v.is_app(Sym::Enc) && v.arg(2) == s.args[1];
        return s.args[0].is_app(Sym::Enc) && v.equals(s.args[0].arg(2));
      case Sym::Deca:
        if (s.slot == 0) {
          return v.is_app(Sym::Enca) && v.arg(2).is_app(Sym::Pub) &&
                 s.args[1].is_app(Sym::Priv) && v.arg(2).arg(1) == s.args[1].arg(1);
        }
        return s.args[0].is_app(Sym::Enca) && s.args[0].arg(2).is_app(Sym::Pub) &&
               v.is_app(Sym::Priv) && v.arg(1) == s.args[0].arg(2).arg(1);
      default:
        return true;
    }
  }

  enum class Quick { Reject, Accept, Probe };

  static Quick quick(const Plan& pl, const Shape& v) {
    switch (pl.mode) {
      case Plan::Live:
        return Quick::Accept;
      case Plan::Dead:
        return Quick::Reject;
      case Plan::Full:
        return Quick::Probe;
      case Plan::Guard:
        break;
    }
    for (const Site& s : pl.sites) {
      if (site_reduces(s, v)) return Quick::Probe;
    }
    if (pl.eq == Plan::Any || (pl.eq == Plan::One && v.equals(pl.only))) return Quick::Probe;
    return Quick::Reject;
  }

  void start_block(const State& st, State& n, const Thread& th) const {
    n.block = st.block + 1;
    n.last_key = th.key;
    n.last_first_handle = static_cast<int>(st.raw.size()) + 1;
  }

  template <class Emit>
  void successors(const State& st, Emit emit) const {
    for (size_t i = 0; i < st.threads.size(); ++i) {
      const Thread& th = st.threads[i];
      const Proc& p = *th.p;
      if (p.kind != PKind::In) continue;
      std::string ch = channel(*th.env, p.name);
      if (st.restricted.count(ch)) {
        // private communication with every matching output; never reordered
        for (size_t j = 0; j < st.threads.size(); ++j) {
          const Thread& o = st.threads[j];
          if (o.p->kind != PKind::Out || channel(*o.env, o.p->name) != ch) continue;
          State n = st;
          n.threads.clear();
          for (size_t k = 0; k < st.threads.size(); ++k) {
            if (k != i && k != j) n.threads.push_back(st.threads[k]);
          }
          start_block(st, n, th);
          n.last_key.clear();
          Term msg = instantiate(*o.env, o.p->t1);
          auto e = std::make_shared<Env>(*th.env);
          e->vars.emplace_back(p.var, msg);
          e->private_input = true;
          log(n, Event{"comm(" + ch + ", " + to_string(msg) + ")", 0, {}, std::nullopt});
          ++n.length;
          std::vector<Thread> blocked;
          execute(n, Thread{o.p->children[0].get(), o.env, n.block, {}}, blocked);
          execute(n, Thread{p.children[0].get(), e, n.block, {}}, blocked);
          n.threads.insert(n.threads.end(), blocked.begin(), blocked.end());
          finish(n);
          emit(std::move(n));
        }
        continue;
      }
      if (!can_act(*p.children[0])) continue;
      // Independent of the last block unless spawned by it or using its outputs.
      bool ordered = st.last_key.empty() || th.birth == st.block || th.key > st.last_key;
      Plan pl = plan(st, th);
      if (pl.mode == Plan::Dead) continue;
      auto take = [&](const Shape& sh, const std::function<Candidate()>& build) {
        Quick qk = quick(pl, sh);
        if (qk == Quick::Reject) return;
        Candidate c = build();
        if (!ordered && !c.fresh) return;
        if (qk == Quick::Probe && !probe(st, th, c.value)) return;
        State n = st;
        n.threads.erase(n.threads.begin() + static_cast<long>(i));
        start_block(st, n, th);
        auto e = std::make_shared<Env>(*th.env);
        e->vars.emplace_back(p.var, c.recipe);
        log(n, Event{"in(" + ch + ", " + to_string(c.recipe) + ")", 0, {}, std::nullopt});
        ++n.length;
        std::vector<Thread> blocked;
        execute(n, Thread{p.children[0].get(), e, n.block, {}}, blocked);
        n.threads.insert(n.threads.end(), blocked.begin(), blocked.end());
        finish(n);
        emit(std::move(n));
      };
      std::unordered_set<Term> seen;
      size_t top = 0;
      std::vector<Candidate> lower = lower_levels(st, seen, top);
      for (const Candidate& c : lower) {
        Shape sh;
        sh.whole = &c.value;
        take(sh, [&] { return c; });
      }
      if (b_.recipe_depth < 2) continue;
      for_each_layer(lower, top, [&](Sym f, const std::vector<size_t>& idx) {
        Shape sh;
        sh.f = f;
        for (size_t k = 0; k < idx.size(); ++k) sh.args[k] = &lower[idx[k]].value;
        if (quick(pl, sh) == Quick::Reject) return;
        std::vector<Term> vs, rs;
        bool fresh = false;
        for (size_t j : idx) {
          vs.push_back(lower[j].value);
          rs.push_back(lower[j].recipe);
          fresh = fresh || lower[j].fresh;
        }
        Term v = Term::app(f, std::move(vs));
        if (!seen.insert(v).second) return;
        Candidate c{v, Term::app(f, std::move(rs)), fresh};
        Shape whole;
        whole.whole = &c.value;
        take(whole, [&] { return c; });
      });
    }
  }

  const Process& p_;
  std::string s_;
  ExplorationBounds b_;
  std::vector<Term> constants_;
};

}  // namespace

ExplorationResult explore(const Process& p, const std::string& s, const ExplorationBounds& b) {
  Explorer ex(p, s, b);
  std::vector<std::pair<std::string, StandardFrame>> found;
  ex.run([&](const State& st, bool fresh) {
    if (fresh) {
      StandardFrame f = ex.standard_frame(st);
      std::string key;
      for (const auto& [h, t] : f.normalized().bindings) key += to_string(t) + ";";
      found.emplace_back(key, std::move(f));
    }
    return true;
  });
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  ExplorationResult r;
  for (auto& [k, f] : found) r.frames.push_back(std::move(f));
  r.truncated = ex.truncated;
  r.states = ex.states;
  return r;
}

ExplorationSummary explore_each(const Process& p, const std::string& s,
                                const ExplorationBounds& b,
                                const std::function<bool(const StandardFrame&)>& visit) {
  Explorer ex(p, s, b);
  ExplorationSummary sum;
  ex.run([&](const State& st, bool fresh) {
    if (!fresh) return true;
    ++sum.frames;
    if (!visit(ex.standard_frame(st))) {
      sum.stopped = true;
      return false;
    }
    return true;
  });
  sum.truncated = ex.truncated;
  sum.states = ex.states;
  return sum;
}

bool check_standard_frame(const StandardFrame& f, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (f.provenance.size() != f.frame.bindings.size()) return fail("provenance length mismatch");
  Substitution sigma;
  for (size_t i = 0; i < f.frame.bindings.size(); ++i) {
    const BindingProvenance& pr = f.provenance[i];
    for (const auto& [v, t] : pr.theta) {
      if (!pr.public_theta) continue;
      for (const std::string& h : variables(t)) {
        if (!sigma.count(h)) return fail("theta uses handle " + h + " before it exists");
      }
      for (const std::string& n : free_names(t)) {
        if (f.frame.restricted.count(n)) return fail("theta mentions restricted name " + n);
      }
      if (occurs_sym(t, Sym::Priv)) return fail("theta uses priv");
    }
    Term expect = substitute(sigma, substitute(pr.theta, rename_names(pr.message, pr.names)));
    if (expect != f.frame.bindings[i].second) {
      return fail("binding " + f.frame.bindings[i].first + " does not follow the recurrence");
    }
    sigma[f.frame.bindings[i].first] = f.frame.bindings[i].second;
  }
  return true;
}

SecrecyEvidence check_syntactic_secrecy_bounded(const Process& p, const std::string& s,
                                                const ExplorationBounds& b) {
  Explorer ex(p, s, b);
  SecrecyEvidence ev;
  ex.run([&](const State& st, bool fresh) {
    if (!fresh) return true;
    ++ev.frames;
    Frame f = ex.nf_frame(st);
    KnowledgeSet ks(f);
    for (const std::string& n : f.restricted) {
      if (base_name(n) != s) continue;
      if (auto r = ks.deduce(Term::name(n))) {
        ev.secret = false;
        ev.recipe = *r;
        ev.secret_copy = n;
        ev.attack = ex.standard_frame(st);
        return false;
      }
    }
    return true;
  });
  ev.truncated = ex.truncated;
  ev.states = ex.states;
  return ev;
}

}  // namespace strongsec
