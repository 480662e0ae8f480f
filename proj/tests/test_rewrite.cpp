#include <gtest/gtest.h>

#include "strongsec/error.hpp"
#include "support.hpp"

using namespace strongsec;
using testsupport::T;

TEST(Rewrite, SixRules) {
  ASSERT_EQ(rules().size(), 6u);
  for (const RuleInfo& r : rules()) {
    if (r.rhs_pos) {
      // the rhs variable occurs exactly once in the lhs
      int count = 0;
      for (const Position& p : var_positions(r.lhs)) count += subterm_at(r.lhs, p) == r.rhs;
      EXPECT_EQ(count, 1) << rule_name(r.rule);
      EXPECT_EQ(subterm_at(r.lhs, *r.rhs_pos), r.rhs);
    } else {
      EXPECT_EQ(r.rhs, T("ok"));
    }
  }
}

TEST(Rewrite, EachEquation) {
  EXPECT_EQ(normalize(T("pi1(<a,b>)")), T("a"));
  EXPECT_EQ(normalize(T("pi2(<a,b>)")), T("b"));
  EXPECT_EQ(normalize(T("dec(enc(m,k,r),k)")), T("m"));
  EXPECT_EQ(normalize(T("deca(enca(m,pub(a),r),priv(a))")), T("m"));
  EXPECT_EQ(normalize(T("check(m,sign(m,priv(a)),pub(a))")), T("ok"));
  EXPECT_EQ(normalize(T("retrieve(sign(m,k))")), T("m"));
}

TEST(Rewrite, ReduceOnce) {
  auto r = reduce_once(T("dec(enc(m,k,r),k)"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->first, T("m"));
  EXPECT_EQ(r->second.rule, Rule::Dec);
  EXPECT_TRUE(r->second.redex_position.empty());
  EXPECT_EQ(r->second.matcher.at("z1"), T("m"));
  EXPECT_FALSE(reduce_once(T("<a,b>")));
}

TEST(Rewrite, LeftmostInnermost) {
  auto r = reduce_once(T("<pi1(<a,b>),pi2(pi1(<<c,d>,e>))>"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->second.redex_position, (Position{1}));
  auto s = reduce_once(T("pi2(pi1(<<c,d>,e>))"));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->second.redex_position, (Position{1}));
}

TEST(Rewrite, Normalize) {
  EXPECT_EQ(normalize(T("pi1(<pi2(<a,b>),c>)")), T("b"));
  EXPECT_EQ(normalize(T("retrieve(sign(m,k))")), T("m"));
  Term stuck = T("dec(enc(m,k,r),k')");
  EXPECT_EQ(normalize(stuck), stuck);
  EXPECT_EQ(normalize(T("check(m,sign(m,priv(a)),pub(b))")), T("check(m,sign(m,priv(a)),pub(b))"));
}

TEST(Rewrite, EqualModE) {
  EXPECT_TRUE(equal_mod_E(T("deca(enca(m,pub(a),r),priv(a))"), T("m")));
  EXPECT_FALSE(equal_mod_E(T("a"), T("b")));
  Term t = T("<pi1(<a,b>),dec(enc(c,k,r),k)>");
  EXPECT_TRUE(equal_mod_E(t, normalize(t)));
}

TEST(Rewrite, Par1) {
  Term u = T("dec(enc(m,k,r),k)");
  EXPECT_EQ(par1(u, {1, 1}, {}), Position{});
  EXPECT_FALSE(par1(u, {1, 2}, {}));
  EXPECT_EQ(par1(T("<dec(enc(m,k,r),k),c>"), {2}, {1}), (Position{2}));
  EXPECT_THROW(par1(T("<a,b>"), {1}, {}), NotARedex);
}

TEST(Rewrite, ParAndInverse) {
  Term u = T("dec(enc(<a,s>,k,r),k)");
  EXPECT_EQ(par(u, {1, 1, 2}), (Position{2}));
  EXPECT_EQ(par_inv(u, {2}), (Position{1, 1, 2}));
  Term n = T("<a,enc(b,k,r)>");
  for (const Position& p : positions(n)) EXPECT_EQ(par(n, p), p);
}

TEST(Rewrite, TraceMatchesSteps) {
  Term t = T("pi1(dec(enc(<a,s>,k,r),k))");
  auto trace = normalization_trace(t);
  ASSERT_EQ(trace.size(), 2u);
  Term cur = t;
  for (const ReductionStep& st : trace) {
    const RuleInfo& info = rule_info(st.rule);
    EXPECT_EQ(subterm_at(cur, st.redex_position), substitute(st.matcher, info.lhs));
    cur = replace_at(cur, st.redex_position, substitute(st.matcher, info.rhs));
  }
  EXPECT_EQ(cur, T("a"));
}

// ---- properties ----

namespace {
const std::vector<std::string> kPool = {"a", "b", "k", "r"};
}

TEST(RewriteProperty, StrategyIndependent) {
  testsupport::Gen g(21);
  std::mt19937_64 rng(22);
  for (int i = 0; i < 1000; ++i) {
    Term t = g.any(6, kPool);
    Term li = normalize_by_steps(t, Strategy::LeftmostInnermost);
    ASSERT_EQ(normalize_by_steps(t, Strategy::RightmostInnermost), li) << to_string(t);
    ASSERT_EQ(normalize_by_steps(t, Strategy::Random, &rng), li) << to_string(t);
    ASSERT_EQ(normalize(t), li) << to_string(t);
    ASSERT_TRUE(li.normal());
  }
}

TEST(RewriteProperty, Idempotent) {
  testsupport::Gen g(23);
  for (int i = 0; i < 500; ++i) {
    Term n = normalize(g.any(6, kPool));
    ASSERT_EQ(normalize(n), n);
    ASSERT_FALSE(reduce_once(n));
  }
}

TEST(RewriteProperty, StableUnderNameSubstitution) {
  testsupport::Gen g(24);
  std::vector<std::string> pool = {"a", "b", "k", "s"};
  for (int i = 0; i < 500; ++i) {
    Term t = g.any(6, pool);
    ASSERT_EQ(normalize(replace_name(t, "s", T("n"))), replace_name(normalize(t), "s", T("n")))
        << to_string(t);
  }
}

TEST(RewriteProperty, ParRoundTrip) {
  testsupport::Gen g(25);
  for (int i = 0; i < 500; ++i) {
    Term u = g.reducible(6, kPool);
    Term nf = normalize(u);
    for (const Position& p : positions(nf)) {
      auto back = par_inv(u, p);
      if (back) ASSERT_EQ(par(u, *back), p) << to_string(u);
    }
  }
}

TEST(RewriteProperty, ParSubtermCorrespondence) {
  testsupport::Gen g(26);
  for (int i = 0; i < 500; ++i) {
    Term u = g.reducible(6, kPool);
    Term nf = normalize(u);
    for (const Position& p : positions(u)) {
      auto img = par(u, p);
      if (!img) continue;
      Term here = subterm_at(u, p);
      Term there = subterm_at(nf, *img);
      // moved subterms are unchanged; positions above a contracted redex hold its reduct
      if (here.normal()) ASSERT_EQ(here, there) << to_string(u) << " at " << position_string(p);
      ASSERT_EQ(normalize(here), there) << to_string(u) << " at " << position_string(p);
    }
  }
}

TEST(RewriteProperty, ParStrategyIndependent) {
  // par along a rightmost-innermost sequence agrees with the default one
  testsupport::Gen g(27);
  for (int i = 0; i < 300; ++i) {
    Term u = g.reducible(5, kPool);
    for (const Position& p : positions(u)) {
      Term cur = u;
      std::optional<Position> pos = p;
      while (pos) {
        auto st = reduce_once(cur, Strategy::RightmostInnermost);
        if (!st) break;
        pos = par1(cur, *pos, st->second.redex_position);
        cur = st->first;
      }
      ASSERT_EQ(pos, par(u, p)) << to_string(u) << " at " << position_string(p);
    }
  }
}
