#include <gtest/gtest.h>

#include "strongsec/error.hpp"
#include "support.hpp"

using namespace strongsec;
using namespace testsupport;

namespace {

Frame F(const std::string& text) { return parse_frame(text); }

const Frame kEx21 = F("frame { restrict k, k', r; x -> enc(k,k',r); y -> k'; }");

}  // namespace

TEST(Frame, ParsePrint) {
  Frame f = F("frame { restrict s, k, r; x -> enc(s,k,r); y -> k; }");
  EXPECT_EQ(f.restricted, (std::set<std::string>{"s", "k", "r"}));
  ASSERT_EQ(f.bindings.size(), 2u);
  EXPECT_EQ(f.bindings[0], std::make_pair(std::string("x"), T("enc(s,k,r)")));
  EXPECT_EQ(to_string(f), "new k,r,s.{x->enc(s,k,r), y->k}");
  // identifiers in bindings are names, so bindings are ground
  EXPECT_TRUE(F("frame { x -> z1; }").bindings[0].second.is_name());
  EXPECT_THROW(F("frame { x -> enc(a,b); }"), ParseError);
}

TEST(Frame, SaturationExample21) {
  KnowledgeSet ks = saturate(kEx21);
  const Term* r = ks.recipe_for(T("k"));
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(evaluate(kEx21, *r), T("k"));
  EXPECT_EQ(*r, R("dec(x,y)", kEx21));
}

TEST(Frame, SaturationOfEmptyFrame) {
  KnowledgeSet ks = saturate(F("frame { restrict s; }"));
  for (const auto& e : ks.entries()) EXPECT_FALSE(occurs_name(e.value, "s"));
}

TEST(Frame, SecretUnderUnknownKey) {
  Frame f = F("frame { restrict s, k, r; x -> enc(s,k,r); }");
  EXPECT_EQ(saturate(f).recipe_for(T("s")), nullptr);
  EXPECT_FALSE(deduce(f, T("s")));
  BruteDeduce oracle(f, T("s"), 7);
  EXPECT_FALSE(oracle.recipe(T("s")));
}

TEST(Frame, DeduceExample21) {
  auto r = deduce(kEx21, T("<k,k>"));
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, R("<dec(x,y),dec(x,y)>", kEx21));
  auto kk = deduce(kEx21, T("<k,k'>"));
  ASSERT_TRUE(kk);
  EXPECT_EQ(evaluate(kEx21, *kk), T("<k,k'>"));
  EXPECT_EQ(deduce(kEx21, T("n")), T("n"));
  EXPECT_FALSE(deduce(kEx21, T("r")));
}

TEST(Frame, PassesTestExample23) {
  Frame phi1 = load_frame("frames/ex22-phi1.frame");
  Frame phi2 = load_frame("frames/ex22-phi2.frame");
  Term u = R("dec(x,z)", phi1);
  Term v = R("pi1(y)", phi1);
  EXPECT_TRUE(passes_test(phi1, u, v));
  EXPECT_FALSE(passes_test(phi2, u, v));
  EXPECT_TRUE(passes_test(phi2, R("x", phi2), R("x", phi2)));
}

TEST(Frame, PassesTestRenamesRestrictedApart) {
  // the test's free name k is not the frame's restricted k
  Frame f = F("frame { restrict k; x -> k; }");
  EXPECT_FALSE(passes_test(f, R("x", f), T("k")));
}

TEST(Frame, StaticEquivExample23) {
  Frame phi1 = load_frame("frames/ex22-phi1.frame");
  Frame phi2 = load_frame("frames/ex22-phi2.frame");
  EquivalenceVerdict v = static_equiv(phi1, phi2);
  ASSERT_FALSE(v.equivalent);
  auto [u, w] = *v.witness;
  EXPECT_EQ(std::make_pair(u, w), std::make_pair(R("dec(x,z)", phi1), R("pi1(y)", phi1)));
  EXPECT_NE(passes_test(phi1, u, w), passes_test(phi2, u, w));
  EXPECT_TRUE(static_equiv(phi1, phi1).equivalent);
  EXPECT_THROW(static_equiv(phi1, F("frame { x -> a; }")), DomainMismatch);
}

TEST(Frame, StaticEquivPsi1) {
  Frame psi = load_frame("frames/psi1.frame");
  EquivalenceVerdict v = static_equiv(instantiate(psi, "s", T("n")), instantiate(psi, "s", T("n'")));
  ASSERT_FALSE(v.equivalent);
  EXPECT_EQ(*v.witness, std::make_pair(R("x", psi), R("y", psi)));
}

TEST(Frame, Instantiate) {
  Frame f = F("frame { restrict s, k, r; x -> enc(s,k,r); }");
  Frame g = instantiate(f, "s", T("a"));
  EXPECT_EQ(g.bindings[0].second, T("enc(a,k,r)"));
  EXPECT_EQ(g.restricted, f.restricted);
  EXPECT_THROW(instantiate(f, "s", T("priv(a)")), NotPublic);
  EXPECT_THROW(instantiate(f, "s", T("<k,a>")), NameClash);
  Frame psi2 = load_frame("frames/psi2.frame");
  Frame p2k = instantiate(psi2, "s", T("k"));
  EXPECT_TRUE(passes_test(p2k, R("pi2(dec(x,k))", p2k), T("n'")));
}

TEST(Frame, WellFormedExamples) {
  EXPECT_TRUE(check_well_formed_frame(load_frame("frames/psi1.frame"), "s").fails(1));
  EXPECT_TRUE(check_well_formed_frame(load_frame("frames/psi2.frame"), "s").fails(2));
  EXPECT_TRUE(check_well_formed_frame(load_frame("frames/psi3.frame"), "s").fails(3));
  EXPECT_TRUE(check_well_formed_frame(F("frame { restrict s, k, r; x -> enc(s,k,r); }"), "s").pass());
}

TEST(Frame, ExtendedWellFormedExamples) {
  EXPECT_TRUE(check_extended_well_formed(load_frame("frames/ext-wf.frame"), "s").pass());
  EXPECT_TRUE(check_extended_well_formed(load_frame("frames/ext-phi3.frame"), "s").fails(3));
  EXPECT_TRUE(check_extended_well_formed(load_frame("frames/ext-phi4.frame"), "s").fails(4));
  FrameReport nf = check_extended_well_formed(F("frame { restrict s, k, r; x -> pi1(<enc(s,k,r),a>); }"), "s");
  EXPECT_TRUE(nf.fails(1));
}

TEST(Frame, ViolationsCarryPositions) {
  FrameReport r = check_well_formed_frame(load_frame("frames/psi2.frame"), "s");
  bool found = false;
  for (const Violation& v : r.violations) {
    if (v.condition == 2) {
      EXPECT_EQ(v.handle, "x");
      EXPECT_EQ(v.position, (Position{2}));
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Frame, PassiveTransfer) {
  PassiveReport psi4 = check_passive_transfer(load_frame("frames/psi4.frame"), "s", {}, 2);
  EXPECT_EQ(psi4.status, PassiveStatus::NotStronglySecret);
  ASSERT_TRUE(psi4.secret_recipe);
  ASSERT_TRUE(psi4.test);

  Frame plain = F("frame { restrict s, k, r; x -> enc(s,k,r); }");
  PassiveReport ok = check_passive_transfer(plain, "s", {{T("a"), T("b")}}, 2);
  EXPECT_EQ(ok.status, PassiveStatus::StrongSecrecyHolds);
  ASSERT_EQ(ok.samples.size(), 1u);
  EXPECT_TRUE(ok.samples[0].verdict.equivalent);
  EXPECT_TRUE(brute_equiv(instantiate(plain, "s", T("a")), instantiate(plain, "s", T("b")), 4).equivalent);

  PassiveReport psi3 = check_passive_transfer(load_frame("frames/psi3.frame"), "s", {}, 2);
  EXPECT_EQ(psi3.status, PassiveStatus::NotWellFormed);
}

TEST(Frame, Psi4WitnessTest) {
  Frame psi4 = load_frame("frames/psi4.frame");
  Frame a = instantiate(psi4, "s", T("n"));
  Frame b = instantiate(psi4, "s", T("n'"));
  Term u = R("check(n,x,y)", psi4);
  EXPECT_TRUE(passes_test(a, u, T("ok")));
  EXPECT_FALSE(passes_test(b, u, T("ok")));
}

// ---- properties ----

namespace {
const std::vector<std::string> kPool = {"a", "b", "k", "r", "s"};
}  // namespace

TEST(FrameProperty, DeduceMatchesBruteForce) {
  Gen g(31);
  int beyond = 0;
  for (int i = 0; i < 60; ++i) {
    Frame f = g.frame(4, 4, kPool);
    for (const Term& m : deduction_targets(f, g, kPool)) {
      auto mine = deduce(f, m);
      BruteDeduce oracle(f, m, 7);
      auto ref = oracle.recipe(m);
      if (mine) {
        ASSERT_EQ(evaluate(f, *mine), m) << to_string(f) << " " << to_string(m);
        ASSERT_TRUE(is_public(*mine, f.restricted));
      }
      if (ref) ASSERT_TRUE(mine) << to_string(f) << " deduces " << to_string(m) << " by " << to_string(*ref);
      if (mine && !ref) {
        ASSERT_GT(mine->size(), 7) << to_string(f) << " " << to_string(m);
        ++beyond;
      }
    }
  }
  RecordProperty("recipes_beyond_size_7", beyond);
}

TEST(FrameProperty, NaiveOracleAgreesAtDepth2) {
  Gen g(32);
  for (int i = 0; i < 60; ++i) {
    Frame a = g.frame(2, 3, kPool);
    Frame b = a;
    b.bindings.back().second = g.constructor(3, kPool);
    if (g.coin(0.5)) b.restricted = g.frame(1, 1, kPool).restricted;
    bool naive = !naive_distinguish(a, b, 2).has_value();
    EquivalenceVerdict br = brute_equiv(a, b, 2);
    ASSERT_EQ(br.equivalent, naive) << to_string(a) << " / " << to_string(b);
    if (!br.equivalent) {
      auto [u, v] = *br.witness;
      ASSERT_NE(passes_test(a, u, v), passes_test(b, u, v));
    }
  }
}

TEST(FrameProperty, StaticEquivAgreesWithBrute) {
  Gen g(33);
  for (int i = 0; i < 40; ++i) {
    Frame a = g.frame(3, 3, kPool);
    Frame b = a;
    b.bindings.back().second = g.constructor(3, kPool);
    EquivalenceVerdict fast = static_equiv(a, b);
    EquivalenceVerdict slow = brute_equiv(a, b, 3);
    ASSERT_EQ(fast.equivalent, slow.equivalent)
        << to_string(a) << " / " << to_string(b) << " brute witness "
        << (slow.witness ? to_string(slow.witness->first) + " = " + to_string(slow.witness->second) : "");
    EXPECT_EQ(static_equiv(b, a).equivalent, fast.equivalent);
    if (!fast.equivalent) {
      auto [u, v] = *fast.witness;
      ASSERT_NE(passes_test(a, u, v), passes_test(b, u, v));
    }
  }
}

TEST(FrameProperty, EncryptionAboveUndeducibleSecret) {
  Gen g(34);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    Frame f = g.wellformed(3);
    if (!check_well_formed_frame(f, "s").pass() || deduce(f, T("s"))) continue;
    ++checked;
    for (const auto& [h, t] : f.bindings) {
      for (const Position& p : name_positions(t, "s")) {
        ASSERT_TRUE(encryption_plaintext_above(t, p)) << to_string(f);
      }
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(FrameProperty, WellFormedIsExtended) {
  Gen g(35);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    Frame f = g.wellformed(3);
    if (!check_well_formed_frame(f, "s").pass() || deduce(f, T("s"))) continue;
    ++checked;
    ASSERT_TRUE(check_extended_well_formed(f, "s").pass()) << to_string(f);
  }
  EXPECT_GT(checked, 50);
}

TEST(FrameProperty, TestsIgnoreInstantiation) {
  Gen g(36);
  const std::vector<std::string> pub = {"a", "b", "c"};
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Frame f = g.wellformed(3);
    if (!check_well_formed_frame(f, "s").pass() || deduce(f, T("s"))) continue;
    Substitution sigma = f.sigma();
    std::vector<Term> recipes;
    for (const auto& [h, t] : f.bindings) recipes.push_back(Term::var(h));
    KnowledgeSet ks(f);
    for (const auto& e : ks.entries()) recipes.push_back(e.recipe);
    recipes.push_back(g.name(pub));
    for (int j = 0; j < 30; ++j) {
      Term u = g.pick(recipes);
      Term v = g.pick(recipes);
      if (g.coin(0.3)) u = Term::app(Sym::Pair, u, g.pick(recipes));
      Term m = g.constructor(2, pub);
      Term us = substitute(sigma, u);
      Term vs = substitute(sigma, v);
      if (equal_mod_E(replace_name(us, "s", m), replace_name(vs, "s", m))) {
        ++checked;
        ASSERT_TRUE(equal_mod_E(us, vs)) << to_string(f) << " " << to_string(u) << " " << to_string(v);
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(FrameProperty, InstancesEquivalentIffSecret) {
  Gen g(37);
  int secret = 0;
  int leaked = 0;
  for (int i = 0; i < 200 && secret < 30; ++i) {
    Frame f = g.wellformed(2);
    if (!check_well_formed_frame(f, "s").pass()) continue;
    Frame fa = instantiate(f, "s", T("a"));
    Frame fb = instantiate(f, "s", T("b"));
    if (deduce(f, T("s"))) {
      ++leaked;
      PassiveReport r = check_passive_transfer(f, "s", {}, 2);
      ASSERT_TRUE(r.test);
      ASSERT_FALSE(static_equiv(fa, fb).equivalent);
    } else {
      ++secret;
      ASSERT_TRUE(brute_equiv(fa, fb, 3).equivalent) << to_string(f);
    }
  }
  EXPECT_GT(secret, 10);
  EXPECT_GT(leaked, 5);
}
