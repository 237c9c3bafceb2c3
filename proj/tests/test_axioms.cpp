#include <gtest/gtest.h>

#include "gcq/axioms.hpp"
#include "gcq/containment.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace gcq;
using gcq::testing::pairs_of;

namespace {

Signature four_sorts() {
  Signature sig;
  sig.add("P", {1, 0});
  sig.add("Q", {2, 0});
  sig.add("R", {1, 1});
  sig.add("T", {2, 1});
  return sig;
}

Signature binary() {
  Signature sig;
  sig.add("R", {1, 1});
  sig.add("S", {1, 1});
  return sig;
}

const AxiomEntry& find(const std::vector<AxiomEntry>& catalog, const std::string& name) {
  for (const auto& a : catalog)
    if (a.name == name) return a;
  throw std::runtime_error("no axiom " + name);
}

using Pairs = std::set<std::pair<Element, Element>>;

Pairs as_pairs(const Relation& r) {
  Pairs out;
  for (const auto& [a, b] : r.pairs()) out.emplace(a.at(0), b.at(0));
  return out;
}

CpTerm random_cp(gcq::testing::Rng& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 2);
  switch (pick(rng)) {
    case 0: return CpTerm::rel(rng() % 2 ? "R" : "S");
    case 1: return CpTerm::id();
    case 2: return CpTerm::top();
    case 3: return CpTerm::meet(random_cp(rng, depth - 1), random_cp(rng, depth - 1));
    case 4: return CpTerm::comp(random_cp(rng, depth - 1), random_cp(rng, depth - 1));
    default: return CpTerm::converse(random_cp(rng, depth - 1));
  }
}

// Relation-algebra semantics by brute force on pairs.
Pairs cp_eval(const CpTerm& t, const RelModel& m) {
  const Element X = static_cast<Element>(m.size());
  Pairs out;
  switch (t.kind()) {
    case CpTerm::Kind::Top:
      for (Element a = 0; a < X; ++a)
        for (Element b = 0; b < X; ++b) out.emplace(a, b);
      return out;
    case CpTerm::Kind::Id:
      for (Element a = 0; a < X; ++a) out.emplace(a, a);
      return out;
    case CpTerm::Kind::Rel: return as_pairs(m.rho(t.symbol()));
    case CpTerm::Kind::Meet: {
      Pairs l = cp_eval(t.lhs(), m), r = cp_eval(t.rhs(), m);
      for (const auto& p : l)
        if (r.count(p)) out.insert(p);
      return out;
    }
    case CpTerm::Kind::Comp: {
      Pairs l = cp_eval(t.lhs(), m), r = cp_eval(t.rhs(), m);
      for (const auto& [a, b] : l)
        for (const auto& [c, d] : r)
          if (b == c) out.emplace(a, d);
      return out;
    }
    case CpTerm::Kind::Converse:
      for (const auto& [a, b] : cp_eval(t.lhs(), m)) out.emplace(b, a);
      return out;
  }
  return out;
}

}  // namespace

TEST(Catalog, HasEveryEntry) {
  auto catalog = axiom_catalog(four_sorts());
  EXPECT_EQ(catalog.size(), 8u + 8u + 4u + 2u * 4u);
  for (const char* name : {"smc-i", "smc-viii", "A", "C", "U", "Aop", "Cop", "Uop", "S", "F", "UC", "CU", "MC", "CM",
                           "L1[P]", "L2[T]"})
    EXPECT_NO_THROW(find(catalog, name)) << name;
  for (const auto& a : catalog) EXPECT_EQ(a.lhs.sort(), a.rhs.sort()) << a.name;
  EXPECT_EQ(find(catalog, "L1[R]").symbol, std::optional<std::string>("R"));
}

TEST(Catalog, NamedShapes) {
  auto catalog = axiom_catalog(four_sorts());
  const AxiomEntry& s = find(catalog, "S");
  EXPECT_EQ(s.lhs, Term::seq(Term::copy(), Term::merge()));
  EXPECT_EQ(s.rhs, Term::id1());
  EXPECT_EQ(s.kind, AxiomKind::Equality);
  const AxiomEntry& cm = find(catalog, "CM");
  EXPECT_EQ(cm.lhs, Term::id1());
  EXPECT_EQ(cm.rhs, Term::seq(Term::copy(), Term::merge()));
  EXPECT_EQ(cm.kind, AxiomKind::LeftLeqRight);
  const AxiomEntry& l1 = find(catalog, "L1[T]");
  EXPECT_EQ(l1.lhs, Term::seq(Term::gen("T", {2, 1}), n_discard(1)));
  EXPECT_EQ(l1.rhs, n_discard(2));
}

TEST(Catalog, EveryEntryPassesBothChecks) {
  Signature sig = four_sorts();
  for (const auto& a : axiom_catalog(sig)) {
    AxiomReport sem = verify_axiom_semantic(a, sig, 100, 3, 7);
    EXPECT_TRUE(sem.passed) << a.name << ": " << sem.detail;
    EXPECT_EQ(sem.models_checked, 101u);
    EXPECT_TRUE(verify_axiom_graphical(a).passed) << a.name;
  }
}

TEST(Catalog, EmptySignatureUsesCopy) {
  auto catalog = axiom_catalog({});
  EXPECT_EQ(catalog.size(), 20u);
  for (const auto& a : catalog) EXPECT_TRUE(verify_axiom_graphical(a).passed) << a.name;
}

TEST(Reversed, AdjointnessAndLaxityFail) {
  Signature sig = four_sorts();
  auto catalog = axiom_catalog(sig);
  for (const char* name : {"MC", "UC", "CU", "L1[R]", "L1[T]", "L1[P]", "L2[R]", "L2[T]"}) {
    AxiomEntry r = reversed(find(catalog, name));
    EXPECT_EQ(r.name, std::string(name) + "-rev");
    AxiomReport sem = verify_axiom_semantic(r, sig, 100, 3, 7);
    EXPECT_FALSE(sem.passed) << name;
    EXPECT_TRUE(sem.countermodel.has_value()) << name;
    EXPECT_FALSE(verify_axiom_graphical(r).passed) << name;
  }
}

TEST(Reversed, ReportedCountermodelViolates) {
  Signature sig = four_sorts();
  AxiomEntry r = reversed(find(axiom_catalog(sig), "MC"));
  AxiomReport sem = verify_axiom_semantic(r, sig, 100, 3, 1);
  ASSERT_TRUE(sem.countermodel.has_value());
  EXPECT_GE(sem.countermodel->size(), 2u);
  EXPECT_FALSE(eval_gcq(r.lhs, *sem.countermodel).subset_of(eval_gcq(r.rhs, *sem.countermodel)));
}

TEST(Reversed, CopyMergeUnitIsTight) {
  // S makes copy;merge equal to the identity.
  AxiomEntry cm = find(axiom_catalog({}), "CM");
  EXPECT_TRUE(verify_axiom_semantic(reversed(cm), {}, 100, 3, 7).passed);
  EXPECT_TRUE(verify_axiom_graphical(reversed(cm)).passed);
}

TEST(Reversed, LaxCopyIsAnEqualityWithoutOutputs) {
  // With no outputs both sides of L2 duplicate nothing; the inequality is tight.
  Signature sig = four_sorts();
  AxiomEntry l2 = find(axiom_catalog(sig), "L2[P]");
  EXPECT_TRUE(verify_axiom_semantic(reversed(l2), sig, 100, 3, 7).passed);
  EXPECT_TRUE(decide_equivalence(l2.lhs, l2.rhs).holds);
}

TEST(Semantic, EmptyModelIsAlwaysChecked) {
  AxiomEntry cu = reversed(find(axiom_catalog({}), "UC"));
  // id0 ≤ spawn;discard fails only on the empty model.
  AxiomReport sem = verify_axiom_semantic(cu, {}, 0, 3, 1);
  EXPECT_FALSE(sem.passed);
  ASSERT_TRUE(sem.countermodel.has_value());
  EXPECT_EQ(sem.countermodel->size(), 0u);
}

TEST(SpiderDerivation, EachStepAndEndToEnd) {
  Signature sig;
  sig.add("R", {1, 1});
  auto p = [&](const char* text) { return parse_gcq(text, sig); };
  Term d1 = p("(copy (+) copy) ; (R (+) R (+) R (+) R) ; (id (+) swap (+) id) ; (merge (+) merge) ; (discard (+) discard)");
  Term d2 = p("((R ; copy) (+) (R ; copy)) ; (id (+) swap (+) id) ; (merge (+) merge) ; (discard (+) discard)");
  Term d3 = p("(R (+) R) ; merge ; copy ; (discard (+) discard)");
  Term d4 = p("merge ; copy ; (R (+) R) ; merge ; copy ; (discard (+) discard)");
  Term d5 = p("merge ; R ; copy ; merge ; copy ; (discard (+) discard)");
  Term d6 = p("merge ; R ; copy ; (discard (+) discard)");
  Term d7 = p("merge ; R ; discard");
  // d1 ≥ d2 by (L2), d2 = d3 by spider fusion, d3 ≥ d4 by (MC), d4 ≥ d5 by (L2),
  // d5 = d6 by (S), d6 = d7 by (Uop).
  EXPECT_TRUE(decide_inclusion(d2, d1).holds);
  EXPECT_TRUE(decide_equivalence(d2, d3).holds);
  EXPECT_TRUE(decide_inclusion(d4, d3).holds);
  EXPECT_TRUE(decide_inclusion(d5, d4).holds);
  EXPECT_TRUE(decide_equivalence(d5, d6).holds);
  EXPECT_TRUE(decide_equivalence(d6, d7).holds);
  EXPECT_TRUE(decide_inclusion(d7, d1).holds);
  EXPECT_FALSE(decide_inclusion(d1, d7).holds);
  EXPECT_EQ(term_to_cospan(d1).apex.edge_count(), 4u);
  EXPECT_EQ(term_to_cospan(d7).apex.edge_count(), 1u);
}

TEST(Encoding, Shapes) {
  EXPECT_EQ(encode_cp(CpTerm::id()), Term::id1());
  EXPECT_EQ(encode_cp(CpTerm::rel("R")), Term::gen("R", {1, 1}));
  gcq::testing::Rng rng(71);
  for (int i = 0; i < 50; ++i) {
    CpTerm a = random_cp(rng, 2), b = random_cp(rng, 2);
    EXPECT_EQ(encode_cp(CpTerm::comp(a, b)), Term::seq(encode_cp(a), encode_cp(b)));
    EXPECT_EQ(encode_cp(a).sort(), (Sort{1, 1}));
  }
}

TEST(EncodingProperty, SemanticIdentities) {
  gcq::testing::Rng rng(72);
  Signature sig = binary();
  for (int i = 0; i < 120; ++i) {
    RelModel m = random_model(sig, 3, rng);
    CpTerm a = random_cp(rng, 2), b = random_cp(rng, 2);
    Pairs ea = as_pairs(eval_gcq(encode_cp(a), m)), eb = as_pairs(eval_gcq(encode_cp(b), m));
    ASSERT_EQ(ea, cp_eval(a, m));
    EXPECT_EQ(as_pairs(eval_gcq(encode_cp(CpTerm::top()), m)), cp_eval(CpTerm::top(), m));
    EXPECT_EQ(as_pairs(eval_gcq(encode_cp(CpTerm::top()), m)).size(), m.size() * m.size());
    Pairs meet, comp, conv;
    for (const auto& x : ea)
      if (eb.count(x)) meet.insert(x);
    for (const auto& [x, y] : ea)
      for (const auto& [u, v] : eb)
        if (y == u) comp.emplace(x, v);
    for (const auto& [x, y] : ea) conv.emplace(y, x);
    EXPECT_EQ(as_pairs(eval_gcq(encode_cp(CpTerm::meet(a, b)), m)), meet);
    EXPECT_EQ(as_pairs(eval_gcq(encode_cp(CpTerm::comp(a, b)), m)), comp);
    EXPECT_EQ(as_pairs(eval_gcq(encode_cp(CpTerm::converse(a)), m)), conv);
  }
}

TEST(EncodingProperty, ConverseIsAnInvolution) {
  gcq::testing::Rng rng(73);
  for (int i = 0; i < 60; ++i) {
    CpTerm a = random_cp(rng, 2);
    EXPECT_TRUE(decide_equivalence(encode_cp(CpTerm::converse(CpTerm::converse(a))), encode_cp(a)).holds);
  }
}

TEST(RandomModel, RespectsBounds) {
  gcq::testing::Rng rng(74);
  Signature sig = four_sorts();
  bool saw_empty = false, saw_three = false;
  for (int i = 0; i < 200; ++i) {
    RelModel m = random_model(sig, 3, rng);
    EXPECT_LE(m.size(), 3u);
    saw_empty = saw_empty || m.size() == 0;
    saw_three = saw_three || m.size() == 3;
    for (const auto& [name, sort] : sig.symbols()) EXPECT_EQ(m.rho(name).sort(), sort);
  }
  EXPECT_TRUE(saw_empty && saw_three);
}
