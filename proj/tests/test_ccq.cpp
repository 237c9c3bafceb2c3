#include <gtest/gtest.h>

#include "gcq/ccq.hpp"
#include "gcq/error.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace gcq;
using namespace gcq::ccq;
using gcq::testing::brute_ccq;
using gcq::testing::for_each_model;
using gcq::testing::inputs_of;
using gcq::testing::random_judgment;

namespace {

Signature binary_r() {
  Signature sig;
  sig.add("R", {2, 0});
  return sig;
}

Signature mixed() {
  Signature sig;
  sig.add("P", {1, 0});
  sig.add("R", {2, 0});
  return sig;
}

RelModel model_ab(std::vector<std::pair<Element, Element>> r) {
  RelModel m(binary_r(), {"a", "b"});
  for (auto [x, y] : r) m.add("R", {x, y}, {});
  return m;
}

// Every model over `sig` with carrier at most max_size.
template <class Fn>
void for_small_models(const Signature& sig, std::size_t max_size, Fn fn) {
  for (std::size_t X = 0; X <= max_size; ++X) for_each_model(sig, X, fn);
}

}  // namespace

TEST(Parse, SharedSuccessorFormula) {
  Judgment j = parse_ccq("2 |- exists z0. (x0 = x1) /\\ R(x0, z0)", binary_r());
  EXPECT_EQ(j.context, 2u);
  Formula expected = Formula::exists(2, Formula::conj(Formula::eq(0, 1), Formula::rel("R", {0, 2})));
  EXPECT_TRUE(alpha_equivalent(j.formula, expected));
  EXPECT_EQ(free_vars(j.formula), (std::set<Var>{0, 1}));
}

TEST(Parse, TopAtEmptyContext) {
  Judgment j = parse_ccq("0 |- top", binary_r());
  EXPECT_EQ(j.context, 0u);
  EXPECT_TRUE(j.formula.as<Formula::Top>());
}

TEST(Parse, RejectsOutOfContextVariable) { EXPECT_THROW(parse_ccq("1 |- x0 = x1", binary_r()), ParseError); }

TEST(Parse, RejectsBadInput) {
  EXPECT_THROW(parse_ccq("2 |- R(x0)", binary_r()), Error);
  EXPECT_THROW(parse_ccq("2 |- S(x0, x1)", binary_r()), Error);
  EXPECT_THROW(parse_ccq("2 |- x0 = ", binary_r()), ParseError);
  EXPECT_THROW(parse_ccq("1 |- exists z. exists z. R(z, z)", binary_r()), ParseError);
  EXPECT_THROW(parse_ccq("x |- top", binary_r()), ParseError);
}

TEST(Parse, BoundNamesAreArbitrary) {
  Judgment a = parse_ccq("1 |- exists w. R(x0, w)", binary_r());
  Judgment b = parse_ccq("1|-exists z7.R(x0,z7)", binary_r());
  EXPECT_TRUE(alpha_equivalent(a.formula, b.formula));
}

TEST(Print, ReparsesToAlphaEquivalentFormula) {
  gcq::testing::Rng rng(3);
  Signature sig = mixed();
  for (int i = 0; i < 200; ++i) {
    Judgment j = random_judgment(sig, rng);
    Judgment back = parse_ccq(to_string(j), sig);
    EXPECT_EQ(back.context, j.context);
    EXPECT_TRUE(alpha_equivalent(back.formula, j.formula)) << to_string(j);
  }
}

TEST(Substitute, Examples) {
  Formula eq01 = Formula::eq(0, 1);
  EXPECT_EQ(substitute(eq01, {{0, 1}}), Formula::eq(0, 0));
  EXPECT_EQ(substitute(Formula::rel("R", {0, 1}), {{1, 0}, {0, 1}}), Formula::rel("R", {1, 0}));
  EXPECT_EQ(substitute(eq01, {}), eq01);
}

TEST(Substitute, AvoidsCapture) {
  // ∃x2. R(x0, x2) with x0 := x2 must not capture.
  Formula f = Formula::exists(2, Formula::rel("R", {0, 2}));
  Formula g = substitute(f, {{2, 0}});
  EXPECT_EQ(free_vars(g), (std::set<Var>{2}));
  RelModel m = model_ab({{0, 1}});
  // {x2 | ∃w. R(x2, w)} = {a}
  std::set<Tuple> sat = brute_ccq({3, g}, m);
  for (const Tuple& t : sat) EXPECT_EQ(t[2], 0u);
  EXPECT_EQ(sat.size(), 4u);
}

TEST(Alpha, DistinguishesFreeFromBound) {
  Formula a = Formula::exists(2, Formula::eq(0, 2));
  Formula b = Formula::exists(5, Formula::eq(0, 5));
  Formula c = Formula::exists(2, Formula::eq(1, 2));
  EXPECT_TRUE(alpha_equivalent(a, b));
  EXPECT_FALSE(alpha_equivalent(a, c));
  EXPECT_FALSE(alpha_equivalent(a, Formula::eq(0, 2)));
}

TEST(Derive, EqualityIsASingleLeaf) {
  Derivation d = derive(parse_ccq("2 |- x0 = x1", binary_r()));
  EXPECT_EQ(d.rule(), Rule::Eq);
  EXPECT_EQ(d.node_count(), 1u);
}

TEST(Derive, EqualityInLargerContextUsesNu) {
  Judgment j = parse_ccq("3 |- x0 = x1", binary_r());
  Derivation d = derive(j);
  EXPECT_EQ(d.rule(), Rule::New);
  ASSERT_EQ(d.premises().size(), 1u);
  EXPECT_EQ(d.premises()[0].rule(), Rule::Eq);
  for_small_models(binary_r(), 2, [&](const RelModel& m) {
    EXPECT_EQ(eval_derivation(d, m), eval_ccq(j, m));
  });
}

TEST(Derive, AtomInOrderIsASingleSigma) {
  Derivation d = derive(parse_ccq("2 |- R(x0, x1)", binary_r()));
  EXPECT_EQ(d.rule(), Rule::Sigma);
  EXPECT_EQ(d.node_count(), 1u);
}

TEST(Derive, ConclusionMatchesJudgment) {
  gcq::testing::Rng rng(5);
  Signature sig = mixed();
  for (int i = 0; i < 300; ++i) {
    Judgment j = random_judgment(sig, rng);
    Derivation d = derive(j);
    EXPECT_EQ(d.context(), j.context);
    EXPECT_TRUE(alpha_equivalent(d.conclusion(), j.formula)) << to_string(j) << " vs " << to_string(d.judgment());
  }
}

TEST(Rules, ConjunctionOffsetsTheRightContext) {
  Derivation d = Derivation::conj(Derivation::sigma("R", 2), Derivation::eq());
  EXPECT_EQ(d.context(), 4u);
  EXPECT_EQ(d.conclusion(), Formula::conj(Formula::rel("R", {0, 1}), Formula::eq(2, 3)));
}

TEST(Rules, SwapExchangesAdjacentVariables) {
  Derivation d = Derivation::swap(Derivation::sigma("R", 2), 0);
  EXPECT_EQ(d.conclusion(), Formula::rel("R", {1, 0}));
  EXPECT_THROW(Derivation::swap(Derivation::sigma("R", 2), 1), Error);
}

TEST(Rules, IdentIdentifiesLastTwo) {
  Derivation d = Derivation::ident(Derivation::sigma("R", 2));
  EXPECT_EQ(d.context(), 1u);
  EXPECT_EQ(d.conclusion(), Formula::rel("R", {0, 0}));
}

TEST(Rules, ExistsBindsLastVariable) {
  Derivation d = Derivation::exists(Derivation::sigma("R", 2));
  EXPECT_EQ(d.context(), 1u);
  EXPECT_TRUE(alpha_equivalent(d.conclusion(), Formula::exists(1, Formula::rel("R", {0, 1}))));
  EXPECT_THROW(Derivation::exists(Derivation::top()), Error);
}

TEST(Eval, TopAtZeroIsTheEmptyTuple) {
  RelModel m = model_ab({});
  Relation r = eval_ccq(parse_ccq("0 |- top", binary_r()), m);
  EXPECT_EQ(r, Relation::unit(2));
}

TEST(Eval, EqualityIsTheDiagonal) {
  Relation r = eval_ccq(parse_ccq("2 |- x0 = x1", binary_r()), model_ab({}));
  EXPECT_EQ(r, Relation({2, 0}, 2, {{{0, 0}, {}}, {{1, 1}, {}}}));
}

TEST(Eval, SharedSuccessorFormulaOnTwoElements) {
  Judgment j = parse_ccq("2 |- exists z0. (x0 = x1) /\\ R(x0, z0)", binary_r());
  Relation r = eval_ccq(j, model_ab({{0, 0}}));
  EXPECT_EQ(r, Relation({2, 0}, 2, {{{0, 0}, {}}}));
  EXPECT_EQ(inputs_of(r), brute_ccq(j, model_ab({{0, 0}})));
}

TEST(Eval, ExistsOverEmptyCarrier) {
  RelModel empty(binary_r());
  EXPECT_TRUE(eval_ccq(parse_ccq("0 |- exists z. top", binary_r()), empty).empty());
  EXPECT_EQ(eval_ccq(parse_ccq("0 |- top", binary_r()), empty).size(), 1u);
}

TEST(EvalProperty, AgreesWithTarskiOracle) {
  gcq::testing::Rng rng(7);
  Signature sig = mixed();
  for (int i = 0; i < 60; ++i) {
    Judgment j = random_judgment(sig, rng);
    for_small_models(sig, 2, [&](const RelModel& m) { ASSERT_EQ(inputs_of(eval_ccq(j, m)), brute_ccq(j, m)) << to_string(j); });
  }
}

TEST(EvalProperty, DerivationIndependent) {
  gcq::testing::Rng rng(8);
  Signature sig = mixed();
  for (int i = 0; i < 60; ++i) {
    Judgment j = random_judgment(sig, rng);
    Derivation d = derive(j);
    std::vector<Derivation> others;
    if (j.context >= 2) others.push_back(Derivation::swap(Derivation::swap(d, 0), 0));
    if (j.context >= 1) others.push_back(Derivation::ident(Derivation::fresh(d)));
    for_small_models(sig, 2, [&](const RelModel& m) {
      Relation expected = eval_ccq(j, m);
      ASSERT_EQ(eval_derivation(d, m), expected) << to_string(j);
      for (const Derivation& o : others) ASSERT_EQ(eval_derivation(o, m), expected) << to_string(j);
    });
  }
}

TEST(EvalProperty, NuIsProductWithCarrier) {
  gcq::testing::Rng rng(9);
  Signature sig = mixed();
  for (int i = 0; i < 40; ++i) {
    Judgment j = random_judgment(sig, rng, 2);
    Judgment wider{j.context + 1, j.formula};
    for_small_models(sig, 2, [&](const RelModel& m) {
      std::set<Tuple> expected;
      Relation base = eval_ccq(j, m);
      for (const auto& p : base.pairs())
        for (Element x = 0; x < m.size(); ++x) {
          Tuple t = p.first;
          t.push_back(x);
          expected.insert(t);
        }
      ASSERT_EQ(inputs_of(eval_ccq(wider, m)), expected);
    });
  }
}

TEST(EvalProperty, ExistsProjectsTheLastCoordinate) {
  gcq::testing::Rng rng(10);
  Signature sig = mixed();
  for (int i = 0; i < 40; ++i) {
    Judgment j = random_judgment(sig, rng);
    if (j.context == 0) continue;
    Derivation d = Derivation::exists(derive(j));
    for_small_models(sig, 2, [&](const RelModel& m) {
      std::set<Tuple> expected;
      Relation body = eval_ccq(j, m);
      for (const auto& p : body.pairs()) expected.insert(Tuple(p.first.begin(), p.first.end() - 1));
      ASSERT_EQ(inputs_of(eval_derivation(d, m)), expected);
      ASSERT_EQ(inputs_of(eval_ccq(d.judgment(), m)), expected);
    });
  }
}

TEST(EvalProperty, DependsOnlyOnContextCoordinates) {
  // Extending the context never changes membership of the prefix.
  gcq::testing::Rng rng(13);
  Signature sig = mixed();
  for (int i = 0; i < 40; ++i) {
    Judgment j = random_judgment(sig, rng, 2);
    Judgment wider{j.context + 2, j.formula};
    for_small_models(sig, 2, [&](const RelModel& m) {
      std::set<Tuple> base = inputs_of(eval_ccq(j, m));
      Relation extended = eval_ccq(wider, m);
      for (const auto& p : extended.pairs())
        ASSERT_TRUE(base.count(Tuple(p.first.begin(), p.first.begin() + static_cast<std::ptrdiff_t>(j.context))));
    });
  }
}

TEST(Validate, RejectsCoarityAndArity) {
  Signature sig;
  sig.add("R", {1, 1});
  EXPECT_THROW(validate({2, Formula::rel("R", {0})}, sig), SignatureError);
  EXPECT_THROW(validate({1, Formula::rel("R", {0})}, binary_r()), SignatureError);
  EXPECT_THROW(validate({1, Formula::eq(0, 1)}, binary_r()), Error);
}
