#include <gtest/gtest.h>

#include "gcq/axioms.hpp"
#include "gcq/cospan.hpp"
#include "gcq/error.hpp"
#include "gcq/translate.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace gcq;
using gcq::testing::random_cospan;
using gcq::testing::random_term;

namespace {

Signature sig11() {
  Signature sig;
  sig.add("R", {1, 1});
  return sig;
}

Signature mixed() {
  Signature sig;
  sig.add("P", {1, 0});
  sig.add("R", {1, 1});
  sig.add("T", {2, 1});
  return sig;
}

Cospan with_boundaries(const Hypergraph& apex, std::vector<Vertex> iota, std::vector<Vertex> omega) {
  return Cospan{apex, std::move(iota), std::move(omega)};
}

bool commutes(const HgMorphism& f, const std::vector<Vertex>& from, const std::vector<Vertex>& to) {
  for (std::size_t i = 0; i < from.size(); ++i)
    if (f.vmap[from[i]] != to[i]) return false;
  return true;
}

}  // namespace

TEST(Compile, BaseCases) {
  Cospan copy = term_to_cospan(Term::copy());
  EXPECT_EQ(copy.apex.vcount(), 1u);
  EXPECT_EQ(copy.iota, std::vector<Vertex>{0});
  EXPECT_EQ(copy.omega, (std::vector<Vertex>{0, 0}));
  Cospan id0 = term_to_cospan(Term::id0());
  EXPECT_EQ(id0.apex.vcount(), 0u);
  EXPECT_TRUE(id0.iota.empty() && id0.omega.empty());
  EXPECT_EQ(term_to_cospan(Term::merge()).sort(), (Sort{2, 1}));
  EXPECT_EQ(term_to_cospan(Term::discard()).apex.vcount(), 1u);
  EXPECT_EQ(term_to_cospan(Term::spawn()).apex.vcount(), 1u);
  Cospan swap = term_to_cospan(Term::swap());
  EXPECT_EQ(swap.apex.vcount(), 2u);
  EXPECT_EQ(swap.omega[0], swap.iota[1]);
  EXPECT_EQ(swap.omega[1], swap.iota[0]);
}

TEST(Compile, GeneratorWiring) {
  Cospan r = term_to_cospan(Term::gen("T", {2, 1}));
  ASSERT_EQ(r.apex.vcount(), 3u);
  ASSERT_EQ(r.apex.edges("T").size(), 1u);
  const Edge& e = r.apex.edges("T")[0];
  EXPECT_EQ(e.src, r.iota);
  EXPECT_EQ(e.tgt, r.omega);
}

TEST(Compile, ThetaOfSharedSuccessorPsi) {
  Signature sig;
  sig.add("R", {2, 0});
  ccq::Judgment psi =
      ccq::parse_ccq("2 |- exists z0. exists z1. R(x0, z0) /\\ R(x1, z0) /\\ R(x0, z1) /\\ R(x1, z1)", sig);
  Cospan c = term_to_cospan(theta(psi));
  EXPECT_EQ(c.apex.vcount(), 4u);
  EXPECT_EQ(c.apex.edges("R").size(), 4u);
  ASSERT_EQ(c.iota.size(), 2u);
  EXPECT_NE(c.iota[0], c.iota[1]);
}

TEST(Compose, CopyThenMergeIsIdentity) {
  Cospan c = compose_cospans(term_to_cospan(Term::copy()), term_to_cospan(Term::merge()));
  EXPECT_TRUE(is_isomorphic_cospan(c, identity_cospan(1)));
}

TEST(Compose, MergeThenCopyHasOneVertex) {
  Cospan c = compose_cospans(term_to_cospan(Term::merge()), term_to_cospan(Term::copy()));
  EXPECT_EQ(c.sort(), (Sort{2, 2}));
  EXPECT_EQ(c.apex.vcount(), 1u);
}

TEST(Compose, BoundaryMismatchThrows) {
  EXPECT_THROW(compose_cospans(term_to_cospan(Term::copy()), term_to_cospan(Term::id1())), SortError);
  EXPECT_THROW(is_isomorphic_cospan(term_to_cospan(Term::copy()), term_to_cospan(Term::id1())), SortError);
}

TEST(ComposeProperty, IdentityIsNeutral) {
  gcq::testing::Rng rng(51);
  for (int i = 0; i < 100; ++i) {
    Cospan c = random_cospan(mixed(), rng);
    EXPECT_TRUE(is_isomorphic_cospan(compose_cospans(identity_cospan(c.iota.size()), c), c));
    EXPECT_TRUE(is_isomorphic_cospan(compose_cospans(c, identity_cospan(c.omega.size())), c));
    EXPECT_TRUE(is_isomorphic_cospan(tensor_cospans(c, identity_cospan(0)), c));
  }
}

TEST(ComposeProperty, PushoutUniversalProperty) {
  // Morphisms out of the pushout correspond one to one with cocones.
  gcq::testing::Rng rng(52);
  int cocones_seen = 0;
  for (int i = 0; i < 150; ++i) {
    Cospan a = random_cospan(sig11(), rng, 3, 2, 2);
    Cospan b = random_cospan(sig11(), rng, 3, 2, 2);
    if (a.omega.size() != b.iota.size()) continue;
    Hypergraph p = compose_cospans(a, b).apex;
    Hypergraph q = gcq::testing::random_hypergraph(sig11(), rng, 3, 4);
    std::uint64_t cocones = 0;
    for (const auto& f : find_morphisms(a.apex, q))
      for (const auto& g : find_morphisms(b.apex, q)) {
        bool agree = true;
        for (std::size_t k = 0; k < a.omega.size(); ++k) agree = agree && f.vmap[a.omega[k]] == g.vmap[b.iota[k]];
        cocones += agree;
      }
    cocones_seen += cocones > 0;
    EXPECT_EQ(count_morphisms(p, q), cocones);
  }
  EXPECT_GT(cocones_seen, 10);
}

TEST(ComposeProperty, Functoriality) {
  gcq::testing::Rng rng(53);
  for (int i = 0; i < 150; ++i) {
    std::size_t n = i % 3, k = (i / 3) % 3, m = (i / 9) % 3;
    Term c = random_term(mixed(), n, k, rng), d = random_term(mixed(), k, m, rng);
    EXPECT_TRUE(is_isomorphic_cospan(term_to_cospan(Term::seq(c, d)),
                                     compose_cospans(term_to_cospan(c), term_to_cospan(d))));
    EXPECT_TRUE(is_isomorphic_cospan(term_to_cospan(Term::tensor(c, d)),
                                     tensor_cospans(term_to_cospan(c), term_to_cospan(d))));
  }
}

TEST(ComposeProperty, Associativity) {
  gcq::testing::Rng rng(54);
  for (int i = 0; i < 100; ++i) {
    Term c = random_term(mixed(), 1, 2, rng), d = random_term(mixed(), 2, 1, rng), e = random_term(mixed(), 1, 2, rng);
    EXPECT_TRUE(is_isomorphic_cospan(term_to_cospan(Term::seq(Term::seq(c, d), e)),
                                     term_to_cospan(Term::seq(c, Term::seq(d, e)))));
  }
}

TEST(Tensor, CountsAdd) {
  gcq::testing::Rng rng(55);
  for (int i = 0; i < 50; ++i) {
    Cospan a = random_cospan(mixed(), rng), b = random_cospan(mixed(), rng);
    Cospan t = tensor_cospans(a, b);
    EXPECT_EQ(t.apex.vcount(), a.apex.vcount() + b.apex.vcount());
    EXPECT_EQ(t.apex.edge_count(), a.apex.edge_count() + b.apex.edge_count());
    EXPECT_EQ(t.sort(), (Sort{a.iota.size() + b.iota.size(), a.omega.size() + b.omega.size()}));
  }
}

TEST(Isomorphic, LegsMustCommute) {
  Hypergraph two(2);
  Cospan a = with_boundaries(two, {0}, {1});
  Cospan b = with_boundaries(two, {0}, {0});
  EXPECT_TRUE(is_isomorphic_cospan(a, a));
  EXPECT_FALSE(is_isomorphic_cospan(a, b));
  Hypergraph edge(2);
  edge.add_edge("R", {0}, {1});
  EXPECT_FALSE(is_isomorphic_cospan(with_boundaries(edge, {0}, {1}), with_boundaries(edge, {1}, {0})));
  EXPECT_TRUE(is_isomorphic_cospan(with_boundaries(two, {0}, {1}), with_boundaries(two, {1}, {0})));
}

TEST(Decompile, IdentityAndSingleEdge) {
  Term t = cospan_to_term(identity_cospan(1));
  EXPECT_EQ(t.sort(), (Sort{1, 1}));
  EXPECT_TRUE(is_isomorphic_cospan(term_to_cospan(t), identity_cospan(1)));
  Cospan r = term_to_cospan(Term::gen("R", {1, 1}));
  Term back = cospan_to_term(r);
  EXPECT_EQ(back.gen_count(), 1u);
  EXPECT_TRUE(is_isomorphic_cospan(term_to_cospan(back), r));
}

TEST(DecompileProperty, RoundTripsRandomCospans) {
  gcq::testing::Rng rng(56);
  for (int i = 0; i < 200; ++i) {
    Cospan c = random_cospan(mixed(), rng);
    Term t = cospan_to_term(c);
    EXPECT_EQ(t.sort(), c.sort());
    EXPECT_EQ(t.gen_count(), c.apex.edge_count());
    ASSERT_TRUE(is_isomorphic_cospan(term_to_cospan(t), c)) << dump_cospan(c) << "\n" << print_gcq(t);
  }
}

TEST(Permutation, MovesWires) {
  Signature none;
  RelModel m(none, {"a", "b", "c"});
  Term p = permutation_term({2, 0, 1});
  EXPECT_EQ(p.sort(), (Sort{3, 3}));
  Relation r = eval_gcq(p, m);
  for (const auto& [in, out] : r.pairs()) EXPECT_EQ(out, (Tuple{in[2], in[0], in[1]}));
  EXPECT_EQ(r.size(), 27u);
}

TEST(Morphism, WitnessCommutesWithLegs) {
  gcq::testing::Rng rng(57);
  int found = 0;
  for (int i = 0; i < 200; ++i) {
    Term c = random_term(mixed(), 1, 1, rng);
    Cospan cc = term_to_cospan(c);
    Cospan dd = term_to_cospan(gcq::testing::weaken(c, rng));
    auto w = find_cospan_morphism(dd, cc);
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(validate_morphism(*w, dd.apex, cc.apex));
    EXPECT_TRUE(commutes(*w, dd.iota, cc.iota));
    EXPECT_TRUE(commutes(*w, dd.omega, cc.omega));
    ++found;
  }
  EXPECT_EQ(found, 200);
}

TEST(AxiomsAsIsos, MonoidalAndFrobeniusEqualities) {
  for (const AxiomEntry& a : axiom_catalog(mixed())) {
    if (a.kind != AxiomKind::Equality) continue;
    EXPECT_TRUE(is_isomorphic_cospan(term_to_cospan(a.lhs), term_to_cospan(a.rhs))) << a.name;
  }
}

TEST(Serialization, CospanRoundTripAndDot) {
  gcq::testing::Rng rng(58);
  for (int i = 0; i < 50; ++i) {
    Cospan c = random_cospan(mixed(), rng);
    EXPECT_EQ(load_cospan(dump_cospan(c)), c);
  }
  EXPECT_THROW(load_cospan(R"({"n":1,"m":0,"apex":{"vcount":1,"edges":{}},"iota":[4],"omega":[]})"), Error);
  std::string dot = cospan_to_dot(term_to_cospan(Term::id0()));
  EXPECT_EQ(dot.find("->"), std::string::npos);
  std::string copy = cospan_to_dot(term_to_cospan(Term::copy()));
  EXPECT_NE(copy.find("l0"), std::string::npos);
  EXPECT_NE(copy.find("r1"), std::string::npos);
}
