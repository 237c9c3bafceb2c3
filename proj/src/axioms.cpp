#include "gcq/axioms.hpp"

#include "gcq/containment.hpp"
#include "gcq/cospan.hpp"
#include "gcq/error.hpp"

namespace gcq {

namespace {

Term seq(Term a, Term b) { return Term::seq(std::move(a), std::move(b)); }
Term par(Term a, Term b) { return Term::tensor(std::move(a), std::move(b)); }

AxiomEntry eq(std::string name, Term l, Term r) { return {std::move(name), std::move(l), std::move(r), AxiomKind::Equality, {}}; }
AxiomEntry leq(std::string name, Term l, Term r) {
  return {std::move(name), std::move(l), std::move(r), AxiomKind::LeftLeqRight, {}};
}

}  // namespace

std::vector<AxiomEntry> axiom_catalog(const Signature& sig) {
  const Term copy = Term::copy(), merge = Term::merge(), discard = Term::discard(), spawn = Term::spawn();
  const Term id = Term::id1(), swap = Term::swap();
  Term c = copy;
  if (!sig.empty()) c = Term::gen(sig.symbols().begin()->first, sig.symbols().begin()->second);
  const std::size_t n = c.sort().n, m = c.sort().m;

  std::vector<AxiomEntry> out;
  out.push_back(eq("smc-i", seq(seq(c, n_copy(m)), n_merge(m)), seq(c, seq(n_copy(m), n_merge(m)))));
  out.push_back(eq("smc-ii", seq(id_n(n), c), seq(c, id_n(m))));
  out.push_back(eq("smc-iii", par(par(c, copy), merge), par(c, par(copy, merge))));
  out.push_back(eq("smc-iv", par(Term::id0(), c), par(c, Term::id0())));
  out.push_back(eq("smc-v", par(seq(copy, merge), seq(c, n_copy(m))), seq(par(copy, c), par(merge, n_copy(m)))));
  out.push_back(eq("smc-vi", seq(par(c, id), n_swap(m, 1)), seq(n_swap(n, 1), par(id, c))));
  out.push_back(eq("smc-vii", seq(par(id, c), n_swap(1, m)), seq(n_swap(1, n), par(c, id))));
  out.push_back(eq("smc-viii", seq(swap, swap), par(id, id)));

  out.push_back(eq("A", seq(par(merge, id), merge), seq(par(id, merge), merge)));
  out.push_back(eq("C", seq(swap, merge), merge));
  out.push_back(eq("U", seq(par(spawn, id), merge), id));
  out.push_back(eq("Aop", seq(copy, par(copy, id)), seq(copy, par(id, copy))));
  out.push_back(eq("Cop", seq(copy, swap), copy));
  out.push_back(eq("Uop", seq(copy, par(discard, id)), id));
  out.push_back(eq("S", seq(copy, merge), id));
  out.push_back(eq("F", seq(par(copy, id), par(id, merge)), seq(merge, copy)));

  out.push_back(leq("UC", seq(spawn, discard), Term::id0()));
  out.push_back(leq("CU", id, seq(discard, spawn)));
  out.push_back(leq("MC", seq(merge, copy), par(id, id)));
  out.push_back(leq("CM", id, seq(copy, merge)));

  for (const auto& [name, sort] : sig.symbols()) {
    Term r = Term::gen(name, sort);
    AxiomEntry l1 = leq("L1[" + name + "]", seq(r, n_discard(sort.m)), n_discard(sort.n));
    AxiomEntry l2 = leq("L2[" + name + "]", seq(r, n_copy(sort.m)), seq(n_copy(sort.n), par(r, r)));
    l1.symbol = name;
    l2.symbol = name;
    out.push_back(std::move(l1));
    out.push_back(std::move(l2));
  }
  return out;
}

AxiomEntry reversed(const AxiomEntry& a) {
  AxiomEntry r = a;
  std::swap(r.lhs, r.rhs);
  r.name += "-rev";
  return r;
}

RelModel random_model(const Signature& sig, std::size_t max_carrier, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size(0, max_carrier);
  const std::size_t X = size(rng);
  std::vector<std::string> carrier;
  for (std::size_t i = 0; i < X; ++i) carrier.push_back("e" + std::to_string(i));
  RelModel model(sig, std::move(carrier));
  static constexpr double kDensities[] = {0.25, 0.5, 0.75};
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (const auto& [name, sort] : sig.symbols()) {
    const double p = kDensities[pick(rng)];
    RelationBuilder b(sort, X);
    for_each_tuple(sort.n + sort.m, X, [&](const Tuple& t) {
      if (coin(rng) < p)
        b.add(Tuple(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(sort.n)),
              Tuple(t.begin() + static_cast<std::ptrdiff_t>(sort.n), t.end()));
    });
    model.set(name, std::move(b).build());
  }
  return model;
}

AxiomReport verify_axiom_semantic(const AxiomEntry& a, const Signature& sig, std::size_t trials,
                                  std::size_t max_carrier, std::uint64_t seed) {
  AxiomReport report;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i <= trials; ++i) {
    RelModel model = i == 0 ? RelModel(sig) : random_model(sig, max_carrier, rng);
    Relation l = eval_gcq(a.lhs, model);
    Relation r = eval_gcq(a.rhs, model);
    ++report.models_checked;
    bool ok = l.subset_of(r) && (a.kind == AxiomKind::LeftLeqRight || r.subset_of(l));
    if (!ok) {
      report.passed = false;
      report.detail = "violated on a model with " + std::to_string(model.size()) + " elements";
      report.countermodel = std::move(model);
      return report;
    }
  }
  return report;
}

AxiomReport verify_axiom_graphical(const AxiomEntry& a) {
  AxiomReport report;
  Cospan l = term_to_cospan(a.lhs);
  Cospan r = term_to_cospan(a.rhs);
  if (a.kind == AxiomKind::Equality) {
    report.passed = is_isomorphic_cospan(l, r);
    if (!report.passed) report.detail = "cospans are not isomorphic";
  } else {
    report.passed = find_cospan_morphism(r, l).has_value();
    if (!report.passed) report.detail = "no cospan morphism from right to left";
  }
  return report;
}

CpTerm CpTerm::top() { return CpTerm(Node{Kind::Top, {}, {}}); }
CpTerm CpTerm::meet(CpTerm l, CpTerm r) { return CpTerm(Node{Kind::Meet, {}, {std::move(l), std::move(r)}}); }
CpTerm CpTerm::id() { return CpTerm(Node{Kind::Id, {}, {}}); }
CpTerm CpTerm::comp(CpTerm l, CpTerm r) { return CpTerm(Node{Kind::Comp, {}, {std::move(l), std::move(r)}}); }
CpTerm CpTerm::converse(CpTerm t) { return CpTerm(Node{Kind::Converse, {}, {std::move(t)}}); }
CpTerm CpTerm::rel(std::string symbol) { return CpTerm(Node{Kind::Rel, std::move(symbol), {}}); }

Term encode_cp(const CpTerm& t) {
  switch (t.kind()) {
    case CpTerm::Kind::Top: return seq(Term::discard(), Term::spawn());
    case CpTerm::Kind::Meet:
      return seq(seq(Term::copy(), par(encode_cp(t.lhs()), encode_cp(t.rhs()))), Term::merge());
    case CpTerm::Kind::Id: return Term::id1();
    case CpTerm::Kind::Comp: return seq(encode_cp(t.lhs()), encode_cp(t.rhs()));
    case CpTerm::Kind::Converse: {
      Term cap = seq(Term::spawn(), Term::copy());
      Term cup = seq(Term::merge(), Term::discard());
      Term body = par(par(Term::id1(), encode_cp(t.lhs())), Term::id1());
      return seq(seq(par(cap, Term::id1()), body), par(Term::id1(), cup));
    }
    case CpTerm::Kind::Rel: return Term::gen(t.symbol(), {1, 1});
  }
  throw Error("unknown relation-algebra term");
}

}  // namespace gcq
