#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "gcq/cospan.hpp"
#include "gcq/term.hpp"

namespace gcq {

/// Outcome of c ≦ d. A witness is a morphism apex⟦d⟧ → apex⟦c⟧ that
/// commutes with both interfaces; a refutation carries the natural model of
/// c, in which the identity assignment satisfies c but not d.
struct InclusionVerdict {
  bool holds = false;
  std::optional<HgMorphism> witness;
  std::optional<RelModel> countermodel;
};

struct EquivalenceVerdict {
  bool holds = false;
  InclusionVerdict forward;   // c ≦ d
  InclusionVerdict backward;  // d ≦ c
};

/// Symbols of every Gen node with their sorts. Throws SignatureError when one
/// symbol is used at two sorts.
Signature signature_of(const Term& t);
/// Union of two signatures; throws SignatureError on conflicting sorts.
Signature merge_signatures(const Signature& a, const Signature& b);

/// c ≦ d iff a cospan morphism ⟦d⟧ → ⟦c⟧ exists. Throws SortError when the
/// sorts differ and BudgetExhausted when the search runs out.
InclusionVerdict decide_inclusion(const Term& c, const Term& d, std::uint64_t budget = SearchOptions{}.budget);
EquivalenceVerdict decide_equivalence(const Term& c, const Term& d,
                                      std::uint64_t budget = SearchOptions{}.budget);

/// Carrier = vertices (ids "v0", "v1", ...), ρ(R) = tentacle tuples of the
/// R-edges. Every symbol of `sig` is interpreted; edge labels must be in it.
RelModel hypergraph_as_model(const Hypergraph& g, const Signature& sig);

/// The natural model of c: hypergraph_as_model of apex⟦c⟧ over `sig`.
RelModel natural_model(const Term& c, const Signature& sig);

/// (ι, ω) of ⟦c⟧ as a tuple pair in eval_gcq(d, natural model of c).
/// Evaluation only; no morphism search.
bool natural_model_check(const Term& c, const Term& d);

/// Bag-valued semantics over a hypergraph: for each pair (a, b) of vertex
/// tuples, the number of morphisms h: apex⟦t⟧ → g with ι;h = a and ω;h = b.
/// Pairs with count zero are absent.
using SpanCounts = std::map<std::pair<Tuple, Tuple>, std::uint64_t>;
SpanCounts span_semantics(const Term& t, const Hypergraph& g, std::uint64_t budget = SearchOptions{}.budget);

/// {"holds": bool, "witness": {...}?, "countermodel": {...}?}
std::string dump_verdict(const InclusionVerdict& v);

}  // namespace gcq
