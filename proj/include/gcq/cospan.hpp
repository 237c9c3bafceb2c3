#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcq/hypergraph.hpp"
#include "gcq/term.hpp"

namespace gcq {

/// Discrete cospan n → apex ← m.
struct Cospan {
  Hypergraph apex;
  std::vector<Vertex> iota;   // n → apex vertices
  std::vector<Vertex> omega;  // m → apex vertices

  Sort sort() const { return {iota.size(), omega.size()}; }
  friend bool operator==(const Cospan&, const Cospan&) = default;
};

/// Identity cospan n → n ← n.
Cospan identity_cospan(std::size_t n);

/// Pushout along a.omega and b.iota. Vertices are glued by union-find with
/// the smallest id as representative, then renumbered densely in order of
/// representative. Edges: a's, then b's, per symbol. Throws SortError on a
/// boundary mismatch.
Cospan compose_cospans(const Cospan& a, const Cospan& b);
/// Coproduct of apexes with shifted legs.
Cospan tensor_cospans(const Cospan& a, const Cospan& b);

/// The compiler ⟦·⟧. A generator R of sort (n, m) becomes one R-edge on
/// n + m distinct vertices, sources on the left boundary and targets on the
/// right, both in order.
Cospan term_to_cospan(const Term& t);

/// The decompiler: a term t with term_to_cospan(t) isomorphic to c, shaped
/// as (monoid wiring) ; (one Gen per edge, beside the vertex wires) ;
/// (comonoid wiring). Generator sorts are read off the edges.
Term cospan_to_term(const Cospan& c);

/// Permutation wiring on `perm.size()` wires: output position j carries
/// input wire perm[j]. Built from adjacent swaps.
Term permutation_term(const std::vector<std::size_t>& perm);

/// Apex morphism from.apex → to.apex that sends from.iota[i] to to.iota[i]
/// and from.omega[i] to to.omega[i], if one exists. Throws SortError when
/// the boundaries differ, BudgetExhausted when the search runs out.
std::optional<HgMorphism> find_cospan_morphism(const Cospan& from, const Cospan& to,
                                               std::uint64_t budget = SearchOptions{}.budget);

/// Apex isomorphism commuting with both legs. Throws SortError when the
/// boundaries differ.
bool is_isomorphic_cospan(const Cospan& a, const Cospan& b, std::uint64_t budget = SearchOptions{}.budget);

/// {"n":..,"m":..,"apex":{...},"iota":[...],"omega":[...]}
std::string dump_cospan(const Cospan& c);
Cospan load_cospan(std::string_view json_text);
/// Apex drawing with the interface as dotted arrows.
std::string cospan_to_dot(const Cospan& c);

}  // namespace gcq
