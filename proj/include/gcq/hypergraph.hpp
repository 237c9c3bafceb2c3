#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcq/sigmodel.hpp"

namespace gcq {

using Vertex = std::uint32_t;

struct Edge {
  std::vector<Vertex> src;
  std::vector<Vertex> tgt;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

using EdgeMap = std::map<std::string, std::vector<Edge>, std::less<>>;

/// Finite Σ-hypergraph: vertices 0..vcount-1 and labelled hyperedges with
/// ordered source and target tentacles.
class Hypergraph {
 public:
  Hypergraph() = default;
  explicit Hypergraph(std::size_t vcount) : vcount_(vcount) {}

  std::size_t vcount() const { return vcount_; }
  Vertex add_vertex() { return static_cast<Vertex>(vcount_++); }
  /// Throws Error when a tentacle points outside the vertex set.
  void add_edge(const std::string& symbol, std::vector<Vertex> src, std::vector<Vertex> tgt);

  const EdgeMap& edges() const { return edges_; }
  /// Edges labelled `symbol`; empty when there are none.
  const std::vector<Edge>& edges(std::string_view symbol) const;
  std::size_t edge_count() const;

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  std::size_t vcount_ = 0;
  EdgeMap edges_;
};

/// Throws SignatureError when an edge label is unknown or its tentacle
/// counts disagree with the symbol's sort.
void check_signature(const Hypergraph& g, const Signature& sig);

struct HgMorphism {
  std::vector<Vertex> vmap;
  /// Per symbol, image index of each edge in the target's edge list.
  std::map<std::string, std::vector<std::size_t>, std::less<>> emaps;

  friend bool operator==(const HgMorphism&, const HgMorphism&) = default;
};

/// True iff f is a morphism g → h: labels preserved and both tentacle
/// squares commute. Throws Error when the maps are not total on g or point
/// outside h.
bool validate_morphism(const HgMorphism& f, const Hypergraph& g, const Hypergraph& h);

/// f ; k (first f, then k).
HgMorphism compose_morphisms(const HgMorphism& f, const HgMorphism& k);

/// Partial vertex assignment: pins[v] = image of v, or nullopt.
using Pins = std::vector<std::optional<Vertex>>;

struct SearchOptions {
  /// Stop after this many morphisms.
  std::size_t limit = std::numeric_limits<std::size_t>::max();
  /// Search steps (vertex assignments plus edge choices) before
  /// BudgetExhausted is thrown.
  std::uint64_t budget = 50'000'000;
  /// Vertex map and edge maps must be injective.
  bool injective = false;
};

/// Calls fn(vmap, count) once per vertex map extending `pins` that admits
/// at least one edge map; `count` is the number of edge maps over that vertex
/// map. fn returns false to stop. Vertex maps arrive in a deterministic order.
/// Not usable with options.injective (edge maps are counted, not
/// enumerated). Returns the number of search steps used.
std::uint64_t for_each_vertex_map(const Hypergraph& g, const Hypergraph& h, const Pins& pins,
                                  const SearchOptions& options,
                                  const std::function<bool(const std::vector<Vertex>&, std::uint64_t)>& fn);

/// All morphisms g → h extending pins, up to options.limit. Order:
/// vertex maps as produced by the search, then edge maps lexicographically
/// (symbols in order, edges by index, candidate images ascending). Throws
/// BudgetExhausted.
std::vector<HgMorphism> find_morphisms(const Hypergraph& g, const Hypergraph& h, const Pins& pins = {},
                                       const SearchOptions& options = {});

/// Number of morphisms g → h extending pins, without materializing them.
std::uint64_t count_morphisms(const Hypergraph& g, const Hypergraph& h, const Pins& pins = {},
                              const SearchOptions& options = {});

/// A bijective morphism with bijective edge maps, extending pins, or
/// nullopt.
std::optional<HgMorphism> is_isomorphic(const Hypergraph& g, const Hypergraph& h, const Pins& pins = {},
                                        std::uint64_t budget = SearchOptions{}.budget);

struct DisjointUnion {
  Hypergraph graph;
  HgMorphism inl;
  HgMorphism inr;
};

/// Coproduct; h's vertices are offset by g.vcount() and its edges follow g's
/// within each symbol.
DisjointUnion disjoint_union(const Hypergraph& g, const Hypergraph& h);

/// {"vcount": n, "edges": {R: [[[src...],[tgt...]], ...]}}
std::string dump_hypergraph(const Hypergraph& g);
Hypergraph load_hypergraph(std::string_view json_text);
/// {"vmap": [...], "emaps": {R: [...]}}
std::string dump_morphism(const HgMorphism& f);

/// Graphviz rendering. Vertices are points v<i>; each edge is a box node
/// e<k> labelled with its symbol, joined to its source and target vertices
/// by undirected arrows whose box end carries s0, s1, ... or t0, t1, ....
/// When interfaces are given, left boundary points l<i> and right boundary
/// points r<i> are plaintext nodes joined to their vertices by dotted arrows.
std::string hypergraph_to_dot(const Hypergraph& g, const std::vector<Vertex>* left = nullptr,
                              const std::vector<Vertex>* right = nullptr);

}  // namespace gcq
