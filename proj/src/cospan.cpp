#include "gcq/cospan.hpp"

#include <algorithm>
#include <numeric>

#include "gcq/error.hpp"
#include "gcq/json_io.hpp"

namespace gcq {

Cospan identity_cospan(std::size_t n) {
  Cospan c;
  c.apex = Hypergraph(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.iota.push_back(static_cast<Vertex>(i));
    c.omega.push_back(static_cast<Vertex>(i));
  }
  return c;
}

namespace {

struct UnionFind {
  std::vector<Vertex> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  Vertex find(Vertex v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  void unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
};

std::vector<Vertex> mapped(const std::vector<Vertex>& vs, const std::vector<Vertex>& f, Vertex offset = 0) {
  std::vector<Vertex> out;
  out.reserve(vs.size());
  for (Vertex v : vs) out.push_back(f[v + offset]);
  return out;
}

}  // namespace

Cospan compose_cospans(const Cospan& a, const Cospan& b) {
  if (a.omega.size() != b.iota.size())
    throw SortError("cannot compose cospans: right boundary " + std::to_string(a.omega.size()) +
                    " vs left boundary " + std::to_string(b.iota.size()));
  const auto na = static_cast<Vertex>(a.apex.vcount());
  const std::size_t total = a.apex.vcount() + b.apex.vcount();
  UnionFind uf(total);
  for (std::size_t i = 0; i < a.omega.size(); ++i) uf.unite(a.omega[i], na + b.iota[i]);
  std::vector<Vertex> dense(total, 0);
  Vertex next = 0;
  std::vector<Vertex> rep_id(total, static_cast<Vertex>(-1));
  for (Vertex v = 0; v < total; ++v) {
    Vertex r = uf.find(v);
    if (r == v) rep_id[v] = next++;
  }
  for (Vertex v = 0; v < total; ++v) dense[v] = rep_id[uf.find(v)];
  Cospan out;
  out.apex = Hypergraph(next);
  for (const auto& [sym, es] : a.apex.edges())
    for (const Edge& e : es) out.apex.add_edge(sym, mapped(e.src, dense), mapped(e.tgt, dense));
  for (const auto& [sym, es] : b.apex.edges())
    for (const Edge& e : es) out.apex.add_edge(sym, mapped(e.src, dense, na), mapped(e.tgt, dense, na));
  out.iota = mapped(a.iota, dense);
  out.omega = mapped(b.omega, dense, na);
  return out;
}

Cospan tensor_cospans(const Cospan& a, const Cospan& b) {
  DisjointUnion u = disjoint_union(a.apex, b.apex);
  Cospan out;
  out.apex = std::move(u.graph);
  const auto off = static_cast<Vertex>(a.apex.vcount());
  out.iota = a.iota;
  out.omega = a.omega;
  for (Vertex v : b.iota) out.iota.push_back(v + off);
  for (Vertex v : b.omega) out.omega.push_back(v + off);
  return out;
}

Cospan term_to_cospan(const Term& t) {
  auto single = [](std::size_t n, std::size_t m) {
    Cospan c;
    c.apex = Hypergraph(1);
    c.iota.assign(n, 0);
    c.omega.assign(m, 0);
    return c;
  };
  switch (t.kind()) {
    case TermKind::Copy: return single(1, 2);
    case TermKind::Merge: return single(2, 1);
    case TermKind::Id1: return single(1, 1);
    case TermKind::Discard: return single(1, 0);
    case TermKind::Spawn: return single(0, 1);
    case TermKind::Id0: return Cospan{};
    case TermKind::Swap: {
      Cospan c;
      c.apex = Hypergraph(2);
      c.iota = {0, 1};
      c.omega = {1, 0};
      return c;
    }
    case TermKind::Gen: {
      const Sort s = t.sort();
      Cospan c;
      c.apex = Hypergraph(s.n + s.m);
      for (std::size_t i = 0; i < s.n; ++i) c.iota.push_back(static_cast<Vertex>(i));
      for (std::size_t j = 0; j < s.m; ++j) c.omega.push_back(static_cast<Vertex>(s.n + j));
      c.apex.add_edge(t.symbol(), c.iota, c.omega);
      return c;
    }
    case TermKind::Seq: return compose_cospans(term_to_cospan(t.lhs()), term_to_cospan(t.rhs()));
    case TermKind::Tensor: return tensor_cospans(term_to_cospan(t.lhs()), term_to_cospan(t.rhs()));
  }
  throw SortError("unknown term kind");
}

namespace {

bool is_identity(const Term& t) {
  if (t.sort().n != t.sort().m) return false;
  return t == id_n(t.sort().n);
}

Term seq_compact(Term a, Term b) {
  if (is_identity(a)) return b;
  if (is_identity(b)) return a;
  return Term::seq(std::move(a), std::move(b));
}

// k → 1 (Spawn when k = 0).
Term merge_fan(std::size_t k) {
  if (k == 0) return Term::spawn();
  Term t = Term::id1();
  for (std::size_t i = 1; i < k; ++i) t = Term::seq(tensor_compact(std::move(t), Term::id1()), Term::merge());
  return t;
}

// 1 → k (Discard when k = 0).
Term copy_fan(std::size_t k) {
  if (k == 0) return Term::discard();
  Term t = Term::id1();
  for (std::size_t i = 1; i < k; ++i) t = Term::seq(Term::copy(), tensor_compact(std::move(t), Term::id1()));
  return t;
}

Term tensor_all(const std::vector<Term>& ts) {
  Term out;
  for (const Term& t : ts) out = tensor_compact(std::move(out), t);
  return out;
}

// Wires labelled by vertex; returns the permutation that groups them by
// vertex (stable), together with the group sizes.
std::vector<std::size_t> group_by_vertex(const std::vector<Vertex>& labels, std::size_t vcount,
                                         std::vector<std::size_t>& sizes) {
  sizes.assign(vcount, 0);
  std::vector<std::size_t> perm(labels.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::ranges::stable_sort(perm, [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  for (Vertex v : labels) ++sizes[v];
  return perm;
}

std::vector<std::size_t> inverse(const std::vector<std::size_t>& p) {
  std::vector<std::size_t> inv(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) inv[p[j]] = j;
  return inv;
}

}  // namespace

Term permutation_term(const std::vector<std::size_t>& perm) {
  const std::size_t w = perm.size();
  std::vector<std::size_t> cur(w);
  std::iota(cur.begin(), cur.end(), 0);
  std::vector<Term> layers;
  for (std::size_t p = 0; p < w; ++p) {
    std::size_t q = static_cast<std::size_t>(std::ranges::find(cur, perm[p]) - cur.begin());
    for (; q > p; --q) {
      std::swap(cur[q - 1], cur[q]);
      layers.push_back(tensor_compact(tensor_compact(id_n(q - 1), Term::swap()), id_n(w - q - 1)));
    }
  }
  if (layers.empty()) return id_n(w);
  return seq_all(layers);
}

Term cospan_to_term(const Cospan& c) {
  const std::size_t V = c.apex.vcount();
  std::vector<const std::string*> syms;
  std::vector<const Edge*> edges;
  for (const auto& [sym, es] : c.apex.edges())
    for (const Edge& e : es) {
      syms.push_back(&sym);
      edges.push_back(&e);
    }
  std::vector<Vertex> S, T;
  for (const Edge* e : edges) {
    S.insert(S.end(), e->src.begin(), e->src.end());
    T.insert(T.end(), e->tgt.begin(), e->tgt.end());
  }
  std::vector<Vertex> all_v(V);
  std::iota(all_v.begin(), all_v.end(), 0);

  // n → V: group boundary points by vertex, then merge each group.
  std::vector<std::size_t> sizes;
  auto pl = group_by_vertex(c.iota, V, sizes);
  std::vector<Term> fans;
  for (std::size_t v = 0; v < V; ++v) fans.push_back(merge_fan(sizes[v]));
  Term left = seq_compact(permutation_term(pl), tensor_all(fans));

  // V → S ++ V: copy each vertex once per source tentacle plus once for
  // itself, then move source copies into tentacle order.
  std::vector<Vertex> out_labels = S;
  out_labels.insert(out_labels.end(), all_v.begin(), all_v.end());
  auto grouped = group_by_vertex(out_labels, V, sizes);
  fans.clear();
  for (std::size_t v = 0; v < V; ++v) fans.push_back(copy_fan(sizes[v]));
  Term fanout = seq_compact(tensor_all(fans), permutation_term(inverse(grouped)));

  std::vector<Term> boxes;
  for (std::size_t i = 0; i < edges.size(); ++i)
    boxes.push_back(Term::gen(*syms[i], {edges[i]->src.size(), edges[i]->tgt.size()}));
  Term middle = tensor_compact(tensor_all(boxes), id_n(V));

  // T ++ V → V: the mirror image of the fanout.
  std::vector<Vertex> in_labels = T;
  in_labels.insert(in_labels.end(), all_v.begin(), all_v.end());
  grouped = group_by_vertex(in_labels, V, sizes);
  fans.clear();
  for (std::size_t v = 0; v < V; ++v) fans.push_back(merge_fan(sizes[v]));
  Term fanin = seq_compact(permutation_term(grouped), tensor_all(fans));

  // V → m
  auto pr = group_by_vertex(c.omega, V, sizes);
  fans.clear();
  for (std::size_t v = 0; v < V; ++v) fans.push_back(copy_fan(sizes[v]));
  Term right = seq_compact(tensor_all(fans), permutation_term(inverse(pr)));

  Term t = seq_compact(left, fanout);
  t = seq_compact(t, middle);
  t = seq_compact(t, fanin);
  return seq_compact(t, right);
}

namespace {

std::optional<Pins> boundary_pins(const Cospan& from, const Cospan& to) {
  if (from.sort() != to.sort())
    throw SortError("cospan boundaries differ: " + to_string(from.sort()) + " vs " + to_string(to.sort()));
  Pins pins(from.apex.vcount());
  auto pin = [&](Vertex a, Vertex b) {
    if (pins[a] && *pins[a] != b) return false;
    pins[a] = b;
    return true;
  };
  for (std::size_t i = 0; i < from.iota.size(); ++i)
    if (!pin(from.iota[i], to.iota[i])) return std::nullopt;
  for (std::size_t i = 0; i < from.omega.size(); ++i)
    if (!pin(from.omega[i], to.omega[i])) return std::nullopt;
  return pins;
}

}  // namespace

std::optional<HgMorphism> find_cospan_morphism(const Cospan& from, const Cospan& to, std::uint64_t budget) {
  auto pins = boundary_pins(from, to);
  if (!pins) return std::nullopt;
  SearchOptions opt;
  opt.limit = 1;
  opt.budget = budget;
  auto found = find_morphisms(from.apex, to.apex, *pins, opt);
  if (found.empty()) return std::nullopt;
  return found.front();
}

bool is_isomorphic_cospan(const Cospan& a, const Cospan& b, std::uint64_t budget) {
  auto pins = boundary_pins(a, b);
  if (!pins) return false;
  return is_isomorphic(a.apex, b.apex, *pins, budget).has_value();
}

std::string dump_cospan(const Cospan& c) {
  json out;
  out["n"] = c.iota.size();
  out["m"] = c.omega.size();
  out["apex"] = hypergraph_to_json(c.apex);
  out["iota"] = c.iota;
  out["omega"] = c.omega;
  return out.dump();
}

Cospan load_cospan(std::string_view json_text) {
  json doc = parse_json_strict(json_text);
  if (!doc.is_object() || !doc.contains("apex") || !doc.contains("iota") || !doc.contains("omega"))
    throw ParseError("cospan must have \"apex\", \"iota\" and \"omega\"");
  Cospan c;
  c.apex = hypergraph_from_json(doc["apex"]);
  try {
    c.iota = doc["iota"].get<std::vector<Vertex>>();
    c.omega = doc["omega"].get<std::vector<Vertex>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad interface: ") + e.what());
  }
  auto outside = [&](Vertex v) { return v >= c.apex.vcount(); };
  if (std::ranges::any_of(c.iota, outside) || std::ranges::any_of(c.omega, outside))
    throw ParseError("interface points outside the apex");
  if (doc.contains("n") && doc["n"] != c.iota.size()) throw ParseError("\"n\" disagrees with \"iota\"");
  if (doc.contains("m") && doc["m"] != c.omega.size()) throw ParseError("\"m\" disagrees with \"omega\"");
  return c;
}

std::string cospan_to_dot(const Cospan& c) { return hypergraph_to_dot(c.apex, &c.iota, &c.omega); }

}  // namespace gcq
