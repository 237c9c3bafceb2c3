#include "gcq/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <sstream>

#include "gcq/error.hpp"
#include "gcq/json_io.hpp"

namespace gcq {

void Hypergraph::add_edge(const std::string& symbol, std::vector<Vertex> src, std::vector<Vertex> tgt) {
  auto bad = [this](Vertex v) { return v >= vcount_; };
  if (std::ranges::any_of(src, bad) || std::ranges::any_of(tgt, bad))
    throw Error("edge " + symbol + " has a tentacle outside the vertex set");
  edges_[symbol].push_back({std::move(src), std::move(tgt)});
}

const std::vector<Edge>& Hypergraph::edges(std::string_view symbol) const {
  static const std::vector<Edge> none;
  auto it = edges_.find(symbol);
  return it == edges_.end() ? none : it->second;
}

std::size_t Hypergraph::edge_count() const {
  std::size_t c = 0;
  for (const auto& [sym, es] : edges_) c += es.size();
  return c;
}

void check_signature(const Hypergraph& g, const Signature& sig) {
  for (const auto& [sym, es] : g.edges()) {
    Sort s = sig.sort_of(sym);
    for (const Edge& e : es)
      if (e.src.size() != s.n || e.tgt.size() != s.m)
        throw SignatureError("edge " + sym + " does not match sort " + to_string(s));
  }
}

bool validate_morphism(const HgMorphism& f, const Hypergraph& g, const Hypergraph& h) {
  if (f.vmap.size() != g.vcount()) throw Error("vertex map is not total on the source graph");
  if (std::ranges::any_of(f.vmap, [&](Vertex v) { return v >= h.vcount(); }))
    throw Error("vertex map points outside the target graph");
  auto image = [&](const std::vector<Vertex>& vs) {
    std::vector<Vertex> out;
    for (Vertex v : vs) out.push_back(f.vmap[v]);
    return out;
  };
  for (const auto& [sym, es] : g.edges()) {
    if (es.empty()) continue;
    auto it = f.emaps.find(sym);
    if (it == f.emaps.end() || it->second.size() != es.size())
      throw Error("edge map for " + sym + " is not total on the source graph");
    const auto& targets = h.edges(sym);
    for (std::size_t i = 0; i < es.size(); ++i) {
      std::size_t k = it->second[i];
      if (k >= targets.size()) throw Error("edge map for " + sym + " points outside the target graph");
      if (targets[k].src != image(es[i].src) || targets[k].tgt != image(es[i].tgt)) return false;
    }
  }
  return true;
}

HgMorphism compose_morphisms(const HgMorphism& f, const HgMorphism& k) {
  HgMorphism out;
  for (Vertex v : f.vmap) out.vmap.push_back(k.vmap.at(v));
  for (const auto& [sym, em] : f.emaps) {
    auto& dst = out.emaps[sym];
    for (std::size_t e : em) dst.push_back(k.emaps.at(sym).at(e));
  }
  return out;
}

namespace {

using Domains = std::vector<std::vector<Vertex>>;

// Same-label edges of h, indexed by (tentacle position, vertex).
struct CandidateIndex {
  std::vector<std::vector<std::vector<std::size_t>>> by_position;
};

struct GEdge {
  const std::string* symbol;
  std::size_t index;  // within the symbol's list in g
  std::vector<Vertex> tentacles;  // src then tgt
  const std::vector<Edge>* candidates;  // same-label edges in h
  const CandidateIndex* lookup;
};

// Candidate sets as one flat bitset per source vertex, so that a search node
// copies with a single memcpy and membership is a bit test.
class BitDomains {
 public:
  BitDomains(const Domains& d, std::size_t hcount)
      : words_((hcount + 63) / 64), bits_(d.size() * words_, 0), sizes_(d.size(), 0) {
    for (std::size_t v = 0; v < d.size(); ++v)
      for (Vertex w : d[v]) insert(v, w);
  }

  std::size_t count() const { return sizes_.size(); }
  std::size_t size(std::size_t v) const { return sizes_[v]; }
  bool contains(std::size_t v, Vertex w) const { return (bits_[v * words_ + w / 64] >> (w % 64)) & 1u; }

  void insert(std::size_t v, Vertex w) {
    if (contains(v, w)) return;
    bits_[v * words_ + w / 64] |= std::uint64_t{1} << (w % 64);
    ++sizes_[v];
  }
  void erase(std::size_t v, Vertex w) {
    bits_[v * words_ + w / 64] &= ~(std::uint64_t{1} << (w % 64));
    --sizes_[v];
  }
  void assign(std::size_t v, Vertex w) {
    std::fill_n(bits_.begin() + static_cast<std::ptrdiff_t>(v * words_), words_, 0);
    sizes_[v] = 0;
    insert(v, w);
  }
  Vertex first(std::size_t v) const {
    for (std::size_t i = 0; i < words_; ++i)
      if (std::uint64_t x = bits_[v * words_ + i]) return static_cast<Vertex>(i * 64 + std::countr_zero(x));
    throw Error("empty candidate set");
  }

  // Calls fn on every value of v in ascending order; fn may erase the value
  // it was called with.
  template <class Fn>
  void each(std::size_t v, Fn&& fn) const {
    for (std::size_t i = 0; i < words_; ++i)
      for (std::uint64_t x = bits_[v * words_ + i]; x; x &= x - 1)
        fn(static_cast<Vertex>(i * 64 + std::countr_zero(x)));
  }

 private:
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> sizes_;
};

class Search {
 public:
  Search(const Hypergraph& g, const Hypergraph& h, const SearchOptions& options)
      : options_(options), hcount_(h.vcount()) {
    incident_.resize(g.vcount());
    for (const auto& [sym, es] : g.edges()) {
      const std::vector<Edge>& cands = h.edges(sym);
      CandidateIndex& index = indexes_[sym];
      if (index.by_position.empty() && !es.empty()) {
        std::size_t arity = es[0].src.size() + es[0].tgt.size();
        index.by_position.assign(arity, std::vector<std::vector<std::size_t>>(h.vcount()));
        for (std::size_t c = 0; c < cands.size(); ++c) {
          if (cands[c].src.size() + cands[c].tgt.size() != arity) continue;
          for (std::size_t p = 0; p < arity; ++p) index.by_position[p][tentacle(cands[c], p)].push_back(c);
        }
      }
      for (std::size_t i = 0; i < es.size(); ++i) {
        GEdge ge{&sym, i, es[i].src, &cands, &index};
        ge.tentacles.insert(ge.tentacles.end(), es[i].tgt.begin(), es[i].tgt.end());
        for (Vertex v : ge.tentacles) {
          auto& inc = incident_[v];
          if (inc.empty() || inc.back() != gedges_.size()) inc.push_back(gedges_.size());
        }
        residues_.emplace_back(ge.tentacles.size() * hcount_, kNone);
        gedges_.push_back(std::move(ge));
      }
    }
    queued_.assign(gedges_.size(), 0);
  }

  std::uint64_t run(const Domains& initial, const std::function<bool(const std::vector<Vertex>&, std::uint64_t)>& fn) {
    fn_ = &fn;
    BitDomains d(initial, hcount_);
    std::vector<std::size_t> all(gedges_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (options_.injective) {
      for (std::size_t v = 0; v < d.count(); ++v)
        if (d.size(v) == 1 && !alldiff(d, v)) return steps_;
    }
    if (propagate(d, all)) dfs(d);
    return steps_;
  }

  void tick() {
    if (++steps_ > options_.budget)
      throw BudgetExhausted("morphism search exceeded its budget of " + std::to_string(options_.budget) + " steps");
  }

 private:
  // Generalized arc consistency on every queued edge constraint.
  bool propagate(BitDomains& d, const std::vector<std::size_t>& seed) {
    queue_.clear();
    for (std::size_t e : seed) {
      queued_[e] = 1;
      queue_.push_back(e);
    }
    bool ok = revise_queue(d);
    for (std::size_t e : queue_) queued_[e] = 0;
    queue_.clear();
    return ok;
  }

  bool revise_queue(BitDomains& d) {
    while (!queue_.empty()) {
      std::size_t ei = queue_.front();
      queue_.pop_front();
      queued_[ei] = 0;
      const GEdge& ge = gedges_[ei];
      const std::size_t k = ge.tentacles.size();
      if (k == 0) {
        if (std::ranges::none_of(*ge.candidates, [&](const Edge& he) { return compatible(d, ge, he); })) return false;
        continue;
      }
      const bool indexed = k == ge.lookup->by_position.size();
      for (std::size_t p = 0; p < k; ++p) {
        Vertex u = ge.tentacles[p];
        // Keep the values of u that some candidate edge supports; the first
        // support found is enough, and the last one found is tried first.
        auto supported = [&](Vertex w) {
          auto ok = [&](const Edge& he) { return tentacle(he, p) == w && compatible(d, ge, he); };
          if (!indexed) return std::ranges::any_of(*ge.candidates, ok);
          std::size_t& residue = residues_[ei][p * hcount_ + w];
          if (residue != kNone && compatible(d, ge, (*ge.candidates)[residue])) return true;
          for (std::size_t c : ge.lookup->by_position[p][w])
            if (compatible(d, ge, (*ge.candidates)[c])) {
              residue = c;
              return true;
            }
          return false;
        };
        std::size_t before = d.size(u);
        d.each(u, [&](Vertex w) {
          if (!supported(w)) d.erase(u, w);
        });
        if (d.size(u) == before) continue;
        if (d.size(u) == 0) return false;
        if (options_.injective && d.size(u) == 1 && !alldiff(d, u)) return false;
        for (std::size_t other : incident_[u])
          if (!queued_[other]) {
            queued_[other] = 1;
            queue_.push_back(other);
          }
      }
    }
    return true;
  }

  // Removes the singleton value of u from every other domain.
  bool alldiff(BitDomains& d, std::size_t u) {
    std::vector<std::size_t> work{u};
    while (!work.empty()) {
      std::size_t a = work.back();
      work.pop_back();
      Vertex w = d.first(a);
      for (std::size_t v = 0; v < d.count(); ++v) {
        if (v == a || !d.contains(v, w)) continue;
        d.erase(v, w);
        if (d.size(v) == 0) return false;
        if (d.size(v) == 1) work.push_back(v);
      }
    }
    return true;
  }

  static Vertex tentacle(const Edge& e, std::size_t p) {
    return p < e.src.size() ? e.src[p] : e.tgt[p - e.src.size()];
  }

  static bool compatible(const BitDomains& d, const GEdge& ge, const Edge& he) {
    if (he.src.size() + he.tgt.size() != ge.tentacles.size()) return false;
    for (std::size_t p = 0; p < ge.tentacles.size(); ++p) {
      Vertex w = tentacle(he, p);
      if (!d.contains(ge.tentacles[p], w)) return false;
      for (std::size_t q = 0; q < p; ++q)
        if (ge.tentacles[q] == ge.tentacles[p] && tentacle(he, q) != w) return false;
    }
    return true;
  }

  // Returns false when the caller asked to stop.
  bool dfs(const BitDomains& d) {
    tick();
    std::size_t best = d.count();
    for (std::size_t v = 0; v < d.count(); ++v)
      if (d.size(v) > 1 && (best == d.count() || d.size(v) < d.size(best))) best = v;
    if (best == d.count()) return leaf(d);
    bool go = true;
    d.each(best, [&](Vertex w) {
      if (!go) return;
      BitDomains next = d;
      next.assign(best, w);
      if (options_.injective && !alldiff(next, best)) return;
      if (!propagate(next, incident_[best])) return;
      go = dfs(next);
    });
    return go;
  }

  bool leaf(const BitDomains& d) {
    std::vector<Vertex> vmap(d.count());
    for (std::size_t v = 0; v < d.count(); ++v) vmap[v] = d.first(v);
    std::uint64_t count = 1;
    for (const GEdge& ge : gedges_) {
      std::uint64_t c = 0;
      for (const Edge& he : *ge.candidates) {
        bool ok = he.src.size() + he.tgt.size() == ge.tentacles.size();
        for (std::size_t p = 0; ok && p < ge.tentacles.size(); ++p) ok = tentacle(he, p) == vmap[ge.tentacles[p]];
        c += ok;
      }
      count *= c;
      if (count == 0) return true;
    }
    return (*fn_)(vmap, count);
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  SearchOptions options_;
  std::size_t hcount_;
  std::map<std::string, CandidateIndex> indexes_;
  std::vector<std::vector<std::size_t>> residues_;
  std::vector<GEdge> gedges_;
  std::vector<std::vector<std::size_t>> incident_;
  std::deque<std::size_t> queue_;
  std::vector<char> queued_;
  const std::function<bool(const std::vector<Vertex>&, std::uint64_t)>* fn_ = nullptr;
  std::uint64_t steps_ = 0;
};

Domains initial_domains(const Hypergraph& g, const Hypergraph& h, const Pins& pins) {
  if (!pins.empty() && pins.size() != g.vcount()) throw Error("pins must cover every source vertex or be empty");
  std::vector<Vertex> all(h.vcount());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Vertex>(i);
  Domains d(g.vcount(), all);
  for (std::size_t v = 0; v < pins.size(); ++v) {
    if (!pins[v]) continue;
    if (*pins[v] >= h.vcount()) throw Error("pin points outside the target graph");
    d[v] = {*pins[v]};
  }
  return d;
}

bool has_empty(const Domains& d) {
  return std::ranges::any_of(d, [](const auto& dom) { return dom.empty(); });
}

// Enumerates edge maps over a fixed vertex map, lexicographically.
class EdgeMaps {
 public:
  EdgeMaps(const Hypergraph& g, const Hypergraph& h, const std::vector<Vertex>& vmap, bool injective)
      : injective_(injective) {
    for (const auto& [sym, es] : g.edges()) {
      const auto& targets = h.edges(sym);
      for (std::size_t i = 0; i < es.size(); ++i) {
        Slot s{&sym, {}};
        Edge img;
        for (Vertex v : es[i].src) img.src.push_back(vmap[v]);
        for (Vertex v : es[i].tgt) img.tgt.push_back(vmap[v]);
        for (std::size_t k = 0; k < targets.size(); ++k)
          if (targets[k] == img) s.candidates.push_back(k);
        slots_.push_back(std::move(s));
      }
    }
  }

  template <class Fn>
  bool each(Fn&& fn, Search& search) {
    HgMorphism partial;
    std::map<std::string, std::vector<char>, std::less<>> used;
    return rec(0, partial, used, fn, search);
  }

 private:
  struct Slot {
    const std::string* symbol;
    std::vector<std::size_t> candidates;
  };

  template <class Fn>
  bool rec(std::size_t i, HgMorphism& partial, std::map<std::string, std::vector<char>, std::less<>>& used, Fn& fn,
           Search& search) {
    if (i == slots_.size()) return fn(partial);
    const Slot& s = slots_[i];
    auto& em = partial.emaps[*s.symbol];
    auto& u = used[*s.symbol];
    for (std::size_t k : s.candidates) {
      search.tick();
      if (injective_) {
        if (u.size() <= k) u.resize(k + 1, 0);
        if (u[k]) continue;
        u[k] = 1;
      }
      em.push_back(k);
      bool go = rec(i + 1, partial, used, fn, search);
      em.pop_back();
      if (injective_) u[k] = 0;
      if (!go) return false;
    }
    return true;
  }

  bool injective_;
  std::vector<Slot> slots_;
};

}  // namespace

std::uint64_t for_each_vertex_map(const Hypergraph& g, const Hypergraph& h, const Pins& pins,
                                  const SearchOptions& options,
                                  const std::function<bool(const std::vector<Vertex>&, std::uint64_t)>& fn) {
  Domains d = initial_domains(g, h, pins);
  if (has_empty(d)) return 0;
  Search s(g, h, options);
  return s.run(d, fn);
}

std::vector<HgMorphism> find_morphisms(const Hypergraph& g, const Hypergraph& h, const Pins& pins,
                                       const SearchOptions& options) {
  std::vector<HgMorphism> out;
  if (options.limit == 0) return out;
  Domains d = initial_domains(g, h, pins);
  if (has_empty(d)) return out;
  Search s(g, h, options);
  std::function<bool(const std::vector<Vertex>&, std::uint64_t)> visit = [&](const std::vector<Vertex>& vmap,
                                                                            std::uint64_t) {
    EdgeMaps em(g, h, vmap, options.injective);
    return em.each(
        [&](const HgMorphism& partial) {
          HgMorphism f = partial;
          f.vmap = vmap;
          for (const auto& [sym, es] : g.edges())
            if (es.empty()) f.emaps.erase(sym);
          out.push_back(std::move(f));
          return out.size() < options.limit;
        },
        s);
  };
  s.run(std::move(d), visit);
  return out;
}

std::uint64_t count_morphisms(const Hypergraph& g, const Hypergraph& h, const Pins& pins,
                              const SearchOptions& options) {
  if (options.injective) return find_morphisms(g, h, pins, options).size();
  std::uint64_t total = 0;
  for_each_vertex_map(g, h, pins, options, [&](const std::vector<Vertex>&, std::uint64_t c) {
    total += c;
    return true;
  });
  return total;
}

namespace {

// Per vertex: sorted list of (symbol, tentacle position) incidences.
std::vector<std::vector<std::pair<std::string, std::size_t>>> degree_profile(const Hypergraph& g) {
  std::vector<std::vector<std::pair<std::string, std::size_t>>> out(g.vcount());
  for (const auto& [sym, es] : g.edges())
    for (const Edge& e : es) {
      for (std::size_t p = 0; p < e.src.size(); ++p) out[e.src[p]].emplace_back(sym, p);
      for (std::size_t p = 0; p < e.tgt.size(); ++p) out[e.tgt[p]].emplace_back(sym, e.src.size() + p);
    }
  for (auto& v : out) std::ranges::sort(v);
  return out;
}

}  // namespace

std::optional<HgMorphism> is_isomorphic(const Hypergraph& g, const Hypergraph& h, const Pins& pins,
                                        std::uint64_t budget) {
  if (g.vcount() != h.vcount()) return std::nullopt;
  for (const auto& [sym, es] : g.edges())
    if (es.size() != h.edges(sym).size()) return std::nullopt;
  for (const auto& [sym, es] : h.edges())
    if (es.size() != g.edges(sym).size()) return std::nullopt;
  auto pg = degree_profile(g);
  auto ph = degree_profile(h);
  {
    auto a = pg, b = ph;
    std::ranges::sort(a);
    std::ranges::sort(b);
    if (a != b) return std::nullopt;
  }
  Domains d = initial_domains(g, h, pins);
  for (std::size_t v = 0; v < d.size(); ++v)
    std::erase_if(d[v], [&](Vertex w) { return pg[v] != ph[w]; });
  if (has_empty(d)) return std::nullopt;
  SearchOptions options;
  options.injective = true;
  options.budget = budget;
  Search s(g, h, options);
  std::optional<HgMorphism> found;
  std::function<bool(const std::vector<Vertex>&, std::uint64_t)> visit = [&](const std::vector<Vertex>& vmap,
                                                                            std::uint64_t) {
    EdgeMaps em(g, h, vmap, true);
    em.each(
        [&](const HgMorphism& partial) {
          found = partial;
          found->vmap = vmap;
          for (const auto& [sym, es] : g.edges())
            if (es.empty()) found->emaps.erase(sym);
          return false;
        },
        s);
    return !found;
  };
  s.run(std::move(d), visit);
  return found;
}

DisjointUnion disjoint_union(const Hypergraph& g, const Hypergraph& h) {
  DisjointUnion u;
  u.graph = Hypergraph(g.vcount() + h.vcount());
  const auto offset = static_cast<Vertex>(g.vcount());
  for (Vertex v = 0; v < g.vcount(); ++v) u.inl.vmap.push_back(v);
  for (Vertex v = 0; v < h.vcount(); ++v) u.inr.vmap.push_back(v + offset);
  for (const auto& [sym, es] : g.edges())
    for (const Edge& e : es) {
      u.inl.emaps[sym].push_back(u.graph.edges(sym).size());
      u.graph.add_edge(sym, e.src, e.tgt);
    }
  for (const auto& [sym, es] : h.edges())
    for (const Edge& e : es) {
      Edge shifted = e;
      for (Vertex& v : shifted.src) v += offset;
      for (Vertex& v : shifted.tgt) v += offset;
      u.inr.emaps[sym].push_back(u.graph.edges(sym).size());
      u.graph.add_edge(sym, std::move(shifted.src), std::move(shifted.tgt));
    }
  return u;
}

json hypergraph_to_json(const Hypergraph& g) {
  json out;
  out["vcount"] = g.vcount();
  out["edges"] = json::object();
  for (const auto& [sym, es] : g.edges()) {
    json list = json::array();
    for (const Edge& e : es) list.push_back(json::array({e.src, e.tgt}));
    out["edges"][sym] = list;
  }
  return out;
}

Hypergraph hypergraph_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("vcount") || !doc["vcount"].is_number_unsigned())
    throw ParseError("hypergraph must be an object with a nonnegative \"vcount\"");
  Hypergraph g(doc["vcount"].get<std::size_t>());
  if (!doc.contains("edges")) return g;
  if (!doc["edges"].is_object()) throw ParseError("\"edges\" must be an object");
  for (const auto& [sym, list] : doc["edges"].items()) {
    if (!list.is_array()) throw ParseError("edges of " + sym + " must be an array");
    for (const auto& e : list) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_array() || !e[1].is_array())
        throw ParseError("edge entries must be [[src...],[tgt...]]");
      try {
        g.add_edge(sym, e[0].get<std::vector<Vertex>>(), e[1].get<std::vector<Vertex>>());
      } catch (const json::exception& ex) {
        throw ParseError(std::string("bad edge tentacles: ") + ex.what());
      }
    }
  }
  return g;
}

std::string dump_hypergraph(const Hypergraph& g) { return hypergraph_to_json(g).dump(); }

Hypergraph load_hypergraph(std::string_view json_text) { return hypergraph_from_json(parse_json_strict(json_text)); }

json morphism_to_json(const HgMorphism& f) {
  json out;
  out["vmap"] = f.vmap;
  out["emaps"] = json::object();
  for (const auto& [sym, em] : f.emaps) out["emaps"][sym] = em;
  return out;
}

std::string dump_morphism(const HgMorphism& f) { return morphism_to_json(f).dump(); }

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string hypergraph_to_dot(const Hypergraph& g, const std::vector<Vertex>* left, const std::vector<Vertex>* right) {
  std::ostringstream os;
  os << "digraph G {\n  rankdir=LR;\n";
  for (Vertex v = 0; v < g.vcount(); ++v) os << "  v" << v << " [shape=point];\n";
  std::size_t k = 0;
  for (const auto& [sym, es] : g.edges()) {
    for (const Edge& e : es) {
      std::string id = "e" + std::to_string(k++);
      os << "  " << id << " [shape=box,label=\"" << dot_escape(sym) << "\"];\n";
      for (std::size_t p = 0; p < e.src.size(); ++p)
        os << "  v" << e.src[p] << " -> " << id << " [arrowhead=none,headlabel=\"s" << p << "\"];\n";
      for (std::size_t p = 0; p < e.tgt.size(); ++p)
        os << "  " << id << " -> v" << e.tgt[p] << " [arrowhead=none,taillabel=\"t" << p << "\"];\n";
    }
  }
  if (left) {
    for (std::size_t i = 0; i < left->size(); ++i) {
      os << "  l" << i << " [shape=plaintext,label=\"" << i << "\"];\n";
      os << "  l" << i << " -> v" << (*left)[i] << " [style=dotted];\n";
    }
  }
  if (right) {
    for (std::size_t i = 0; i < right->size(); ++i) {
      os << "  r" << i << " [shape=plaintext,label=\"" << i << "\"];\n";
      os << "  v" << (*right)[i] << " -> r" << i << " [style=dotted,dir=back];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace gcq
