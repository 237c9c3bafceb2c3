#include "gcq/containment.hpp"

#include "gcq/error.hpp"
#include "gcq/json_io.hpp"

namespace gcq {

namespace {

void collect_symbols(const Term& t, Signature& sig) {
  if (t.kind() == TermKind::Gen) {
    if (!sig.contains(t.symbol())) {
      sig.add(t.symbol(), t.sort());
    } else if (sig.sort_of(t.symbol()) != t.sort()) {
      throw SignatureError("symbol " + t.symbol() + " used at two sorts");
    }
  } else if (t.is_composite()) {
    collect_symbols(t.lhs(), sig);
    collect_symbols(t.rhs(), sig);
  }
}

}  // namespace

Signature signature_of(const Term& t) {
  Signature sig;
  collect_symbols(t, sig);
  return sig;
}

Signature merge_signatures(const Signature& a, const Signature& b) {
  Signature out = a;
  for (const auto& [name, sort] : b.symbols()) {
    if (!out.contains(name))
      out.add(name, sort);
    else if (out.sort_of(name) != sort)
      throw SignatureError("symbol " + name + " has conflicting sorts");
  }
  return out;
}

RelModel hypergraph_as_model(const Hypergraph& g, const Signature& sig) {
  check_signature(g, sig);
  std::vector<std::string> carrier;
  for (std::size_t v = 0; v < g.vcount(); ++v) carrier.push_back("v" + std::to_string(v));
  RelModel model(sig, std::move(carrier));
  for (const auto& [sym, es] : g.edges()) {
    RelationBuilder b(sig.sort_of(sym), g.vcount());
    for (const Edge& e : es) b.add(e.src, e.tgt);
    model.set(sym, std::move(b).build());
  }
  return model;
}

RelModel natural_model(const Term& c, const Signature& sig) {
  return hypergraph_as_model(term_to_cospan(c).apex, sig);
}

InclusionVerdict decide_inclusion(const Term& c, const Term& d, std::uint64_t budget) {
  if (c.sort() != d.sort())
    throw SortError("cannot compare terms of sorts " + to_string(c.sort()) + " and " + to_string(d.sort()));
  Cospan cc = term_to_cospan(c);
  Cospan dd = term_to_cospan(d);
  InclusionVerdict v;
  v.witness = find_cospan_morphism(dd, cc, budget);
  v.holds = v.witness.has_value();
  if (!v.holds) v.countermodel = hypergraph_as_model(cc.apex, merge_signatures(signature_of(c), signature_of(d)));
  return v;
}

EquivalenceVerdict decide_equivalence(const Term& c, const Term& d, std::uint64_t budget) {
  EquivalenceVerdict v;
  v.forward = decide_inclusion(c, d, budget);
  v.backward = decide_inclusion(d, c, budget);
  v.holds = v.forward.holds && v.backward.holds;
  return v;
}

bool natural_model_check(const Term& c, const Term& d) {
  if (c.sort() != d.sort())
    throw SortError("cannot compare terms of sorts " + to_string(c.sort()) + " and " + to_string(d.sort()));
  Cospan cc = term_to_cospan(c);
  RelModel model = hypergraph_as_model(cc.apex, merge_signatures(signature_of(c), signature_of(d)));
  Tuple in(cc.iota.begin(), cc.iota.end());
  Tuple out(cc.omega.begin(), cc.omega.end());
  return eval_gcq(d, model).contains(in, out);
}

SpanCounts span_semantics(const Term& t, const Hypergraph& g, std::uint64_t budget) {
  Cospan c = term_to_cospan(t);
  SearchOptions opt;
  opt.budget = budget;
  SpanCounts counts;
  for_each_vertex_map(c.apex, g, {}, opt, [&](const std::vector<Vertex>& h, std::uint64_t n) {
    Tuple a, b;
    for (Vertex v : c.iota) a.push_back(h[v]);
    for (Vertex v : c.omega) b.push_back(h[v]);
    counts[{std::move(a), std::move(b)}] += n;
    return true;
  });
  return counts;
}

std::string dump_verdict(const InclusionVerdict& v) {
  json out;
  out["holds"] = v.holds;
  if (v.witness) out["witness"] = morphism_to_json(*v.witness);
  if (v.countermodel) out["countermodel"] = model_to_json(*v.countermodel);
  return out.dump();
}

}  // namespace gcq
