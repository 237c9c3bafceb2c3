#include "gcq/sigmodel.hpp"

#include <algorithm>
#include <unordered_map>

#include "gcq/error.hpp"
#include "gcq/json_io.hpp"

namespace gcq {

std::string to_string(Sort s) {
  return "(" + std::to_string(s.n) + "," + std::to_string(s.m) + ")";
}

void Signature::add(std::string name, Sort sort) {
  if (name.empty()) throw SignatureError("empty symbol name");
  if (symbols_.contains(name)) throw SignatureError("duplicate symbol: " + name);
  symbols_.emplace(std::move(name), sort);
}

bool Signature::contains(std::string_view name) const { return symbols_.find(name) != symbols_.end(); }

Sort Signature::sort_of(std::string_view name) const {
  auto it = symbols_.find(name);
  if (it == symbols_.end()) throw SignatureError("unknown symbol: " + std::string(name));
  return it->second;
}

bool Signature::is_ccq() const {
  return std::ranges::all_of(symbols_, [](const auto& kv) { return kv.second.m == 0; });
}

namespace {

void canonicalize(std::vector<TuplePair>& pairs) {
  std::ranges::sort(pairs);
  auto dup = std::ranges::unique(pairs);
  pairs.erase(dup.begin(), dup.end());
}

bool in_carrier(const Tuple& t, std::size_t carrier) {
  return std::ranges::all_of(t, [carrier](Element e) { return e < carrier; });
}

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept {
    std::size_t h = t.size();
    for (Element e : t) h ^= e + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

Relation::Relation(Sort sort, std::size_t carrier, std::vector<TuplePair> pairs)
    : sort_(sort), carrier_(carrier), pairs_(std::move(pairs)) {
  for (const auto& [in, out] : pairs_) {
    if (in.size() != sort.n || out.size() != sort.m)
      throw SortError("tuple lengths do not match relation sort " + to_string(sort));
    if (!in_carrier(in, carrier) || !in_carrier(out, carrier))
      throw SignatureError("tuple element outside carrier");
  }
  canonicalize(pairs_);
}

bool Relation::contains(const Tuple& in, const Tuple& out) const {
  return std::ranges::binary_search(pairs_, TuplePair{in, out});
}

bool Relation::subset_of(const Relation& other) const {
  return std::ranges::includes(other.pairs_, pairs_);
}

Relation Relation::identity(std::size_t wires, std::size_t carrier) {
  RelationBuilder b({wires, wires}, carrier);
  for_each_tuple(wires, carrier, [&](const Tuple& t) { b.add(t, t); });
  return std::move(b).build();
}

Relation Relation::unit(std::size_t carrier) {
  RelationBuilder b({0, 0}, carrier);
  b.add({}, {});
  return std::move(b).build();
}

Relation RelationBuilder::build() && {
  canonicalize(rel_.pairs_);
  return std::move(rel_);
}

Relation relation_compose(const Relation& r, const Relation& s) {
  if (r.sort().m != s.sort().n)
    throw SortError("cannot compose " + to_string(r.sort()) + " with " + to_string(s.sort()));
  if (r.carrier() != s.carrier()) throw SortError("cannot compose relations over different carriers");
  std::unordered_map<Tuple, std::vector<const Tuple*>, TupleHash> by_input;
  for (const auto& [in, out] : s.pairs()) by_input[in].push_back(&out);
  RelationBuilder b({r.sort().n, s.sort().m}, r.carrier());
  for (const auto& [x, y] : r.pairs()) {
    auto it = by_input.find(y);
    if (it == by_input.end()) continue;
    for (const Tuple* z : it->second) b.add(x, *z);
  }
  return std::move(b).build();
}

Relation relation_tensor(const Relation& r, const Relation& s) {
  if (r.carrier() != s.carrier()) throw SortError("cannot tensor relations over different carriers");
  RelationBuilder b({r.sort().n + s.sort().n, r.sort().m + s.sort().m}, r.carrier());
  for (const auto& [x, y] : r.pairs()) {
    for (const auto& [u, v] : s.pairs()) {
      Tuple in = x;
      in.insert(in.end(), u.begin(), u.end());
      Tuple out = y;
      out.insert(out.end(), v.begin(), v.end());
      b.add(std::move(in), std::move(out));
    }
  }
  return std::move(b).build();
}

RelModel::RelModel(Signature sig, std::vector<std::string> carrier)
    : sig_(std::move(sig)), carrier_(std::move(carrier)) {
  std::vector<std::string> sorted = carrier_;
  std::ranges::sort(sorted);
  if (std::ranges::adjacent_find(sorted) != sorted.end())
    throw SignatureError("duplicate carrier element");
  for (const auto& [name, sort] : sig_.symbols()) rho_.emplace(name, Relation(sort, carrier_.size()));
}

const Relation& RelModel::rho(std::string_view symbol) const {
  auto it = rho_.find(symbol);
  if (it == rho_.end()) throw SignatureError("unknown symbol: " + std::string(symbol));
  return it->second;
}

void RelModel::set(std::string_view symbol, Relation rel) {
  auto it = rho_.find(symbol);
  if (it == rho_.end()) throw SignatureError("unknown symbol: " + std::string(symbol));
  if (rel.sort() != it->second.sort())
    throw SignatureError("relation for " + std::string(symbol) + " has sort " + to_string(rel.sort()) +
                         ", signature says " + to_string(it->second.sort()));
  if (rel.carrier() != carrier_.size()) throw SignatureError("relation carrier differs from model carrier");
  it->second = std::move(rel);
}

void RelModel::add(std::string_view symbol, Tuple in, Tuple out) {
  const Relation& cur = rho(symbol);
  std::vector<TuplePair> pairs = cur.pairs();
  pairs.emplace_back(std::move(in), std::move(out));
  try {
    set(symbol, Relation(cur.sort(), carrier_.size(), std::move(pairs)));
  } catch (const SortError& e) {
    throw SignatureError(std::string(symbol) + ": " + e.what());
  }
}

Element RelModel::element(std::string_view id) const {
  auto it = std::ranges::find(carrier_, id);
  if (it == carrier_.end()) throw SignatureError("element not in carrier: " + std::string(id));
  return static_cast<Element>(it - carrier_.begin());
}

Signature load_signature(std::string_view json_text) {
  json doc = parse_json_strict(json_text);
  if (!doc.is_object()) throw ParseError("signature must be a JSON object");
  Signature sig;
  for (const auto& [name, value] : doc.items()) {
    if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() ||
        !value[1].is_number_integer())
      throw ParseError("symbol " + name + " must map to [arity, coarity]");
    auto a = value[0].get<long long>();
    auto c = value[1].get<long long>();
    if (a < 0 || c < 0) throw SignatureError("negative arity for symbol " + name);
    sig.add(name, {static_cast<std::size_t>(a), static_cast<std::size_t>(c)});
  }
  return sig;
}

std::string dump_signature(const Signature& sig) {
  json out = json::object();
  for (const auto& [name, sort] : sig.symbols()) out[name] = {sort.n, sort.m};
  return out.dump();
}

namespace {

Tuple read_tuple(const json& arr, const RelModel& model) {
  if (!arr.is_array()) throw ParseError("tuple must be an array");
  Tuple t;
  for (const auto& v : arr) {
    if (!v.is_string()) throw ParseError("tuple elements must be strings");
    t.push_back(model.element(v.get<std::string>()));
  }
  return t;
}

}  // namespace

RelModel load_model(std::string_view json_text, const Signature& sig) {
  json doc = parse_json_strict(json_text);
  if (!doc.is_object() || !doc.contains("carrier") || !doc["carrier"].is_array())
    throw ParseError("model must be an object with a \"carrier\" array");
  std::vector<std::string> carrier;
  for (const auto& v : doc["carrier"]) {
    if (!v.is_string()) throw ParseError("carrier elements must be strings");
    carrier.push_back(v.get<std::string>());
  }
  RelModel model(sig, std::move(carrier));
  if (!doc.contains("relations")) return model;
  const json& rels = doc["relations"];
  if (!rels.is_object()) throw ParseError("\"relations\" must be an object");
  for (const auto& [name, tuples] : rels.items()) {
    if (!sig.contains(name)) throw SignatureError("unknown symbol: " + name);
    Sort sort = sig.sort_of(name);
    if (!tuples.is_array()) throw ParseError("relation " + name + " must be an array");
    std::vector<TuplePair> pairs;
    for (const auto& p : tuples) {
      if (!p.is_array() || p.size() != 2) throw ParseError("relation entries must be [[in...],[out...]]");
      Tuple in = read_tuple(p[0], model);
      Tuple out = read_tuple(p[1], model);
      if (in.size() != sort.n || out.size() != sort.m)
        throw SignatureError("tuple arity mismatch for symbol " + name + ", expected " + to_string(sort));
      pairs.emplace_back(std::move(in), std::move(out));
    }
    model.set(name, Relation(sort, model.size(), std::move(pairs)));
  }
  return model;
}

json relation_to_json(const Relation& rel, const std::vector<std::string>& carrier) {
  json out = json::array();
  auto render = [&](const Tuple& t) {
    json a = json::array();
    for (Element e : t) a.push_back(carrier.at(e));
    return a;
  };
  for (const auto& [in, o] : rel.pairs()) out.push_back(json::array({render(in), render(o)}));
  return out;
}

json model_to_json(const RelModel& model) {
  json out;
  out["carrier"] = model.carrier();
  out["relations"] = json::object();
  for (const auto& [name, sort] : model.signature().symbols())
    out["relations"][name] = relation_to_json(model.rho(name), model.carrier());
  return out;
}

std::string dump_model(const RelModel& model) { return model_to_json(model).dump(); }

std::string dump_relation(const Relation& rel, const std::vector<std::string>& carrier) {
  return relation_to_json(rel, carrier).dump();
}

}  // namespace gcq
