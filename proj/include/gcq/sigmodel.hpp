#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gcq {

/// Number of dangling wires on the left (inputs) and right (outputs).
struct Sort {
  std::size_t n = 0;
  std::size_t m = 0;

  friend bool operator==(const Sort&, const Sort&) = default;
  friend auto operator<=>(const Sort&, const Sort&) = default;
};

std::string to_string(Sort s);

/// Relation symbols with arity and coarity. Symbols iterate in lexicographic
/// order.
class Signature {
 public:
  Signature() = default;

  /// Throws SignatureError on an empty or duplicate name.
  void add(std::string name, Sort sort);

  bool contains(std::string_view name) const;
  /// Throws SignatureError for unknown symbols.
  Sort sort_of(std::string_view name) const;

  const std::map<std::string, Sort, std::less<>>& symbols() const { return symbols_; }
  bool empty() const { return symbols_.empty(); }
  std::size_t size() const { return symbols_.size(); }

  /// True when every coarity is zero.
  bool is_ccq() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, Sort, std::less<>> symbols_;
};

using Element = std::uint32_t;
using Tuple = std::vector<Element>;
using TuplePair = std::pair<Tuple, Tuple>;

/// Calls fn on every tuple of X^length in lexicographic order. X^0 holds
/// exactly the empty tuple; X^k is empty for k >= 1 when X is.
template <class Fn>
void for_each_tuple(std::size_t length, std::size_t carrier, Fn&& fn) {
  if (length > 0 && carrier == 0) return;
  Tuple t(length, 0);
  while (true) {
    fn(static_cast<const Tuple&>(t));
    std::size_t i = length;
    while (i > 0 && ++t[i - 1] == carrier) t[--i] = 0;
    if (i == 0) return;
  }
}

/// A set of (in-tuple, out-tuple) pairs over a carrier {0..carrier-1}.
/// Pairs are kept sorted and unique, so equality is structural.
class Relation {
 public:
  Relation() = default;
  Relation(Sort sort, std::size_t carrier) : sort_(sort), carrier_(carrier) {}
  /// Validates tuple lengths and elements, then canonicalizes.
  Relation(Sort sort, std::size_t carrier, std::vector<TuplePair> pairs);

  Sort sort() const { return sort_; }
  std::size_t carrier() const { return carrier_; }
  const std::vector<TuplePair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool contains(const Tuple& in, const Tuple& out) const;

  bool subset_of(const Relation& other) const;

  static Relation identity(std::size_t wires, std::size_t carrier);
  /// The relation of sort (0,0) containing the single pair (•,•).
  static Relation unit(std::size_t carrier);

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  friend class RelationBuilder;
  Sort sort_;
  std::size_t carrier_ = 0;
  std::vector<TuplePair> pairs_;
};

/// Accumulates pairs without validation, canonicalizing once at the end.
class RelationBuilder {
 public:
  RelationBuilder(Sort sort, std::size_t carrier) : rel_(sort, carrier) {}
  void add(Tuple in, Tuple out) { rel_.pairs_.emplace_back(std::move(in), std::move(out)); }
  Relation build() &&;

 private:
  Relation rel_;
};

/// Sequential composition r ; s. Throws SortError on a middle mismatch or
/// differing carriers.
Relation relation_compose(const Relation& r, const Relation& s);
/// Tensor r ⊕ s: tuple concatenation on both sides.
Relation relation_tensor(const Relation& r, const Relation& s);

/// Finite relational structure. Elements carry string ids for
/// serialization and are numbered densely by position in `carrier`.
class RelModel {
 public:
  RelModel() = default;
  explicit RelModel(Signature sig, std::vector<std::string> carrier = {});

  const Signature& signature() const { return sig_; }
  const std::vector<std::string>& carrier() const { return carrier_; }
  std::size_t size() const { return carrier_.size(); }

  /// Interpretation of a symbol; empty relation when nothing was added.
  const Relation& rho(std::string_view symbol) const;
  /// Replaces the interpretation of `symbol`. Throws SignatureError when the
  /// relation disagrees with the signature or the carrier.
  void set(std::string_view symbol, Relation rel);
  void add(std::string_view symbol, Tuple in, Tuple out);

  /// Element index for an id; throws SignatureError when absent.
  Element element(std::string_view id) const;

  friend bool operator==(const RelModel&, const RelModel&) = default;

 private:
  Signature sig_;
  std::vector<std::string> carrier_;
  std::map<std::string, Relation, std::less<>> rho_;
};

/// Parses {"R":[arity,coarity],...}. Throws ParseError or SignatureError.
Signature load_signature(std::string_view json_text);
std::string dump_signature(const Signature& sig);

/// Parses {"carrier":[...],"relations":{R:[[[in...],[out...]],...]}}.
RelModel load_model(std::string_view json_text, const Signature& sig);
/// Canonical form: carrier in stored order, tuples sorted.
std::string dump_model(const RelModel& model);

/// Relation as [[[in...],[out...]],...] with elements rendered by their ids.
std::string dump_relation(const Relation& rel, const std::vector<std::string>& carrier);

}  // namespace gcq
