#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gcq/sigmodel.hpp"

namespace gcq {

enum class TermKind { Copy, Discard, Merge, Spawn, Id0, Id1, Swap, Gen, Seq, Tensor };

/// A sorted GCQ term. Every node caches its sort; the factories check sorts,
/// so a Term value is always well sorted.
class Term {
 public:
  /// Id0.
  Term();

  static Term copy();
  static Term discard();
  static Term merge();
  static Term spawn();
  static Term id0();
  static Term id1();
  static Term swap();
  /// A generator box with an explicit sort.
  static Term gen(std::string symbol, Sort sort);
  /// A generator box, sort looked up in `sig`. Throws SignatureError.
  static Term gen(const Signature& sig, std::string_view symbol);
  /// Throws SortError when lhs.sort().m != rhs.sort().n.
  static Term seq(Term lhs, Term rhs);
  static Term tensor(Term lhs, Term rhs);

  TermKind kind() const { return node_->kind; }
  Sort sort() const { return node_->sort; }
  /// Symbol of a Gen node; empty otherwise.
  const std::string& symbol() const { return node_->symbol; }
  const Term& lhs() const { return node_->children.at(0); }
  const Term& rhs() const { return node_->children.at(1); }
  bool is_composite() const { return kind() == TermKind::Seq || kind() == TermKind::Tensor; }

  /// Number of non-composite nodes.
  std::size_t leaf_count() const;
  /// Number of Gen nodes.
  std::size_t gen_count() const;

  /// Structural equality.
  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    TermKind kind;
    Sort sort;
    std::string symbol;
    std::vector<Term> children;
  };
  explicit Term(Node node);
  std::shared_ptr<const Node> node_;
};

/// Tensor that drops Id0 operands, so sugar stays free of unit clutter.
Term tensor_compact(Term lhs, Term rhs);
/// Left-nested composition of a nonempty list.
Term seq_all(const std::vector<Term>& terms);

/// Unsorted syntax tree as produced by a parser, before sort inference.
struct RawTerm {
  TermKind kind = TermKind::Id0;
  std::string symbol;
  std::vector<RawTerm> children;
};

/// Annotates every node with its sort. Throws SortError / SignatureError.
Term infer_sort(const RawTerm& raw, const Signature& sig);

/// Grammar: atoms copy, discard, merge, spawn, id, id0, swap, or a symbol
/// name; `(+)` binds tighter than `;`; both associate to the left.
Term parse_gcq(std::string_view text, const Signature& sig);
std::string print_gcq(const Term& t);

/// ⟦t⟧_M by structural recursion. Throws SignatureError when the model
/// interprets a symbol at a different sort.
Relation eval_gcq(const Term& t, const RelModel& model);

/// Identity on n wires: Id0, Id1, Id1 ⊕ Id1, ...
Term id_n(std::size_t n);
/// (n, 2n): copies each of n wires, outputs (x, x) blockwise as (x⃗, x⃗).
Term n_copy(std::size_t n);
/// (n, 0)
Term n_discard(std::size_t n);
/// (2n, n): inverse wiring of n_copy.
Term n_merge(std::size_t n);
/// (0, n)
Term n_spawn(std::size_t n);
/// (n+m, m+n): the first n wires cross over the last m.
Term n_swap(std::size_t n, std::size_t m);

}  // namespace gcq
