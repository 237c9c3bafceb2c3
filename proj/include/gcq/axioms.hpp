#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gcq/term.hpp"

namespace gcq {

enum class AxiomKind { Equality, LeftLeqRight };

struct AxiomEntry {
  std::string name;
  Term lhs;
  Term rhs;
  AxiomKind kind = AxiomKind::Equality;
  /// The generator an L1/L2 instance is about.
  std::optional<std::string> symbol;
};

/// Symmetric monoidal laws smc-i .. smc-viii, the Frobenius laws A C U Aop
/// Cop Uop S F, the adjointness laws UC CU MC CM, then L1 and L2 for every
/// symbol in lexicographic order. The monoidal laws are instantiated with the
/// first symbol of `sig` (copy when the signature is empty).
std::vector<AxiomEntry> axiom_catalog(const Signature& sig);

/// Swaps the sides of an inequality; the name gains a "-rev" suffix.
AxiomEntry reversed(const AxiomEntry& a);

/// Uniform random model: carrier size drawn from [0, max_carrier], each
/// candidate tuple pair kept with a per-symbol density drawn from
/// {0.25, 0.5, 0.75}.
RelModel random_model(const Signature& sig, std::size_t max_carrier, std::mt19937_64& rng);

struct AxiomReport {
  bool passed = true;
  std::size_t models_checked = 0;
  std::optional<RelModel> countermodel;
  std::string detail;
};

/// Checks ⟦lhs⟧ ⊆ ⟦rhs⟧ (and ⊇ for equalities) on the empty model plus
/// `trials` random models with carrier at most max_carrier. Stops at the
/// first countermodel.
AxiomReport verify_axiom_semantic(const AxiomEntry& a, const Signature& sig, std::size_t trials,
                                  std::size_t max_carrier, std::uint64_t seed);

/// Equality: ⟦lhs⟧ ≅ ⟦rhs⟧ as cospans. Inequality: a cospan morphism
/// ⟦rhs⟧ → ⟦lhs⟧ exists.
AxiomReport verify_axiom_graphical(const AxiomEntry& a);

/// Terms of the calculus of relations with meet, converse and top.
class CpTerm {
 public:
  enum class Kind { Top, Meet, Id, Comp, Converse, Rel };

  static CpTerm top();
  static CpTerm meet(CpTerm l, CpTerm r);
  static CpTerm id();
  static CpTerm comp(CpTerm l, CpTerm r);
  static CpTerm converse(CpTerm t);
  static CpTerm rel(std::string symbol);

  Kind kind() const { return node_->kind; }
  const std::string& symbol() const { return node_->symbol; }
  const CpTerm& lhs() const { return node_->children.at(0); }
  const CpTerm& rhs() const { return node_->children.at(1); }

 private:
  struct Node {
    Kind kind;
    std::string symbol;
    std::vector<CpTerm> children;
  };
  explicit CpTerm(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
  std::shared_ptr<const Node> node_;
};

/// Translation into GCQ terms of sort (1,1); symbols become Gen of sort
/// (1,1). Converse bends the wires with spawn;copy and merge;discard.
Term encode_cp(const CpTerm& t);

}  // namespace gcq
