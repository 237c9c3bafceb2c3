#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gcq/sigmodel.hpp"

namespace gcq::ccq {

/// Variable x_i is identified by its index i. Bound variables use the same
/// index space; the parser places them above the declared context.
using Var = std::uint32_t;

class Formula {
 public:
  struct Top;
  struct Conj;
  struct Eq;
  struct Rel;
  struct Exists;
  /// std::variant over the five node kinds; defined below.
  struct Node;

  Formula();  // top

  static Formula top();
  static Formula conj(Formula lhs, Formula rhs);
  static Formula eq(Var i, Var j);
  static Formula rel(std::string symbol, std::vector<Var> args);
  static Formula exists(Var bound, Formula body);

  const Node& node() const { return *node_; }
  template <class T>
  const T* as() const;

  /// Structural (not alpha) equality.
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(Node node);
  std::shared_ptr<const Node> node_;
};

struct Formula::Top {};
struct Formula::Conj {
  Formula lhs;
  Formula rhs;
};
struct Formula::Eq {
  Var lhs;
  Var rhs;
};
struct Formula::Rel {
  std::string symbol;
  std::vector<Var> args;
};
struct Formula::Exists {
  Var bound;
  Formula body;
};
struct Formula::Node : std::variant<Top, Conj, Eq, Rel, Exists> {
  using variant::variant;
};

template <class T>
const T* Formula::as() const {
  return std::get_if<T>(static_cast<const std::variant<Top, Conj, Eq, Rel, Exists>*>(node_.get()));
}

std::set<Var> free_vars(const Formula& f);
/// Largest variable index occurring anywhere, free or bound.
std::optional<Var> max_var(const Formula& f);

/// Simultaneous capture-avoiding substitution. Each pair is
/// (replacement, replaced): every free occurrence of `replaced` becomes
/// `replacement`. Bound variables that would capture a replacement are renamed
/// to fresh indices.
Formula substitute(const Formula& f, const std::vector<std::pair<Var, Var>>& pairs);

/// Equality up to renaming of bound variables.
bool alpha_equivalent(const Formula& a, const Formula& b);

/// Renders free variables with `free_name`; binders are named z0, z1, ... by
/// nesting depth so the output re-parses without shadowing. Conjunction
/// operands that are equations, quantifiers, or right-nested conjunctions are
/// parenthesized.
std::string to_string(const Formula& f, const std::function<std::string(Var)>& free_name);
/// Free variables rendered as x<i>.
std::string to_string(const Formula& f);

/// Resolves a free-variable name to its index, or nullopt when the name is
/// not a variable in scope.
using FreeVarResolver = std::function<std::optional<Var>(std::string_view)>;

/// Parses a formula body. Binders receive indices first_bound, first_bound+1,
/// ... by nesting depth. Throws ParseError / SignatureError.
Formula parse_formula(std::string_view text, const Signature& sig, const FreeVarResolver& free_var,
                      Var first_bound);

/// n ⊢ φ: every free variable of φ is below `context`.
struct Judgment {
  std::size_t context = 0;
  Formula formula;
};

std::string to_string(const Judgment& j);

/// Throws ParseError / SignatureError. Rejects free variables outside the
/// context, shadowing binders, unknown symbols, and arity mismatches.
Judgment parse_ccq(std::string_view text, const Signature& sig);

/// Checks a judgment against a CCQ signature; throws on the first problem.
void validate(const Judgment& j, const Signature& sig);

enum class Rule { Top, Sigma, Exists, Eq, Conj, Swap, Ident, New };

std::string_view rule_name(Rule r);

/// A derivation tree in the eight-rule sorted system. Nodes are built only
/// through the factory functions, which compute each conclusion from the
/// premises, so every tree is valid by construction.
class Derivation {
 public:
  /// 0 ⊢ ⊤
  static Derivation top();
  /// n ⊢ R(x0,...,x_{n-1}) for R of arity n
  static Derivation sigma(std::string symbol, std::size_t arity);
  /// 2 ⊢ x0 = x1
  static Derivation eq();
  /// n ⊢ φ  gives  n-1 ⊢ ∃x_{n-1}.φ
  static Derivation exists(Derivation premise);
  /// m ⊢ φ, n ⊢ ψ  gives  m+n ⊢ φ ∧ ψ[x_{m..m+n-1}/x_{0..n-1}]
  static Derivation conj(Derivation lhs, Derivation rhs);
  /// n ⊢ φ  gives  n ⊢ φ[x_{k+1},x_k/x_k,x_{k+1}] for 0 <= k < n-1
  static Derivation swap(Derivation premise, std::size_t k);
  /// n ⊢ φ  gives  n-1 ⊢ φ[x_{n-2}/x_{n-1}]
  static Derivation ident(Derivation premise);
  /// n ⊢ φ  gives  n+1 ⊢ φ
  static Derivation fresh(Derivation premise);

  Rule rule() const { return rule_; }
  /// Swap position k, or arity for Sigma.
  std::size_t param() const { return param_; }
  const std::string& symbol() const { return symbol_; }
  std::size_t context() const { return context_; }
  const Formula& conclusion() const { return conclusion_; }
  Judgment judgment() const { return {context_, conclusion_}; }
  const std::vector<Derivation>& premises() const { return premises_; }

  std::size_t node_count() const;

 private:
  Derivation(Rule rule, std::size_t context, Formula conclusion, std::vector<Derivation> premises);
  Rule rule_;
  std::size_t param_ = 0;
  std::string symbol_;
  std::size_t context_;
  Formula conclusion_;
  std::vector<Derivation> premises_;
};

/// Builds a derivation whose conclusion is alpha-equivalent to j.formula at
/// context j.context. Throws Error when j is not well formed.
Derivation derive(const Judgment& j);

/// ⟦n ⊢ φ⟧_M ⊆ X^n as a relation of sort (n, 0), by structural recursion on
/// the formula (joins and projections over free variables).
Relation eval_ccq(const Judgment& j, const RelModel& model);

/// The same semantics computed by replaying the rules of a derivation.
Relation eval_derivation(const Derivation& d, const RelModel& model);

}  // namespace gcq::ccq
