#pragma once

#include <string>
#include <string_view>

#include "gcq/ccq.hpp"
#include "gcq/term.hpp"

namespace gcq {

/// n,m ⊢ φ. The formula uses single-index variables: x_i is i and y_j is
/// n + j, so it doubles as the judgment n+m ⊢ φ.
struct TwoSidedJudgment {
  std::size_t n = 0;
  std::size_t m = 0;
  ccq::Formula formula;

  ccq::Judgment single() const { return {n + m, formula}; }
};

/// Renders "n,m |- φ" with free variables named x<i> and y<j>.
std::string to_string(const TwoSidedJudgment& j);
/// Parses "n,m |- φ" against a CCQ signature. Throws ParseError /
/// SignatureError.
TwoSidedJudgment parse_two_sided(std::string_view text, const Signature& ccq_sig);

/// Θ, by recursion on the derivation. Result has sort (context, 0).
Term theta(const ccq::Derivation& d);
/// Θ applied to the canonical derivation of j.
Term theta(const ccq::Judgment& j);

/// Λ. Sequential composition introduces middle variables at indices n+m,
/// n+m+1, ... of the result.
TwoSidedJudgment lambda(const Term& t);

/// Same symbols; each CCQ symbol of arity n becomes a GCQ symbol of sort
/// (n, 0). Throws SignatureError on a nonzero coarity.
Signature theta_signature(const Signature& ccq_sig);
/// Each GCQ symbol of sort (n, m) becomes a CCQ symbol of arity n + m.
Signature lambda_signature(const Signature& gcq_sig);

/// ρ'(R) = ρ(R) × {•}.
RelModel theta_model(const RelModel& ccq_model);
/// ρ'(R) = {x⃗ y⃗ | (x⃗, y⃗) ∈ ρ(R)}.
RelModel lambda_model(const RelModel& gcq_model);

}  // namespace gcq
