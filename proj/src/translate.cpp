#include "gcq/translate.hpp"

#include <charconv>
#include <cstdio>

#include "gcq/error.hpp"

namespace gcq {

using ccq::Derivation;
using ccq::Formula;
using ccq::Rule;
using ccq::Var;

namespace {

std::optional<Var> indexed(std::string_view name, char prefix) {
  if (name.size() < 2 || name[0] != prefix) return std::nullopt;
  Var v = 0;
  auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), v);
  if (ec != std::errc() || p != name.data() + name.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string to_string(const TwoSidedJudgment& j) {
  auto name = [&](Var v) {
    return v < j.n ? "x" + std::to_string(v) : "y" + std::to_string(v - j.n);
  };
  return std::to_string(j.n) + "," + std::to_string(j.m) + " |- " + ccq::to_string(j.formula, name);
}

TwoSidedJudgment parse_two_sided(std::string_view text, const Signature& ccq_sig) {
  auto turnstile = text.find("|-");
  if (turnstile == std::string_view::npos) throw ParseError("expected 'n,m |- formula'");
  std::string head(text.substr(0, turnstile));
  std::size_t n = 0, m = 0;
  char comma = 0;
  int consumed = 0;
  if (std::sscanf(head.c_str(), " %zu %c %zu %n", &n, &comma, &m, &consumed) != 3 || comma != ',' ||
      static_cast<std::size_t>(consumed) != head.size())
    throw ParseError("expected 'n,m' before '|-'");
  ccq::FreeVarResolver resolve = [n, m](std::string_view name) -> std::optional<Var> {
    if (auto i = indexed(name, 'x'); i && *i < n) return *i;
    if (auto j = indexed(name, 'y'); j && *j < m) return static_cast<Var>(n + *j);
    return std::nullopt;
  };
  Formula f = ccq::parse_formula(text.substr(turnstile + 2), ccq_sig, resolve, static_cast<Var>(n + m));
  return {n, m, std::move(f)};
}

Term theta(const Derivation& d) {
  const std::size_t n = d.context();
  switch (d.rule()) {
    case Rule::Top:
      return Term::id0();
    case Rule::Sigma:
      return Term::gen(d.symbol(), {d.param(), 0});
    case Rule::Eq:
      return Term::seq(Term::merge(), Term::discard());
    case Rule::Exists:
      return Term::seq(tensor_compact(id_n(n), Term::spawn()), theta(d.premises()[0]));
    case Rule::New:
      return tensor_compact(theta(d.premises()[0]), Term::discard());
    case Rule::Swap: {
      std::size_t k = d.param();
      Term wiring = tensor_compact(tensor_compact(id_n(k), Term::swap()), id_n(n - k - 2));
      return Term::seq(wiring, theta(d.premises()[0]));
    }
    case Rule::Ident:
      return Term::seq(tensor_compact(id_n(n - 1), Term::copy()), theta(d.premises()[0]));
    case Rule::Conj:
      return tensor_compact(theta(d.premises()[0]), theta(d.premises()[1]));
  }
  throw Error("unknown rule");
}

Term theta(const ccq::Judgment& j) { return theta(ccq::derive(j)); }

namespace {

Formula eqs(std::initializer_list<std::pair<Var, Var>> pairs) {
  Formula f;
  bool first = true;
  for (auto [a, b] : pairs) {
    f = first ? Formula::eq(a, b) : Formula::conj(f, Formula::eq(a, b));
    first = false;
  }
  return f;
}

}  // namespace

TwoSidedJudgment lambda(const Term& t) {
  const Sort s = t.sort();
  switch (t.kind()) {
    case TermKind::Copy: return {1, 2, eqs({{0, 1}, {0, 2}})};
    case TermKind::Merge: return {2, 1, eqs({{0, 2}, {1, 2}})};
    case TermKind::Swap: return {2, 2, eqs({{0, 3}, {1, 2}})};
    case TermKind::Id1: return {1, 1, Formula::eq(0, 1)};
    case TermKind::Discard:
    case TermKind::Spawn:
    case TermKind::Id0: return {s.n, s.m, Formula::top()};
    case TermKind::Gen: {
      std::vector<Var> args(s.n + s.m);
      for (std::size_t i = 0; i < args.size(); ++i) args[i] = static_cast<Var>(i);
      return {s.n, s.m, Formula::rel(t.symbol(), std::move(args))};
    }
    case TermKind::Tensor: {
      TwoSidedJudgment a = lambda(t.lhs());
      TwoSidedJudgment b = lambda(t.rhs());
      const std::size_t N = a.n + b.n;
      std::vector<std::pair<Var, Var>> ra, rb;
      for (std::size_t j = 0; j < a.m; ++j) ra.emplace_back(static_cast<Var>(N + j), static_cast<Var>(a.n + j));
      for (std::size_t i = 0; i < b.n; ++i) rb.emplace_back(static_cast<Var>(a.n + i), static_cast<Var>(i));
      for (std::size_t j = 0; j < b.m; ++j)
        rb.emplace_back(static_cast<Var>(N + a.m + j), static_cast<Var>(b.n + j));
      return {N, a.m + b.m, Formula::conj(ccq::substitute(a.formula, ra), ccq::substitute(b.formula, rb))};
    }
    case TermKind::Seq: {
      TwoSidedJudgment a = lambda(t.lhs());  // k, mid
      TwoSidedJudgment b = lambda(t.rhs());  // mid, n
      const std::size_t k = a.n, mid = a.m, n = b.m;
      const std::size_t z = k + n;
      std::vector<std::pair<Var, Var>> ra, rb;
      for (std::size_t j = 0; j < mid; ++j) ra.emplace_back(static_cast<Var>(z + j), static_cast<Var>(k + j));
      for (std::size_t i = 0; i < mid; ++i) rb.emplace_back(static_cast<Var>(z + i), static_cast<Var>(i));
      for (std::size_t j = 0; j < n; ++j) rb.emplace_back(static_cast<Var>(k + j), static_cast<Var>(mid + j));
      Formula body = Formula::conj(ccq::substitute(a.formula, ra), ccq::substitute(b.formula, rb));
      for (std::size_t j = mid; j-- > 0;) body = Formula::exists(static_cast<Var>(z + j), std::move(body));
      return {k, n, std::move(body)};
    }
  }
  throw Error("unknown term kind");
}

Signature theta_signature(const Signature& ccq_sig) {
  if (!ccq_sig.is_ccq()) throw SignatureError("CCQ signature must have zero coarities");
  return ccq_sig;
}

Signature lambda_signature(const Signature& gcq_sig) {
  Signature out;
  for (const auto& [name, sort] : gcq_sig.symbols()) out.add(name, {sort.n + sort.m, 0});
  return out;
}

RelModel theta_model(const RelModel& ccq_model) {
  RelModel out(theta_signature(ccq_model.signature()), ccq_model.carrier());
  for (const auto& [name, sort] : ccq_model.signature().symbols()) out.set(name, ccq_model.rho(name));
  return out;
}

RelModel lambda_model(const RelModel& gcq_model) {
  RelModel out(lambda_signature(gcq_model.signature()), gcq_model.carrier());
  for (const auto& [name, sort] : gcq_model.signature().symbols()) {
    RelationBuilder b({sort.n + sort.m, 0}, gcq_model.size());
    for (const auto& [in, o] : gcq_model.rho(name).pairs()) {
      Tuple t = in;
      t.insert(t.end(), o.begin(), o.end());
      b.add(std::move(t), {});
    }
    out.set(name, std::move(b).build());
  }
  return out;
}

}  // namespace gcq
